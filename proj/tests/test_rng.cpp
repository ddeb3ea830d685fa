#include <doctest.h>

#include <algorithm>
#include <vector>

#include "wb/rng.hpp"

TEST_CASE("rng determinism and frozen first draws") {
    wb::Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // frozen values pin the generator scheme itself; a library change that
    // alters the stream must be caught, it would silently reshuffle folds
    wb::Rng c(0);
    CHECK(c.next_u64() == 0xe220a8397b1dcdafULL);  // splitmix64(seed=0) first output
    CHECK(c.next_u64() == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("next_below stays in range and covers values") {
    wb::Rng rng(7);
    std::vector<int> hits(10, 0);
    for (int i = 0; i < 10000; ++i) {
        uint64_t v = rng.next_below(10);
        REQUIRE(v < 10);
        ++hits[v];
    }
    for (int h : hits) CHECK(h > 800);
}

TEST_CASE("next_double in [0,1)") {
    wb::Rng rng(3);
    double mean = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double v = rng.next_double();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        mean += v;
    }
    mean /= 10000;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("gaussian moments") {
    wb::Rng rng(11);
    double mean = 0.0, var = 0.0;
    const int n = 20000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.next_gaussian();
    for (double x : xs) mean += x;
    mean /= n;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= n;
    CHECK(mean == doctest::Approx(0.0).epsilon(0.05));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("fork gives independent reproducible streams") {
    wb::Rng master(99);
    master.next_u64();  // advancing the parent must not affect forks
    wb::Rng f1 = wb::Rng(99).fork(5);
    wb::Rng f2 = master.fork(5);
    CHECK(f1.next_u64() == f2.next_u64());
    CHECK(wb::Rng(99).fork(5).next_u64() != wb::Rng(99).fork(6).next_u64());
}

TEST_CASE("derive_seed distinguishes tags") {
    CHECK(wb::derive_seed(1, "a") != wb::derive_seed(1, "b"));
    CHECK(wb::derive_seed(1, "a") != wb::derive_seed(2, "a"));
    CHECK(wb::derive_seed(1, "a") == wb::derive_seed(1, "a"));
}

TEST_CASE("shuffle is a permutation and seed-stable") {
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    std::vector<int> w = v;
    wb::Rng(123).shuffle(v);
    wb::Rng(123).shuffle(w);
    CHECK(v == w);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}
