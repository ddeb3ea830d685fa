#include <doctest.h>

#include <cmath>
#include <vector>

#include "wb/errors.hpp"
#include "wb/image_io.hpp"
#include "wb/ocsvm.hpp"
#include "wb/rng.hpp"

using namespace wb;

namespace {

RowMatrix ring_data(int n, uint64_t seed, double radius = 1.0, double noise = 0.05) {
    Rng rng(seed);
    RowMatrix X = make_matrix(n, 2);
    for (int r = 0; r < n; ++r) {
        double angle = 2.0 * M_PI * rng.next_double();
        double rad = radius + noise * rng.next_gaussian();
        X.at(r, 0) = rad * std::cos(angle);
        X.at(r, 1) = rad * std::sin(angle);
    }
    return X;
}

}  // namespace

TEST_CASE("dual constraints hold; coefficients sum to one") {
    RowMatrix X = ring_data(60, 3);
    OneClassSvmParams params;
    params.nu = 0.3;
    OneClassSvmModel model = fit_ocsvm(X, params);
    double box = 1.0 / (params.nu * 60);
    double sum = 0.0;
    for (double a : model.dual_coefficients) {
        CHECK(a > 0.0);
        CHECK(a <= box + 1e-12);
        sum += a;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(model.kkt_residual <= 1e-4);
}

TEST_CASE("two identical points: training point scores above a distant one") {
    RowMatrix X = make_matrix(2, 1, 5.0);
    OneClassSvmParams params;
    params.nu = 0.5;
    params.standardize = false;
    OneClassSvmModel model = fit_ocsvm(X, params);
    double at_train = score_ocsvm(model, std::vector<double>{5.0});
    double far = score_ocsvm(model, std::vector<double>{500.0});
    CHECK(at_train > far);
}

TEST_CASE("nu=1 on two points forces the (0.5, 0.5) dual") {
    RowMatrix X = make_matrix(2, 1);
    X.data = {-1.0, 1.0};
    OneClassSvmParams params;
    params.nu = 1.0;
    params.standardize = false;
    OneClassSvmModel model = fit_ocsvm(X, params);
    REQUIRE(model.dual_coefficients.size() == 2);
    CHECK(model.dual_coefficients[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(model.dual_coefficients[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("nu-property on the ring: outlier fraction near nu") {
    RowMatrix X = ring_data(200, 7);
    OneClassSvmParams params;
    params.nu = 0.1;
    OneClassSvmModel model = fit_ocsvm(X, params);
    CHECK(model.kkt_residual <= 1e-4);

    int negative = 0;
    for (int r = 0; r < X.rows; ++r) {
        std::vector<double> x = {X.at(r, 0), X.at(r, 1)};
        if (score_ocsvm(model, x) < 0.0) ++negative;
    }
    double fraction = negative / 200.0;
    CHECK(fraction >= 0.05);
    CHECK(fraction <= 0.15);
}

TEST_CASE("nu=0.5 marks roughly half the training set negative at most") {
    RowMatrix X = ring_data(120, 11);
    OneClassSvmParams params;
    params.nu = 0.5;
    OneClassSvmModel model = fit_ocsvm(X, params);
    int negative = 0;
    for (int r = 0; r < X.rows; ++r) {
        std::vector<double> x = {X.at(r, 0), X.at(r, 1)};
        if (score_ocsvm(model, x) < 0.0) ++negative;
    }
    CHECK(negative <= 66);  // ν-property: at most ~50% plus slack
}

TEST_CASE("score far from the data tends to -rho") {
    RowMatrix X = ring_data(50, 13);
    OneClassSvmParams params;
    params.nu = 0.2;
    params.standardize = false;
    OneClassSvmModel model = fit_ocsvm(X, params);
    double far = score_ocsvm(model, std::vector<double>{1e6, -1e6});
    CHECK(far == doctest::Approx(-model.rho).epsilon(1e-9));
    CHECK(far < 0.0);
}

TEST_CASE("batch scoring equals one-by-one scoring") {
    RowMatrix X = ring_data(80, 17);
    OneClassSvmModel model = fit_ocsvm(X);
    std::vector<double> first_pass, second_pass;
    for (int r = 0; r < X.rows; ++r) {
        std::vector<double> x = {X.at(r, 0), X.at(r, 1)};
        first_pass.push_back(score_ocsvm(model, x));
    }
    for (int r = 0; r < X.rows; ++r) {
        std::vector<double> x = {X.at(r, 0), X.at(r, 1)};
        second_pass.push_back(score_ocsvm(model, x));
    }
    CHECK(first_pass == second_pass);
}

TEST_CASE("determinism of fits") {
    RowMatrix X = ring_data(70, 19);
    OneClassSvmModel a = fit_ocsvm(X);
    OneClassSvmModel b = fit_ocsvm(X);
    CHECK(a.rho == b.rho);
    CHECK(a.dual_coefficients == b.dual_coefficients);
    CHECK(a.support_vectors.data == b.support_vectors.data);
}

TEST_CASE("gamma scale and standardization knobs") {
    Rng rng(23);
    RowMatrix X = make_matrix(50, 2);
    for (int r = 0; r < 50; ++r) {
        X.at(r, 0) = 1000.0 + 10.0 * rng.next_gaussian();
        X.at(r, 1) = 0.001 * rng.next_gaussian();
    }
    OneClassSvmParams params;
    OneClassSvmModel scaled = fit_ocsvm(X, params);
    CHECK(scaled.scaler.enabled);
    // standardized input has unit variance, so "scale" lands near 1/k
    CHECK(scaled.gamma == doctest::Approx(0.5).epsilon(0.05));

    params.standardize = false;
    OneClassSvmModel raw = fit_ocsvm(X, params);
    CHECK(!raw.scaler.enabled);
    CHECK(raw.gamma != scaled.gamma);

    params.gamma = 2.5;
    OneClassSvmModel fixed = fit_ocsvm(X, params);
    CHECK(fixed.gamma == 2.5);
}

TEST_CASE("constant training matrix falls back to gamma 1") {
    RowMatrix X = make_matrix(10, 2, 3.0);
    OneClassSvmParams params;
    params.standardize = false;
    OneClassSvmModel model = fit_ocsvm(X, params);
    CHECK(model.gamma == 1.0);
}

TEST_CASE("input validation") {
    RowMatrix one = make_matrix(1, 1, 0.0);
    CHECK_THROWS_AS(fit_ocsvm(one), Error);
    RowMatrix X = ring_data(10, 29);
    OneClassSvmParams params;
    params.nu = 0.0;
    CHECK_THROWS_AS(fit_ocsvm(X, params), Error);
    params.nu = 1.5;
    CHECK_THROWS_AS(fit_ocsvm(X, params), Error);
    OneClassSvmModel model = fit_ocsvm(X);
    std::vector<double> wrong_dim = {1.0};
    CHECK_THROWS_AS(score_ocsvm(model, wrong_dim), Error);
}
