#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace wb {

// Counter-based splitmix64 generator. Every draw is a pure function of the
// seed and the draw index, so fold assignments, patch corners, crops and
// tree fits reproduce bit-exactly across platforms and compilers.
class Rng {
  public:
    explicit Rng(uint64_t seed) : seed_(seed), state_(seed) {}

    uint64_t next_u64();

    // Uniform in [0, n), n > 0. Rejection sampling, no modulo bias.
    uint64_t next_below(uint64_t n);

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_double();

    // Standard normal via Box-Muller.
    double next_gaussian();

    // Independent stream derived from the construction seed (not from the
    // current state), e.g. one stream per tree or per image.
    Rng fork(uint64_t stream) const;

    uint64_t seed() const { return seed_; }

    // Fisher-Yates, driven by this generator.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    uint64_t seed_;
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64 finalizer; used for seed derivation.
uint64_t mix64(uint64_t x);

uint64_t fnv1a64(const void* data, size_t len);
uint64_t fnv1a64(std::string_view s);

// Deterministic sub-seed for a named stream, e.g. per record id.
inline uint64_t derive_seed(uint64_t master, std::string_view tag) {
    return mix64(master ^ fnv1a64(tag));
}

}  // namespace wb
