#pragma once

#include <cstdint>
#include <random>

namespace mvsel {

/// Seeded random stream: std::mt19937_64 plus a persistent standard-normal
/// generator. Equal seeds give equal sequences within one build. Single owner;
/// never share an instance between threads.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double standard_normal() { return normal_(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer over (master, index). Used for replicate and column streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// N(mean, variance); variance 0 returns mean.
double draw_normal(SeededRng& rng, double mean, double variance);
double draw_uniform(SeededRng& rng, double low = 0.0, double high = 1.0);
/// Gamma with shape and *rate* (mean shape / rate).
double draw_gamma(SeededRng& rng, double shape, double rate);
/// Inverse-Gamma(shape, scale): 1 / Gamma(shape, rate = scale).
double draw_inverse_gamma(SeededRng& rng, double shape, double scale);
double draw_beta(SeededRng& rng, double a, double b);
bool draw_bernoulli(SeededRng& rng, double p);

}  // namespace mvsel
