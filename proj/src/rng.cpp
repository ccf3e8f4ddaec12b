#include "mvsel/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mvsel {

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double draw_normal(SeededRng& rng, double mean, double variance) {
    check(std::isfinite(mean) && variance >= 0.0 && std::isfinite(variance),
          "draw_normal: invalid parameters");
    if (variance == 0.0) return mean;
    return mean + std::sqrt(variance) * rng.standard_normal();
}

double draw_uniform(SeededRng& rng, double low, double high) {
    check(low < high, "draw_uniform: low must be below high");
    return low + (high - low) * rng.uniform();
}

double draw_gamma(SeededRng& rng, double shape, double rate) {
    check(shape > 0.0 && rate > 0.0 && std::isfinite(shape) && std::isfinite(rate),
          "draw_gamma: shape and rate must be positive");
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(rng.engine());
}

double draw_inverse_gamma(SeededRng& rng, double shape, double scale) {
    check(shape > 0.0 && scale > 0.0, "draw_inverse_gamma: shape and scale must be positive");
    return 1.0 / draw_gamma(rng, shape, scale);
}

double draw_beta(SeededRng& rng, double a, double b) {
    check(a > 0.0 && b > 0.0, "draw_beta: parameters must be positive");
    const double x = draw_gamma(rng, a, 1.0);
    const double y = draw_gamma(rng, b, 1.0);
    return x / (x + y);
}

bool draw_bernoulli(SeededRng& rng, double p) {
    check(p >= 0.0 && p <= 1.0, "draw_bernoulli: probability outside [0,1]");
    return rng.uniform() < p;
}

}  // namespace mvsel
