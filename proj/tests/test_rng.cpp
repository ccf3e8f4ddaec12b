#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mvsel/rng.hpp"

using namespace mvsel;

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

template <class F>
Moments sample_moments(F draw, int m) {
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < m; ++i) {
        const double v = draw();
        s += v;
        s2 += v * v;
    }
    const double mean = s / m;
    return {mean, s2 / m - mean * mean};
}

}  // namespace

TEST_CASE("same seed, same stream") {
    SeededRng a(99), b(99), c(100);
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(a.standard_normal() == b.standard_normal());
    CHECK(a.uniform() != c.uniform());
}

TEST_CASE("derived seeds are distinct and stable") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 20; ++m)
        for (std::uint64_t i = 0; i < 200; ++i) seen.insert(derive_seed(m, i));
    CHECK(seen.size() == 4000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    CHECK(derive_seed(7, 3) != derive_seed(3, 7));
}

TEST_CASE("distribution moments") {
    SeededRng rng(1);
    const int m = 400000;
    auto n = sample_moments([&] { return draw_normal(rng, 2.0, 9.0); }, m);
    CHECK(n.mean == doctest::Approx(2.0).epsilon(0.01));
    CHECK(n.var == doctest::Approx(9.0).epsilon(0.01));
    // Gamma(3, rate 2): mean 1.5, var 0.75
    auto g = sample_moments([&] { return draw_gamma(rng, 3.0, 2.0); }, m);
    CHECK(g.mean == doctest::Approx(1.5).epsilon(0.01));
    CHECK(g.var == doctest::Approx(0.75).epsilon(0.02));
    // Inv-Gamma(5, 8): mean 8/4 = 2, var 64 / (16 * 3) = 4/3
    auto ig = sample_moments([&] { return draw_inverse_gamma(rng, 5.0, 8.0); }, m);
    CHECK(ig.mean == doctest::Approx(2.0).epsilon(0.01));
    CHECK(ig.var == doctest::Approx(4.0 / 3.0).epsilon(0.05));
    // Beta(2, 5): mean 2/7, var 10 / (49 * 8)
    auto be = sample_moments([&] { return draw_beta(rng, 2.0, 5.0); }, m);
    CHECK(be.mean == doctest::Approx(2.0 / 7.0).epsilon(0.01));
    CHECK(be.var == doctest::Approx(10.0 / 392.0).epsilon(0.02));
    auto u = sample_moments([&] { return draw_uniform(rng, -1.0, 3.0); }, m);
    CHECK(u.mean == doctest::Approx(1.0).epsilon(0.01));
    CHECK(u.var == doctest::Approx(16.0 / 12.0).epsilon(0.01));
    auto bern = sample_moments([&] { return draw_bernoulli(rng, 0.3) ? 1.0 : 0.0; }, m);
    CHECK(bern.mean == doctest::Approx(0.3).epsilon(0.01));
}

TEST_CASE("degenerate and invalid parameters") {
    SeededRng rng(2);
    CHECK(draw_normal(rng, 4.5, 0.0) == 4.5);
    CHECK_THROWS_AS(draw_normal(rng, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(draw_gamma(rng, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(draw_gamma(rng, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(draw_inverse_gamma(rng, 1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(draw_beta(rng, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(draw_bernoulli(rng, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(draw_uniform(rng, 1.0, 0.0), std::invalid_argument);
}
