#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "checks.hpp"
#include "mvsel/datagen.hpp"
#include "mvsel/stepwise.hpp"

using namespace mvsel;

namespace {

Dataset column_problem(std::uint64_t seed) {
    SimConfig cfg;
    cfg.n = 60;
    cfg.p = 8;
    cfg.q = 5;
    cfg.nnz_b = 5;
    cfg.nnz_omega = 3;
    cfg.seed = seed;
    return simulate(cfg).data;
}

}  // namespace

TEST_CASE("column conditional matches numerical integration") {
    const auto e = checks::step1_oracle(303, 15);
    CHECK(e.entries > 20);
    CHECK(e.prob < 1e-8);
    CHECK(e.mean < 1e-8);
    CHECK(e.var < 1e-8);
}

TEST_CASE("error-variance conditional, hand-worked case") {
    // y = (1, 3), x = (1, 2), b = 1: residual (0, 1), RSS 1, one nonzero, tau^2 = 1
    const Dataset d(Matrix{{1.0}, {2.0}}, Matrix{{1.0}, {3.0}});
    Step1State st{Matrix{{1.0}}, {0.5}};
    Hyperparams hp;
    hp.alpha = 1.0;
    hp.beta = 1.0;
    hp.tau1_sq = 1.0;
    const InverseGammaParams ig = step1_sigma_posterior(d, st, hp, 0);
    CHECK(ig.shape == doctest::Approx(2.5));
    CHECK(ig.scale == doctest::Approx(2.0));
    SeededRng rng(1);
    double acc = 0.0;
    for (int i = 0; i < 200000; ++i) acc += step1_sigma_update(d, st, hp, 0, rng);
    CHECK(acc / 200000 == doctest::Approx(2.0 / 1.5).epsilon(0.01));
}

TEST_CASE("stage one is independent of the thread count") {
    const Dataset d = column_problem(4);
    Hyperparams hp = default_hyperparams(d.p(), d.q());
    hp.burnin = 30;
    hp.iters = 40;
    Step1Output runs[3];
    int k = 0;
    for (int threads : {1, 3, 4}) {
        omp_set_num_threads(threads);
        SeededRng rng(9);
        runs[k++] = run_step1(d, hp, rng);
    }
    omp_set_num_threads(1);
    for (int i = 1; i < 3; ++i) {
        CHECK(runs[i].chain.b_samples == runs[0].chain.b_samples);
        CHECK(runs[i].chain.sigma_sq_samples == runs[0].chain.sigma_sq_samples);
        CHECK(runs[i].tau1_sq == runs[0].tau1_sq);
    }
    CHECK(runs[0].chain.b_samples.size() == 40);
    CHECK(runs[0].chain.hyper_trace.size() == 70);
}

TEST_CASE("columns use their own streams") {
    const Dataset d = column_problem(5);
    Hyperparams hp = default_hyperparams(d.p(), d.q());
    hp.adaptive_tau = false;
    hp.burnin = 10;
    hp.iters = 20;
    std::vector<std::uint64_t> seeds{11, 12, 13, 14, 15};
    SeededRng r1(0), r2(0);
    const Step1Output a = run_step1(d, hp, r1, seeds);
    seeds[3] = 99;
    const Step1Output b = run_step1(d, hp, r2, seeds);
    bool col3_differs = false;
    for (std::size_t it = 0; it < a.chain.b_samples.size(); ++it)
        for (std::size_t r = 0; r < d.p(); ++r) {
            for (std::size_t s : {0, 1, 2, 4}) CHECK(a.chain.b_samples[it](r, s) == b.chain.b_samples[it](r, s));
            col3_differs = col3_differs || a.chain.b_samples[it](r, 3) != b.chain.b_samples[it](r, 3);
        }
    CHECK(col3_differs);
    std::vector<std::uint64_t> short_seeds{1, 2};
    CHECK_THROWS_AS(run_step1(d, hp, r1, short_seeds), std::invalid_argument);
}

TEST_CASE("closed-form coefficient estimate") {
    // one active predictor: (x^T x + 1/tau^2)^-1 x^T y = 7 / 6
    const Dataset d(Matrix{{1.0}, {2.0}}, Matrix{{1.0}, {3.0}});
    Mask g(1, 1);
    g.set(0, 0, true);
    CHECK(posterior_mean_b(d, g, 1.0)(0, 0) == doctest::Approx(7.0 / 6.0).epsilon(1e-14));
    CHECK(posterior_mean_b(d, g, 1e12)(0, 0) == doctest::Approx(7.0 / 5.0).epsilon(1e-10));
    CHECK(posterior_mean_b(d, Mask(1, 1), 1.0)(0, 0) == 0.0);
    CHECK_THROWS_AS(posterior_mean_b(d, Mask(2, 1), 1.0), std::invalid_argument);

    // two active predictors against a hand solve of the 2x2 system
    SeededRng rng(2);
    const Dataset d2(checks::random_matrix(10, 3, rng), checks::random_matrix(10, 1, rng));
    Mask g2(3, 1);
    g2.set(0, 0, true);
    g2.set(2, 0, true);
    const Matrix est = posterior_mean_b(d2, g2, 2.0);
    double a00 = 0.5, a02 = 0.0, a22 = 0.5, r0 = 0.0, r2 = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        a00 += d2.x(i, 0) * d2.x(i, 0);
        a02 += d2.x(i, 0) * d2.x(i, 2);
        a22 += d2.x(i, 2) * d2.x(i, 2);
        r0 += d2.x(i, 0) * d2.y(i, 0);
        r2 += d2.x(i, 2) * d2.y(i, 0);
    }
    const double det = a00 * a22 - a02 * a02;
    CHECK(est(0, 0) == doctest::Approx((a22 * r0 - a02 * r2) / det).epsilon(1e-12));
    CHECK(est(2, 0) == doctest::Approx((a00 * r2 - a02 * r0) / det).epsilon(1e-12));
    CHECK(est(1, 0) == 0.0);
}

TEST_CASE("two-stage fit recovers a strong signal") {
    SimConfig cfg;
    cfg.n = 100;
    cfg.p = 10;
    cfg.q = 6;
    cfg.nnz_b = 4;
    cfg.nnz_omega = 2;
    cfg.seed = 21;
    const Simulation sim = simulate(cfg);
    Hyperparams hp = default_hyperparams(cfg.p, cfg.q);
    hp.burnin = 200;
    hp.iters = 400;
    SeededRng rng(3);
    const StepwiseOutput out = run_stepwise(sim.data, hp, rng);
    CHECK(out.step1.gamma_hat == sim.truth.gamma_true);
    CHECK(out.e_hat == residual_matrix(sim.data, out.b_hat));
    CHECK(out.step2.chain.omega_samples.size() == 400);
    CHECK(out.step2.eta_hat.rows() == 6);
    for (std::size_t s = 0; s < 6; ++s) {
        CHECK_FALSE(out.step2.eta_hat(s, s));
        for (std::size_t t = 0; t < 6; ++t) CHECK(out.step2.eta_hat(s, t) == out.step2.eta_hat(t, s));
    }
    SeededRng rng2(3);
    const StepwiseOutput avg = run_stepwise(sim.data, hp, rng2, StepwiseEstimator::mcmc_average);
    CHECK(avg.step1.gamma_hat == out.step1.gamma_hat);
    CHECK(relative_frobenius_diff(avg.b_hat, sim.truth.b0) < 0.1);
    CHECK(relative_frobenius_diff(out.b_hat, sim.truth.b0) < 0.1);
}
