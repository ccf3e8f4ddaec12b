#pragma once

// Randomized checks shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <vector>

#include "mvsel/jrns.hpp"
#include "mvsel/kernels.hpp"
#include "mvsel/stepwise.hpp"
#include "mvsel/summary.hpp"
#include "oracles.hpp"

namespace checks {

using namespace mvsel;

inline Matrix random_matrix(std::size_t r, std::size_t c, SeededRng& rng, double scale = 1.0) {
    Matrix m(r, c);
    for (double& v : m.values()) v = scale * rng.standard_normal();
    return m;
}

inline std::size_t uniform_index(SeededRng& rng, std::size_t lo, std::size_t hi) {
    return lo + std::min(hi - lo, static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1)));
}

// Symmetric with positive diagonal; about half the off-diagonals are zero.
inline Matrix random_omega(std::size_t q, SeededRng& rng) {
    Matrix w(q, q);
    for (std::size_t s = 0; s < q; ++s) {
        w(s, s) = 0.5 + 1.5 * rng.uniform();
        for (std::size_t t = s + 1; t < q; ++t) {
            const double v = rng.uniform() < 0.5 ? 0.0 : 0.6 * rng.standard_normal();
            w(s, t) = v;
            w(t, s) = v;
        }
    }
    return w;
}

inline Matrix sparse_matrix(std::size_t r, std::size_t c, SeededRng& rng) {
    Matrix m(r, c);
    for (double& v : m.values()) v = rng.uniform() < 0.5 ? 0.0 : rng.standard_normal();
    return m;
}

struct TinyInstance {
    Dataset data;
    Matrix b;
    Matrix omega;
    double q_incl;
    double slab_var;
};

inline TinyInstance tiny_instance(SeededRng& rng) {
    const std::size_t n = uniform_index(rng, 1, 5);
    const std::size_t p = uniform_index(rng, 1, 3);
    const std::size_t q = uniform_index(rng, 1, 3);
    Matrix x = random_matrix(n, p, rng);
    Matrix y = random_matrix(n, q, rng, 1.5);
    TinyInstance t{Dataset(std::move(x), std::move(y)), sparse_matrix(p, q, rng), random_omega(q, rng),
                   0.05 + 0.9 * rng.uniform(), std::exp(std::log(0.1) + rng.uniform() * std::log(100.0))};
    return t;
}

struct OracleError {
    double prob = 0.0;   // max |analytic - quadrature| inclusion probability
    double mean = 0.0;   // max relative error of the slab mean (scaled by its sd)
    double var = 0.0;    // max relative error of the slab variance
    int entries = 0;

    void absorb(const MixtureUpdate& u, const oracle::SlabPosterior& o) {
        prob = std::max(prob, std::abs(u.inclusion_prob - o.inclusion_prob));
        mean = std::max(mean, std::abs(u.slab_mean - o.mean) / std::sqrt(o.var));
        var = std::max(var, std::abs(u.slab_var - o.var) / o.var);
        ++entries;
    }
};

// b_rs under the joint generalized likelihood.
inline OracleError b_conditional_oracle(std::uint64_t seed, int instances) {
    SeededRng rng(seed);
    OracleError err;
    for (int k = 0; k < instances; ++k) {
        TinyInstance t = tiny_instance(rng);
        ModelState state(t.data, t.b, t.omega);
        state.refresh_m_caches();
        for (std::size_t r = 0; r < t.b.rows(); ++r)
            for (std::size_t s = 0; s < t.b.cols(); ++s) {
                const MixtureUpdate u = b_entry_conditional(state, t.q_incl, t.slab_var, r, s);
                auto loglik = [&](double v) {
                    Matrix b = t.b;
                    b(r, s) = v;
                    return oracle::gen_loglik(t.data.x, t.data.y, b, t.omega);
                };
                err.absorb(u, oracle::slab_posterior_by_quadrature(loglik, t.q_incl, t.slab_var));
            }
    }
    return err;
}

// omega_st (s < t) under the joint generalized likelihood.
inline OracleError omega_offdiag_oracle(std::uint64_t seed, int instances) {
    SeededRng rng(seed);
    OracleError err;
    for (int k = 0; k < instances; ++k) {
        TinyInstance t = tiny_instance(rng);
        const std::size_t q = t.omega.rows();
        const Matrix scatter = gram(residual(t.data.y, t.data.x, t.b));
        for (std::size_t s = 0; s < q; ++s)
            for (std::size_t u_ = s + 1; u_ < q; ++u_) {
                const MixtureUpdate u = omega_offdiag_conditional(t.omega, scatter, t.q_incl, t.slab_var, s, u_);
                auto loglik = [&](double v) {
                    Matrix w = t.omega;
                    w(s, u_) = v;
                    w(u_, s) = v;
                    return oracle::gen_loglik(t.data.x, t.data.y, t.b, w);
                };
                err.absorb(u, oracle::slab_posterior_by_quadrature(loglik, t.q_incl, t.slab_var));
            }
    }
    return err;
}

// b_rs in the column-wise regression with its own error variance.
inline OracleError step1_oracle(std::uint64_t seed, int instances) {
    SeededRng rng(seed);
    OracleError err;
    for (int k = 0; k < instances; ++k) {
        TinyInstance t = tiny_instance(rng);
        const std::size_t n = t.data.n(), p = t.data.p(), q = t.data.q();
        Step1State st{t.b, std::vector<double>(q)};
        for (double& v : st.sigma_sq) v = 0.2 + 2.0 * rng.uniform();
        Hyperparams hp;
        hp.q1 = t.q_incl;
        hp.tau1_sq = t.slab_var;
        for (std::size_t r = 0; r < p; ++r)
            for (std::size_t s = 0; s < q; ++s) {
                const MixtureUpdate u = step1_b_conditional(t.data, st, hp, r, s);
                auto loglik = [&](double v) {
                    double rss = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        double e = t.data.y(i, s);
                        for (std::size_t j = 0; j < p; ++j) e -= t.data.x(i, j) * (j == r ? v : t.b(j, s));
                        rss += e * e;
                    }
                    return -0.5 * rss / st.sigma_sq[s];
                };
                err.absorb(u, oracle::slab_posterior_by_quadrature(loglik, hp.q1, hp.tau1_sq * st.sigma_sq[s]));
            }
    }
    return err;
}

// Long single-site chain on one diagonal entry; KS distance to the quadrature CDF.
inline double diag_mh_ks(std::uint64_t seed, std::size_t steps, bool exact_mh = true) {
    SeededRng rng(seed);
    const std::size_t q = 3;
    const std::size_t n = uniform_index(rng, 1, 5);
    const Matrix e = random_matrix(n + 2, q, rng);
    const Matrix scatter = gram(e);
    Matrix omega = random_omega(q, rng);
    const std::size_t s = uniform_index(rng, 0, q - 1);
    Hyperparams hp;
    hp.lambda = 0.2 + 2.0 * rng.uniform();
    hp.exact_mh = exact_mh;
    hp.proposal_var = 2.0 / scatter(s, s);

    double f = hp.lambda;
    for (std::size_t l = 0; l < q; ++l)
        if (l != s) f += omega(s, l) * scatter(s, l);
    // maximizer of n log w - S w^2 / 2 - f w, by bisection on the derivative
    double lo = 1e-12, hi = 1.0;
    auto deriv = [&](double w) { return static_cast<double>(n) / w - scatter(s, s) * w - f; };
    while (deriv(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deriv(mid) > 0.0 ? lo : hi) = mid;
    }
    const double mode = 0.5 * (lo + hi);
    const double upper = mode + 30.0 / std::sqrt(scatter(s, s));
    const oracle::GridCdf cdf = oracle::diag_cdf(scatter(s, s), f, n, mode, upper);

    omega(s, s) = mode;
    std::vector<double> draws;
    draws.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const DiagStep st = omega_diag_mh_step(omega, scatter, n, hp, s, rng);
        omega(s, s) = st.value;
        draws.push_back(st.value);
    }
    return oracle::ks_statistic(std::move(draws), [&](double v) { return cdf(v); });
}

inline double mode_identity_max_residual(std::uint64_t seed, int cases) {
    SeededRng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < cases; ++k) {
        const double s_ss = std::exp(std::log(0.01) + rng.uniform() * std::log(1e4));
        const double f = 200.0 * rng.uniform() - 100.0;
        const std::size_t n = uniform_index(rng, 1, 500);
        const double w = omega_diag_mode(s_ss, f, n);
        if (!(w > 0.0)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(static_cast<double>(n) / w - s_ss * w - f));
    }
    return worst;
}

// Largest relative discrepancy between the sampler's caches and a from-scratch
// recomputation, over every checkpoint of a JRNS run.
inline double cache_fidelity(std::size_t n, std::size_t p, std::size_t q, std::size_t iters, std::uint64_t seed,
                             int* checkpoints = nullptr) {
    SeededRng rng(seed);
    Matrix x = random_matrix(n, p, rng);
    Matrix b0 = Matrix(p, q);
    for (std::size_t k = 0; k < p; ++k) b0(k, k % q) = 1.0 + rng.uniform();
    Matrix y = mat_mul(x, b0);
    for (double& v : y.values()) v += rng.standard_normal();
    const Dataset data(std::move(x), std::move(y));
    const Matrix xtx = reference::gram(data.x);
    const Matrix xty = reference::mat_mul_tn(data.x, data.y);

    Hyperparams hp = default_hyperparams(p, q);
    hp.burnin = 0;
    hp.iters = iters;
    double worst = 0.0;
    int count = 0;
    auto rel = [](const Matrix& a, const Matrix& b) { return relative_frobenius_diff(a, b); };
    ChainObserver obs = [&](std::size_t, SweepPhase phase, const ModelState& st) {
        const Matrix w2 = reference::mat_mul(st.omega(), st.omega());
        if (!st.omega_sq_valid()) {
            worst = std::numeric_limits<double>::infinity();
            return;
        }
        worst = std::max(worst, rel(st.omega_sq(), w2));
        if (phase == SweepPhase::after_b) {
            if (!st.m_caches_valid()) {
                worst = std::numeric_limits<double>::infinity();
                return;
            }
            worst = std::max(worst, rel(st.m1(), reference::mat_mul(xty, w2)));
            worst = std::max(worst, rel(st.xtx_b(), reference::mat_mul(xtx, st.b())));
        } else {
            if (!st.residuals_valid()) {
                worst = std::numeric_limits<double>::infinity();
                return;
            }
            const Matrix e = reference::residual(data.y, data.x, st.b());
            worst = std::max(worst, rel(st.e(), e));
            worst = std::max(worst, rel(st.s(), reference::gram(e)));
        }
        ++count;
    };
    SeededRng chain_rng(seed + 1);
    run_jrns(data, hp, std::nullopt, chain_rng, obs);
    if (checkpoints) *checkpoints = count;
    return worst;
}

struct PdInvariance {
    bool identical = false;
    bool diagonals_moved = false;
};

// Summaries from the raw Omega draws against summaries from h(Omega) draws.
inline PdInvariance pd_invariance(std::uint64_t seed) {
    SeededRng rng(seed);
    const std::size_t n = 40, p = 8, q = 6;
    Matrix x = random_matrix(n, p, rng);
    Matrix b0(p, q);
    b0(0, 0) = 1.5;
    b0(3, 2) = -1.2;
    Matrix y = mat_mul(x, b0);
    for (double& v : y.values()) v += rng.standard_normal();
    const Dataset data(std::move(x), std::move(y));
    Hyperparams hp = default_hyperparams(p, q);
    hp.q2 = 0.3;
    hp.burnin = 100;
    hp.iters = 300;
    SeededRng chain_rng(seed + 7);
    const ChainOutput chain = run_jrns(data, hp, std::nullopt, chain_rng);
    // eps above every draw's smallest eigenvalue so each draw is actually shifted
    double eps = 0.0;
    for (const Matrix& w : chain.omega_samples) eps = std::max(eps, min_eigenvalue_sym(w));
    eps += 0.5;

    const SelectionSummary raw = summarize(chain.b_samples, chain.omega_samples, 0.95, 0.0);
    const SelectionSummary proj = summarize(chain.b_samples, chain.omega_samples, 0.95, eps);
    PdInvariance out;
    bool same = raw.gamma_hat == proj.gamma_hat && raw.eta_hat == proj.eta_hat && raw.incl_b == proj.incl_b &&
                raw.b_hat == proj.b_hat && raw.ci_b == proj.ci_b;
    bool moved = true;
    for (std::size_t s = 0; s < q; ++s) {
        moved = moved && raw.omega_hat(s, s) != proj.omega_hat(s, s);
        for (std::size_t t = 0; t < q; ++t) {
            if (s == t) continue;
            same = same && raw.incl_omega(s, t) == proj.incl_omega(s, t) &&
                   raw.omega_hat(s, t) == proj.omega_hat(s, t) && raw.ci_omega(s, t) == proj.ci_omega(s, t);
        }
    }
    out.identical = same;
    out.diagonals_moved = moved;
    return out;
}

}  // namespace checks
