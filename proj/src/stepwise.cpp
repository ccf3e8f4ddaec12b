#include "mvsel/stepwise.hpp"

#include <omp.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mvsel/kernels.hpp"
#include "mvsel/summary.hpp"

namespace mvsel {

namespace {

double log_odds(double q, double tau_sq, double c1, double exponent) {
    return std::log(q) - std::log1p(-q) - 0.5 * std::log(tau_sq) - 0.5 * std::log(c1) + exponent;
}

double sample_variance(const Matrix& y, std::size_t s) {
    const std::size_t n = y.rows();
    if (n < 2) return 1.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += y(i, s);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (y(i, s) - mean) * (y(i, s) - mean);
    const double v = ss / static_cast<double>(n - 1);
    return v > 0.0 ? v : 1.0;
}

// Per-column working data for the stage-one sweeps. Rows of xt are columns of X.
struct ColumnSampler {
    const Matrix& xt;               // p x n
    std::span<const double> xtx_diag;  // p
    std::size_t n;
    std::size_t p;

    // One Gibbs scan of column s: every b_rs in order, then sigma_s^2.
    void sweep(const Matrix& y, Matrix& b, std::vector<double>& sigma_sq, std::size_t s,
               const Hyperparams& hp, SeededRng& rng, std::vector<double>& resid) const {
        for (std::size_t i = 0; i < n; ++i) resid[i] = y(i, s);
        for (std::size_t r = 0; r < p; ++r) {
            const double brs = b(r, s);
            if (brs == 0.0) continue;
            const auto xr = xt.row(r);
            for (std::size_t i = 0; i < n; ++i) resid[i] -= xr[i] * brs;
        }
        const double sig = sigma_sq[s];
        for (std::size_t r = 0; r < p; ++r) {
            const auto xr = xt.row(r);
            const double old = b(r, s);
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += xr[i] * resid[i];
            const double c1 = xtx_diag[r] + 1.0 / hp.tau1_sq;
            const double c2 = dot + xtx_diag[r] * old;
            MixtureUpdate u;
            u.slab_mean = c2 / c1;
            u.slab_var = sig / c1;
            u.inclusion_prob =
                inclusion_from_log_odds(log_odds(hp.q1, hp.tau1_sq, c1, c2 * c2 / (2.0 * sig * c1)));
            const double v = draw_mixture(u, rng);
            if (v != old) {
                const double delta = v - old;
                for (std::size_t i = 0; i < n; ++i) resid[i] -= xr[i] * delta;
                b(r, s) = v;
            }
        }
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) rss += resid[i] * resid[i];
        double bsq = 0.0;
        std::size_t nonzero = 0;
        for (std::size_t r = 0; r < p; ++r) {
            const double v = b(r, s);
            if (v != 0.0) {
                ++nonzero;
                bsq += v * v;
            }
        }
        const double shape = hp.alpha + 0.5 * static_cast<double>(n + nonzero);
        const double scale = hp.beta + 0.5 * rss + bsq / (2.0 * hp.tau1_sq);
        sigma_sq[s] = draw_inverse_gamma(rng, shape, scale);
    }
};

}  // namespace

MixtureUpdate step1_b_conditional(const Dataset& data, const Step1State& state,
                                  const Hyperparams& hp, std::size_t r, std::size_t s) {
    const std::size_t n = data.n();
    const std::size_t p = data.p();
    if (r >= p || s >= data.q()) throw std::out_of_range("step1_b_conditional: index");
    double xsq = 0.0;
    double c2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xir = data.x(i, r);
        xsq += xir * xir;
        double partial = data.y(i, s);
        for (std::size_t j = 0; j < p; ++j)
            if (j != r) partial -= data.x(i, j) * state.b(j, s);
        c2 += xir * partial;
    }
    const double sig = state.sigma_sq[s];
    const double c1 = xsq + 1.0 / hp.tau1_sq;
    MixtureUpdate u;
    u.slab_mean = c2 / c1;
    u.slab_var = sig / c1;
    u.inclusion_prob =
        inclusion_from_log_odds(log_odds(hp.q1, hp.tau1_sq, c1, c2 * c2 / (2.0 * sig * c1)));
    return u;
}

InverseGammaParams step1_sigma_posterior(const Dataset& data, const Step1State& state,
                                         const Hyperparams& hp, std::size_t s) {
    const std::size_t n = data.n();
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = data.y(i, s);
        for (std::size_t j = 0; j < data.p(); ++j) r -= data.x(i, j) * state.b(j, s);
        rss += r * r;
    }
    std::size_t nonzero = 0;
    double bsq = 0.0;
    for (std::size_t j = 0; j < data.p(); ++j) {
        const double v = state.b(j, s);
        if (v != 0.0) {
            ++nonzero;
            bsq += v * v;
        }
    }
    return {hp.alpha + 0.5 * static_cast<double>(n + nonzero),
            hp.beta + 0.5 * rss + bsq / (2.0 * hp.tau1_sq)};
}

double step1_sigma_update(const Dataset& data, const Step1State& state, const Hyperparams& hp,
                          std::size_t s, SeededRng& rng) {
    const InverseGammaParams ig = step1_sigma_posterior(data, state, hp, s);
    return draw_inverse_gamma(rng, ig.shape, ig.scale);
}

Step1Output run_step1(const Dataset& data, const Hyperparams& hp_in, SeededRng& rng,
                      std::span<const std::uint64_t> column_seeds) {
    hp_in.validate();
    const std::size_t n = data.n();
    const std::size_t p = data.p();
    const std::size_t q = data.q();
    if (!column_seeds.empty() && column_seeds.size() != q) {
        throw std::invalid_argument("run_step1: need one seed per response column");
    }

    std::vector<SeededRng> streams;
    streams.reserve(q);
    if (column_seeds.empty()) {
        const std::uint64_t master = rng.engine()();
        for (std::size_t s = 0; s < q; ++s) streams.emplace_back(derive_seed(master, s));
    } else {
        for (std::size_t s = 0; s < q; ++s) streams.emplace_back(column_seeds[s]);
    }

    Hyperparams hp = hp_in;
    const bool adaptive = hp.adaptive_q || hp.adaptive_tau;
    const Matrix xt = data.x.transposed();
    std::vector<double> xtx_diag(p);
    for (std::size_t r = 0; r < p; ++r) {
        const auto xr = xt.row(r);
        xtx_diag[r] = std::inner_product(xr.begin(), xr.end(), xr.begin(), 0.0);
    }
    const ColumnSampler sampler{xt, xtx_diag, n, p};

    Matrix b(p, q);
    std::vector<double> sigma_sq(q);
    for (std::size_t s = 0; s < q; ++s) sigma_sq[s] = sample_variance(data.y, s);

    Step1Output out;
    ChainOutput& chain = out.chain;
    chain.burnin = hp.burnin;
    chain.iters = hp.iters;
    chain.thin = hp.thin;
    chain.hyper_trace.reserve(hp.burnin + hp.iters);

    const std::size_t total = hp.burnin + hp.iters;
    const long long qq = static_cast<long long>(q);
    for (std::size_t it = 0; it < total; ++it) {
        // Columns are conditionally independent given the shared hyperparameters,
        // and each owns its stream, so the scan order across columns is immaterial.
#pragma omp parallel
        {
            std::vector<double> resid(n);
#pragma omp for schedule(static)
            for (long long s = 0; s < qq; ++s) {
                const auto col = static_cast<std::size_t>(s);
                sampler.sweep(data.y, b, sigma_sq, col, hp, streams[col], resid);
            }
        }
        if (adaptive) update_b_hyperparams(b, hp, rng, sigma_sq);
        if (!all_finite(b)) {
            throw std::runtime_error("run_step1: iteration " + std::to_string(it) +
                                     ": non-finite coefficients");
        }
        chain.hyper_trace.push_back(HyperSnapshot::of(hp));
        if (it >= hp.burnin && (it - hp.burnin) % hp.thin == 0) {
            chain.b_samples.push_back(b);
            chain.sigma_sq_samples.push_back(sigma_sq);
        }
    }

    out.gamma_hat = majority_vote_select(inclusion_frequency(chain.b_samples));
    if (hp_in.adaptive_tau) {
        double acc = 0.0;
        for (std::size_t it = hp.burnin; it < total; ++it) acc += chain.hyper_trace[it].tau1_sq;
        out.tau1_sq = acc / static_cast<double>(hp.iters);
    } else {
        out.tau1_sq = hp_in.tau1_sq;
    }
    return out;
}

Matrix posterior_mean_b(const Dataset& data, const Mask& gamma, double tau1_sq) {
    const std::size_t p = data.p();
    const std::size_t q = data.q();
    if (gamma.rows() != p || gamma.cols() != q) {
        throw std::invalid_argument("posterior_mean_b: gamma must be p x q");
    }
    if (!(tau1_sq > 0.0)) throw std::invalid_argument("posterior_mean_b: tau1_sq must be positive");
    const Matrix xtx = gram(data.x);
    const Matrix xty = mat_mul_tn(data.x, data.y);
    const double ridge = std::isfinite(tau1_sq) ? 1.0 / tau1_sq : 0.0;
    Matrix out(p, q);
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < q; ++k) {
        active.clear();
        for (std::size_t r = 0; r < p; ++r)
            if (gamma(r, k)) active.push_back(r);
        if (active.empty()) continue;
        const std::size_t m = active.size();
        Matrix g(m, m);
        std::vector<double> rhs(m);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t c = 0; c < m; ++c) g(a, c) = xtx(active[a], active[c]);
            g(a, a) += ridge;
            rhs[a] = xty(active[a], k);
        }
        std::vector<double> coef;
        try {
            coef = cholesky_solve(cholesky_lower(g), rhs);
        } catch (const std::domain_error&) {
            throw std::runtime_error("posterior_mean_b: singular system for response " +
                                     std::to_string(k));
        }
        for (std::size_t a = 0; a < m; ++a) out(active[a], k) = coef[a];
    }
    return out;
}

Matrix pseudo_errors(const Dataset& data, const Matrix& b_hat) { return residual_matrix(data, b_hat); }

Step2Output run_step2(const Matrix& e_hat, const Hyperparams& hp_in, SeededRng& rng) {
    hp_in.validate();
    const std::size_t n = e_hat.rows();
    const std::size_t q = e_hat.cols();
    if (n == 0 || q == 0) throw std::invalid_argument("run_step2: empty error matrix");
    const Matrix scatter = scatter_matrix(e_hat);
    Hyperparams hp = hp_in;
    const bool adaptive = hp.adaptive_q || hp.adaptive_tau || hp.adaptive_lambda;

    Step2Output out;
    ChainOutput& chain = out.chain;
    chain.burnin = hp.burnin;
    chain.iters = hp.iters;
    chain.thin = hp.thin;
    chain.diag_accept_counts.assign(q, 0);
    chain.hyper_trace.reserve(hp.burnin + hp.iters);

    Matrix omega = Matrix::identity(q);
    const std::size_t total = hp.burnin + hp.iters;
    for (std::size_t it = 0; it < total; ++it) {
        try {
            sample_omega(omega, scatter, n, hp, rng, chain.diag_accept_counts);
            if (adaptive) update_omega_hyperparams(omega, hp, rng);
        } catch (const std::exception& ex) {
            throw std::runtime_error("run_step2: iteration " + std::to_string(it) + ": " + ex.what());
        }
        chain.hyper_trace.push_back(HyperSnapshot::of(hp));
        if (it >= hp.burnin && (it - hp.burnin) % hp.thin == 0) chain.omega_samples.push_back(omega);
    }
    out.eta_hat = majority_vote_edges(inclusion_frequency(chain.omega_samples));
    return out;
}

StepwiseOutput run_stepwise(const Dataset& data, const Hyperparams& hp, SeededRng& rng,
                            StepwiseEstimator estimator) {
    StepwiseOutput out;
    out.step1 = run_step1(data, hp, rng);
    if (estimator == StepwiseEstimator::posterior_mean) {
        out.b_hat = posterior_mean_b(data, out.step1.gamma_hat, out.step1.tau1_sq);
    } else {
        out.b_hat = conditional_mean(out.step1.chain.b_samples, out.step1.gamma_hat);
    }
    out.e_hat = pseudo_errors(data, out.b_hat);
    // Stage two keeps the stage-one slab settings for B out of its trace.
    Hyperparams hp2 = hp;
    hp2.tau1_sq = out.step1.tau1_sq;
    out.step2 = run_step2(out.e_hat, hp2, rng);
    return out;
}

}  // namespace mvsel
