#include "mvsel/jrns.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mvsel {

namespace {

// Gamma draw for a slab precision (or lambda), kept strictly positive and finite.
// With shape 1e-4 the draw routinely underflows to 0; an infinitely wide slab is
// represented by the smallest normal precision instead.
double draw_precision(SeededRng& rng, double shape, double rate) {
    double v = draw_gamma(rng, shape, rate);
    if (!(v >= std::numeric_limits<double>::min())) v = std::numeric_limits<double>::min();
    if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
    return v;
}

double per_entry_precision(SeededRng& rng, double current) {
    if (current == 0.0) return draw_precision(rng, kHyperShape, kHyperRate);
    return draw_precision(rng, kHyperShape + 0.5, kHyperRate + 0.5 * current * current);
}

double clamp_probability(double p) {
    constexpr double kLo = std::numeric_limits<double>::min();
    constexpr double kHi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::clamp(p, kLo, kHi);
}

// log(q) - log(1 - q) - log(tau) - log(sqrt(c1)) + c2^2 / (2 c1)
double mixture_log_odds(double q, double tau_sq, double c1, double c2) {
    return std::log(q) - std::log1p(-q) - 0.5 * std::log(tau_sq) - 0.5 * std::log(c1) +
           c2 * c2 / (2.0 * c1);
}

}  // namespace

double inclusion_from_log_odds(double log_odds) noexcept {
    if (log_odds >= 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
    const double e = std::exp(log_odds);
    return e / (1.0 + e);
}

double draw_mixture(const MixtureUpdate& update, SeededRng& rng) {
    if (rng.uniform() >= update.inclusion_prob) return 0.0;
    return draw_normal(rng, update.slab_mean, update.slab_var);
}

MixtureUpdate b_entry_conditional(const ModelState& state, const Hyperparams& hp, std::size_t r,
                                  std::size_t s) {
    return b_entry_conditional(state, hp.q1, hp.tau1_sq, r, s);
}

MixtureUpdate b_entry_conditional(const ModelState& state, double q1, double tau1_sq, std::size_t r,
                                  std::size_t s) {
    const Matrix& b = state.b();
    if (r >= b.rows() || s >= b.cols()) throw std::out_of_range("b_entry_conditional: index");
    const Matrix& xtx = state.xtx();
    const Matrix& m1 = state.m1();
    const Matrix& xtx_b = state.xtx_b();
    const Matrix& osq = state.omega_sq();

    const double xrr = xtx(r, r);
    const double oss = osq(s, s);
    const double c1 = oss * xrr + 1.0 / tau1_sq;

    // (M2_{.r})^T (Omega^2)_{.s}; row r of xtx_b is column r of M2, Omega^2 is symmetric.
    const auto xb_row = xtx_b.row(r);
    const auto osq_row = osq.row(s);
    double cross = 0.0;
    for (std::size_t k = 0; k < xb_row.size(); ++k) cross += xb_row[k] * osq_row[k];
    const double c2 = m1(r, s) - cross + b(r, s) * xrr * oss;

    MixtureUpdate u;
    u.slab_mean = c2 / c1;
    u.slab_var = 1.0 / c1;
    u.inclusion_prob = inclusion_from_log_odds(mixture_log_odds(q1, tau1_sq, c1, c2));
    return u;
}

MixtureUpdate omega_offdiag_conditional(const Matrix& omega, const Matrix& scatter,
                                        const Hyperparams& hp, std::size_t s, std::size_t t) {
    return omega_offdiag_conditional(omega, scatter, hp.q2, hp.tau2_sq, s, t);
}

MixtureUpdate omega_offdiag_conditional(const Matrix& omega, const Matrix& scatter, double q2,
                                        double tau2_sq, std::size_t s, std::size_t t) {
    const std::size_t q = omega.rows();
    if (!(s < t && t < q)) throw std::out_of_range("omega_offdiag_conditional: need s < t < q");
    if (scatter.rows() != q || scatter.cols() != q) {
        throw std::invalid_argument("omega_offdiag_conditional: scatter must be q x q");
    }
    const double d1 = scatter(s, s) + scatter(t, t) + 1.0 / tau2_sq;
    const auto omega_t = omega.row(t);
    const auto omega_s = omega.row(s);
    const auto s_s = scatter.row(s);
    const auto s_t = scatter.row(t);
    double d2 = 0.0;
    for (std::size_t l = 0; l < q; ++l) {
        if (l != s) d2 += omega_t[l] * s_s[l];
        if (l != t) d2 += omega_s[l] * s_t[l];
    }
    MixtureUpdate u;
    u.slab_mean = -d2 / d1;
    u.slab_var = 1.0 / d1;
    u.inclusion_prob = inclusion_from_log_odds(mixture_log_odds(q2, tau2_sq, d1, d2));
    return u;
}

double omega_diag_mode(double s_ss, double f, std::size_t n) {
    if (!(s_ss > 0.0)) throw std::domain_error("omega_diag_mode: S_ss must be positive");
    const double nn = static_cast<double>(n);
    const double disc = std::sqrt(f * f + 4.0 * nn * s_ss);
    // Rationalized form for f > 0 avoids cancellation between disc and f.
    if (f > 0.0) return 2.0 * nn / (disc + f);
    return (disc - f) / (2.0 * s_ss);
}

double omega_diag_linear_term(const Matrix& omega, const Matrix& scatter, double lambda,
                              std::size_t s) {
    const auto omega_s = omega.row(s);
    const auto s_s = scatter.row(s);
    double f = lambda;
    for (std::size_t l = 0; l < omega_s.size(); ++l)
        if (l != s) f += omega_s[l] * s_s[l];
    return f;
}

double omega_diag_log_accept(double current, double proposal, double s_ss, double f, std::size_t n,
                             double mode, double proposal_var, bool exact_mh) {
    if (!(proposal > 0.0)) return -std::numeric_limits<double>::infinity();
    if (proposal == current) return 0.0;
    double log_ratio = static_cast<double>(n) * std::log(proposal / current) -
                       0.5 * s_ss * (proposal * proposal - current * current) -
                       f * (proposal - current);
    if (exact_mh) {
        const double dc = current - mode;
        const double dp = proposal - mode;
        log_ratio += (dp * dp - dc * dc) / (2.0 * proposal_var);
    }
    return log_ratio;
}

DiagStep omega_diag_mh_step(const Matrix& omega, const Matrix& scatter, std::size_t n,
                            const Hyperparams& hp, std::size_t s, SeededRng& rng) {
    const double current = omega(s, s);
    const double s_ss = scatter(s, s);
    const double f = omega_diag_linear_term(omega, scatter, hp.lambda, s);
    const double mode = omega_diag_mode(s_ss, f, n);
    const double proposal = draw_normal(rng, mode, hp.proposal_var);
    const double log_ratio =
        omega_diag_log_accept(current, proposal, s_ss, f, n, mode, hp.proposal_var, hp.exact_mh);
    if (log_ratio == -std::numeric_limits<double>::infinity()) return {current, false};
    if (log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio) return {proposal, true};
    return {current, false};
}

void sweep_b(ModelState& state, const Hyperparams& hp, SeededRng& rng) {
    if (!state.omega_sq_valid()) state.refresh_omega_sq();
    state.refresh_m_caches();
    const std::size_t p = state.b().rows();
    const std::size_t q = state.b().cols();
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t s = 0; s < q; ++s) {
            double tau_sq = hp.tau1_sq;
            if (hp.per_entry_hyper) tau_sq = 1.0 / per_entry_precision(rng, state.b()(r, s));
            const MixtureUpdate u = b_entry_conditional(state, hp.q1, tau_sq, r, s);
            state.set_b(r, s, draw_mixture(u, rng));
        }
    }
}

void sample_omega(Matrix& omega, const Matrix& scatter, std::size_t n, const Hyperparams& hp,
                  SeededRng& rng, std::span<std::size_t> accept_counts) {
    const std::size_t q = omega.rows();
    if (accept_counts.size() != q) throw std::invalid_argument("sample_omega: accept_counts size");
    for (std::size_t s = 0; s + 1 < q; ++s) {
        for (std::size_t t = s + 1; t < q; ++t) {
            double tau_sq = hp.tau2_sq;
            if (hp.per_entry_hyper) tau_sq = 1.0 / per_entry_precision(rng, omega(s, t));
            const MixtureUpdate u = omega_offdiag_conditional(omega, scatter, hp.q2, tau_sq, s, t);
            const double v = draw_mixture(u, rng);
            omega(s, t) = v;
            omega(t, s) = v;
        }
    }
    Hyperparams local = hp;
    for (std::size_t s = 0; s < q; ++s) {
        if (hp.per_entry_hyper) {
            local.lambda = draw_precision(rng, kHyperShape + 1.0, kHyperRate + omega(s, s));
        }
        const DiagStep step = omega_diag_mh_step(omega, scatter, n, local, s, rng);
        if (step.accepted) {
            omega(s, s) = step.value;
            ++accept_counts[s];
        }
    }
}

void sweep_omega(const Dataset& data, ModelState& state, const Hyperparams& hp, SeededRng& rng,
                 std::span<std::size_t> accept_counts) {
    state.refresh_residuals(data);
    sample_omega(state.omega_mut(), state.s(), data.n(), hp, rng, accept_counts);
    state.refresh_omega_sq();
}

void update_b_hyperparams(const Matrix& b, Hyperparams& hp, SeededRng& rng,
                          std::span<const double> sigma_sq) {
    std::size_t nonzero = 0;
    double sumsq = 0.0;
    for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t s = 0; s < b.cols(); ++s) {
            const double v = b(r, s);
            if (v == 0.0) continue;
            ++nonzero;
            sumsq += sigma_sq.empty() ? v * v : v * v / sigma_sq[s];
        }
    }
    const double total = static_cast<double>(b.size());
    if (hp.adaptive_q) {
        const double k = static_cast<double>(nonzero);
        hp.q1 = clamp_probability(draw_beta(rng, 1.0 + k, 1.0 + total - k));
    }
    if (hp.adaptive_tau && !hp.per_entry_hyper) {
        hp.tau1_sq = 1.0 / draw_precision(rng, kHyperShape + 0.5 * static_cast<double>(nonzero),
                                          kHyperRate + 0.5 * sumsq);
    }
}

void update_omega_hyperparams(const Matrix& omega, Hyperparams& hp, SeededRng& rng) {
    const std::size_t q = omega.rows();
    std::size_t nonzero = 0;
    double sumsq = 0.0;
    double diag_sum = 0.0;
    for (std::size_t s = 0; s < q; ++s) {
        diag_sum += omega(s, s);
        for (std::size_t t = s + 1; t < q; ++t) {
            const double v = omega(s, t);
            if (v == 0.0) continue;
            ++nonzero;
            sumsq += v * v;
        }
    }
    const double total = static_cast<double>(q * (q - 1) / 2);
    if (hp.adaptive_q) {
        const double k = static_cast<double>(nonzero);
        hp.q2 = clamp_probability(draw_beta(rng, 1.0 + k, 1.0 + total - k));
    }
    if (hp.adaptive_tau && !hp.per_entry_hyper) {
        hp.tau2_sq = 1.0 / draw_precision(rng, kHyperShape + 0.5 * static_cast<double>(nonzero),
                                          kHyperRate + 0.5 * sumsq);
    }
    if (hp.adaptive_lambda && !hp.per_entry_hyper) {
        hp.lambda = draw_precision(rng, kHyperShape + static_cast<double>(q), kHyperRate + diag_sum);
    }
}

Hyperparams update_hyperparams(const ModelState& state, Hyperparams hp, SeededRng& rng) {
    update_b_hyperparams(state.b(), hp, rng);
    update_omega_hyperparams(state.omega(), hp, rng);
    return hp;
}

std::vector<double> ChainOutput::acceptance_rates() const {
    std::vector<double> rates(diag_accept_counts.size(), 0.0);
    const double total = static_cast<double>(burnin + iters);
    if (total == 0.0) return rates;
    for (std::size_t s = 0; s < rates.size(); ++s)
        rates[s] = static_cast<double>(diag_accept_counts[s]) / total;
    return rates;
}

ChainOutput run_jrns(const Dataset& data, const Hyperparams& hp_in, std::optional<ModelState> init,
                     SeededRng& rng, const ChainObserver& observer) {
    hp_in.validate();
    ModelState state = init ? std::move(*init) : ModelState::initial(data);
    if (state.b().rows() != data.p() || state.b().cols() != data.q()) {
        throw std::invalid_argument("run_jrns: initial state does not match the dataset");
    }
    Hyperparams hp = hp_in;
    const bool adaptive = hp.adaptive_q || hp.adaptive_tau || hp.adaptive_lambda;

    ChainOutput out;
    out.burnin = hp.burnin;
    out.iters = hp.iters;
    out.thin = hp.thin;
    out.diag_accept_counts.assign(data.q(), 0);
    out.hyper_trace.reserve(hp.burnin + hp.iters);
    const std::size_t expected = (hp.iters + hp.thin - 1) / hp.thin;
    out.b_samples.reserve(expected);
    out.omega_samples.reserve(expected);

    const std::size_t total = hp.burnin + hp.iters;
    for (std::size_t it = 0; it < total; ++it) {
        try {
            sweep_b(state, hp, rng);
            if (observer) observer(it, SweepPhase::after_b, state);
            sweep_omega(data, state, hp, rng, out.diag_accept_counts);
            if (observer) observer(it, SweepPhase::after_omega, state);
            if (adaptive) hp = update_hyperparams(state, hp, rng);
            if (!all_finite(state.b()) || !all_finite(state.omega())) {
                throw std::runtime_error("non-finite parameter values");
            }
        } catch (const std::exception& ex) {
            throw std::runtime_error("run_jrns: iteration " + std::to_string(it) + ": " + ex.what());
        }
        out.hyper_trace.push_back(HyperSnapshot::of(hp));
        if (it >= hp.burnin && (it - hp.burnin) % hp.thin == 0) {
            out.b_samples.push_back(state.b());
            out.omega_samples.push_back(state.omega());
        }
    }
    return out;
}

}  // namespace mvsel
