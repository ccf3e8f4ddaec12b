#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mvsel/model.hpp"
#include "mvsel/numerics.hpp"
#include "mvsel/rng.hpp"

namespace mvsel {

/// Full conditional of a spike-and-slab entry:
/// (1 - inclusion_prob) * delta_0 + inclusion_prob * N(slab_mean, slab_var).
struct MixtureUpdate {
    double inclusion_prob = 0.0;
    double slab_mean = 0.0;
    double slab_var = 1.0;
};

/// Logistic transform that saturates to exactly 0 or 1 instead of overflowing.
double inclusion_from_log_odds(double log_odds) noexcept;

/// Draws from the mixture; spike draws return literal 0.0.
double draw_mixture(const MixtureUpdate& update, SeededRng& rng);

/// Conditional of b_rs given everything else. Needs valid m1, xtx_b and omega_sq.
MixtureUpdate b_entry_conditional(const ModelState& state, const Hyperparams& hp, std::size_t r,
                                  std::size_t s);
/// Same, with an explicit slab variance (per-entry hyperparameter mode).
MixtureUpdate b_entry_conditional(const ModelState& state, double q1, double tau1_sq, std::size_t r,
                                  std::size_t s);

/// Conditional of omega_st (s < t) given the rest of Omega and the scatter matrix.
MixtureUpdate omega_offdiag_conditional(const Matrix& omega, const Matrix& scatter,
                                        const Hyperparams& hp, std::size_t s, std::size_t t);
MixtureUpdate omega_offdiag_conditional(const Matrix& omega, const Matrix& scatter, double q2,
                                        double tau2_sq, std::size_t s, std::size_t t);

/// Unique positive root of s_ss w^2 + f w - n = 0, the mode of
/// w^n exp(-s_ss w^2 / 2 - f w).
double omega_diag_mode(double s_ss, double f, std::size_t n);

/// f = lambda + sum_{l != s} omega_ls S_ls, the linear coefficient of the diagonal conditional.
double omega_diag_linear_term(const Matrix& omega, const Matrix& scatter, double lambda,
                              std::size_t s);

/// Log acceptance ratio for moving the diagonal from `current` to `proposal`.
/// -inf for non-positive proposals. With exact_mh the independence-proposal
/// density ratio g(current)/g(proposal) is included.
double omega_diag_log_accept(double current, double proposal, double s_ss, double f, std::size_t n,
                             double mode, double proposal_var, bool exact_mh);

struct DiagStep {
    double value = 0.0;
    bool accepted = false;
};

DiagStep omega_diag_mh_step(const Matrix& omega, const Matrix& scatter, std::size_t n,
                            const Hyperparams& hp, std::size_t s, SeededRng& rng);

/// One scan of B in row-major order. Recomputes m1/xtx_b at the start and keeps
/// xtx_b current after every draw.
void sweep_b(ModelState& state, const Hyperparams& hp, SeededRng& rng);

/// Off-diagonals (s < t, row-major) then diagonals, for a given scatter matrix.
/// Shared by the joint sampler and the stepwise second stage.
void sample_omega(Matrix& omega, const Matrix& scatter, std::size_t n, const Hyperparams& hp,
                  SeededRng& rng, std::span<std::size_t> accept_counts);

/// Recomputes E and S from the current B, runs sample_omega, refreshes Omega^2.
void sweep_omega(const Dataset& data, ModelState& state, const Hyperparams& hp, SeededRng& rng,
                 std::span<std::size_t> accept_counts);

/// Conjugate updates of the shared B hyperparameters (q1 and/or tau1_sq).
/// When sigma_sq is given the slab is N(0, tau1_sq * sigma_sq[s]) (stepwise first stage).
void update_b_hyperparams(const Matrix& b, Hyperparams& hp, SeededRng& rng,
                          std::span<const double> sigma_sq = {});
/// Conjugate updates of q2, tau2_sq and lambda.
void update_omega_hyperparams(const Matrix& omega, Hyperparams& hp, SeededRng& rng);

/// Both of the above, each gated by its adaptivity flag. Shared updates are
/// skipped for quantities drawn per entry.
Hyperparams update_hyperparams(const ModelState& state, Hyperparams hp, SeededRng& rng);

struct HyperSnapshot {
    double q1 = 0.0;
    double q2 = 0.0;
    double tau1_sq = 0.0;
    double tau2_sq = 0.0;
    double lambda = 0.0;

    static HyperSnapshot of(const Hyperparams& hp) noexcept {
        return {hp.q1, hp.q2, hp.tau1_sq, hp.tau2_sq, hp.lambda};
    }
};

/// Post burn-in draws plus run diagnostics.
struct ChainOutput {
    std::vector<Matrix> b_samples;
    std::vector<Matrix> omega_samples;
    /// Stepwise first stage only: sigma_s^2 per stored draw.
    std::vector<std::vector<double>> sigma_sq_samples;
    /// One entry per iteration, burn-in included.
    std::vector<HyperSnapshot> hyper_trace;
    /// Accepted diagonal MH moves over all iterations, burn-in included.
    std::vector<std::size_t> diag_accept_counts;
    std::size_t burnin = 0;
    std::size_t iters = 0;
    std::size_t thin = 1;

    std::size_t iters_stored() const noexcept {
        return std::max(b_samples.size(), omega_samples.size());
    }
    std::vector<double> acceptance_rates() const;
};

enum class SweepPhase { after_b, after_omega };

/// Called twice per iteration; used by diagnostics and tests to audit the caches.
using ChainObserver = std::function<void(std::size_t iteration, SweepPhase, const ModelState&)>;

/// Joint sampler: burnin + iters full sweeps from `init` (default B = 0, Omega = I).
/// Deterministic given the rng state.
ChainOutput run_jrns(const Dataset& data, const Hyperparams& hp, std::optional<ModelState> init,
                     SeededRng& rng, const ChainObserver& observer = {});

}  // namespace mvsel
