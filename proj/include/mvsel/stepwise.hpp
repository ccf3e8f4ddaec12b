#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mvsel/jrns.hpp"
#include "mvsel/model.hpp"

namespace mvsel {

// Two-stage alternative to the joint sampler. Stage one fits q independent
// spike-and-slab regressions (each with its own error variance sigma_s^2);
// stage two samples Omega from the pseudo-errors Y - X B_hat.

struct Step1State {
    Matrix b;                     // p x q
    std::vector<double> sigma_sq;  // q, all positive
};

/// Conditional of b_rs in the column-wise regression; slab prior N(0, tau1^2 sigma_s^2).
MixtureUpdate step1_b_conditional(const Dataset& data, const Step1State& state,
                                  const Hyperparams& hp, std::size_t r, std::size_t s);

/// Draw of sigma_s^2 from Inv-Gamma(alpha*, beta*).
double step1_sigma_update(const Dataset& data, const Step1State& state, const Hyperparams& hp,
                          std::size_t s, SeededRng& rng);

/// Shape and scale of the sigma_s^2 conditional.
struct InverseGammaParams {
    double shape = 0.0;
    double scale = 0.0;
};
InverseGammaParams step1_sigma_posterior(const Dataset& data, const Step1State& state,
                                         const Hyperparams& hp, std::size_t s);

struct Step1Output {
    ChainOutput chain;       // b_samples, sigma_sq_samples, hyper_trace
    Mask gamma_hat;          // majority vote over b_samples
    double tau1_sq = 1.0;    // slab variance used for the closed-form estimate
};

/// Columns are sampled from independent streams. column_seeds (size q) fixes
/// them explicitly; otherwise they are derived from one draw of `rng`.
/// Shared hyperparameter updates (adaptive q1 / tau1) use `rng` after each sweep.
Step1Output run_step1(const Dataset& data, const Hyperparams& hp, SeededRng& rng,
                      std::span<const std::uint64_t> column_seeds = {});

/// Column k: zero off the active set, (X_A^T X_A + I / tau1_sq)^{-1} X_A^T y_k on it.
Matrix posterior_mean_b(const Dataset& data, const Mask& gamma, double tau1_sq);

/// Y - X B_hat.
Matrix pseudo_errors(const Dataset& data, const Matrix& b_hat);

struct Step2Output {
    ChainOutput chain;  // omega_samples, hyper_trace, diag_accept_counts
    Mask eta_hat;
};

/// Omega sampler on a fixed scatter matrix S = E_hat^T E_hat, from Omega = I.
Step2Output run_step2(const Matrix& e_hat, const Hyperparams& hp, SeededRng& rng);

enum class StepwiseEstimator {
    posterior_mean,  // closed form at gamma_hat
    mcmc_average,    // conditional-on-inclusion means of the stage-one draws
};

struct StepwiseOutput {
    Step1Output step1;
    Matrix b_hat;
    Matrix e_hat;
    Step2Output step2;
};

StepwiseOutput run_stepwise(const Dataset& data, const Hyperparams& hp, SeededRng& rng,
                            StepwiseEstimator estimator = StepwiseEstimator::posterior_mean);

}  // namespace mvsel
