#pragma once

#include <cstddef>
#include <cstdint>

#include "mvsel/numerics.hpp"

namespace mvsel {

/// Predictors x (n x p) and responses y (n x q).
struct Dataset {
    Matrix x;
    Matrix y;

    Dataset() = default;
    Dataset(Matrix x_, Matrix y_);

    std::size_t n() const noexcept { return x.rows(); }
    std::size_t p() const noexcept { return x.cols(); }
    std::size_t q() const noexcept { return y.cols(); }
};

// Shape/rate of the objective Gamma hyperpriors on slab precisions and lambda.
inline constexpr double kHyperShape = 1e-4;
inline constexpr double kHyperRate = 1e-8;

struct Hyperparams {
    double q1 = 0.5;       // prior inclusion probability for entries of B
    double q2 = 0.5;       // prior inclusion probability for off-diagonals of Omega
    double tau1_sq = 1.0;  // slab variance for B
    double tau2_sq = 1.0;  // slab variance for Omega off-diagonals
    double lambda = 1.0;   // exponential rate on Omega diagonals
    double alpha = 1.0;    // Inverse-Gamma shape, stepwise sigma^2 prior
    double beta = 1.0;     // Inverse-Gamma scale, stepwise sigma^2 prior

    bool adaptive_q = false;
    bool adaptive_tau = true;
    bool adaptive_lambda = false;
    /// Include the independence-proposal density ratio in the diagonal MH step.
    bool exact_mh = true;
    /// Draw slab precisions (and lambda) separately for every entry rather than once per sweep.
    bool per_entry_hyper = false;
    /// Variance of the normal proposal centred at the conditional mode.
    double proposal_var = 0.001;

    std::size_t burnin = 1000;
    std::size_t iters = 2000;
    std::size_t thin = 1;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
};

/// q1 = 1/p, q2 = 1/q clipped into (1e-6, 1 - 1e-6); adaptive tau on.
Hyperparams default_hyperparams(std::size_t p, std::size_t q);

/// E = Y - X B.
Matrix residual_matrix(const Dataset& data, const Matrix& b);

/// S = E^T E.
Matrix scatter_matrix(const Matrix& e);

/// Current (B, Omega) plus the derived matrices the sweeps read.
///
/// Caches:
///   xtx = X^T X, xty = X^T Y      fixed for the dataset
///   m1 = X^T Y Omega^2            p x q
///   xtx_b = X^T X B               p x q, the transpose of B^T X^T X
///   omega_sq = Omega^2            q x q
///   e = Y - X B, s = E^T E
/// Each cache carries a validity flag; readers check it.
class ModelState {
public:
    ModelState(const Dataset& data, Matrix b, Matrix omega);
    /// B = 0, Omega = I.
    static ModelState initial(const Dataset& data);

    const Matrix& b() const noexcept { return b_; }
    const Matrix& omega() const noexcept { return omega_; }

    const Matrix& xtx() const noexcept { return xtx_; }
    const Matrix& xty() const noexcept { return xty_; }
    const Matrix& m1() const;
    const Matrix& xtx_b() const;
    const Matrix& omega_sq() const;
    const Matrix& e() const;
    const Matrix& s() const;

    bool m_caches_valid() const noexcept { return m_valid_; }
    bool omega_sq_valid() const noexcept { return omega_sq_valid_; }
    bool residuals_valid() const noexcept { return residuals_valid_; }

    void refresh_m_caches();  // m1 and xtx_b; needs a valid omega_sq
    void refresh_omega_sq();
    void refresh_residuals(const Dataset& data);

    /// Writes b_rs. Keeps xtx_b current in O(p); invalidates e and s.
    void set_b(std::size_t r, std::size_t s, double value);
    /// Writes omega_st and omega_ts. Invalidates omega_sq and m1.
    void set_omega_offdiag(std::size_t s, std::size_t t, double value);
    /// Requires value > 0. Invalidates omega_sq and m1.
    void set_omega_diag(std::size_t s, double value);

    /// Mutable Omega for samplers that keep symmetry themselves. Invalidates
    /// omega_sq and m1.
    Matrix& omega_mut() noexcept {
        omega_sq_valid_ = false;
        m_valid_ = false;
        return omega_;
    }

private:
    Matrix b_;
    Matrix omega_;
    Matrix xtx_;
    Matrix xty_;
    Matrix m1_;
    Matrix xtx_b_;
    Matrix omega_sq_;
    Matrix e_;
    Matrix s_;
    bool m_valid_ = false;
    bool omega_sq_valid_ = false;
    bool residuals_valid_ = false;
};

/// sum_j n log(omega_jj) - (n q / 2) log(2 pi) - 1/2 sum_j ||(Y - X B) Omega_.j||^2.
double log_gen_likelihood_joint(const Dataset& data, const Matrix& b, const Matrix& omega);

}  // namespace mvsel
