#include "mvsel/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mvsel/kernels.hpp"

namespace mvsel {

Dataset::Dataset(Matrix x_, Matrix y_) : x(std::move(x_)), y(std::move(y_)) {
    if (x.rows() == 0 || x.cols() == 0 || y.cols() == 0) {
        throw std::invalid_argument("Dataset: n, p and q must all be at least 1");
    }
    if (x.rows() != y.rows()) {
        throw std::invalid_argument("Dataset: X has " + std::to_string(x.rows()) +
                                    " rows but Y has " + std::to_string(y.rows()));
    }
    if (!all_finite(x) || !all_finite(y)) {
        throw std::invalid_argument("Dataset: non-finite values in X or Y");
    }
}

void Hyperparams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("Hyperparams: " + msg); };
    if (!(q1 > 0.0 && q1 < 1.0)) fail("q1 must lie in (0,1)");
    if (!(q2 > 0.0 && q2 < 1.0)) fail("q2 must lie in (0,1)");
    if (!(tau1_sq > 0.0) || !std::isfinite(tau1_sq)) fail("tau1_sq must be positive");
    if (!(tau2_sq > 0.0) || !std::isfinite(tau2_sq)) fail("tau2_sq must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be positive");
    if (!(alpha > 0.0)) fail("alpha must be positive");
    if (!(beta > 0.0)) fail("beta must be positive");
    if (!(proposal_var > 0.0) || !std::isfinite(proposal_var)) fail("proposal_var must be positive");
    if (iters < 1) fail("iters must be at least 1");
    if (thin < 1) fail("thin must be at least 1");
}

Hyperparams default_hyperparams(std::size_t p, std::size_t q) {
    if (p < 1 || q < 1) throw std::invalid_argument("default_hyperparams: p and q must be >= 1");
    constexpr double kLo = 1e-6;
    constexpr double kHi = 1.0 - 1e-6;
    Hyperparams hp;
    hp.q1 = std::clamp(1.0 / static_cast<double>(p), kLo, kHi);
    hp.q2 = std::clamp(1.0 / static_cast<double>(q), kLo, kHi);
    hp.tau1_sq = 1.0;
    hp.tau2_sq = 1.0;
    hp.lambda = 1.0;
    hp.alpha = 1.0;
    hp.beta = 1.0;
    hp.adaptive_tau = true;
    hp.adaptive_q = false;
    hp.adaptive_lambda = false;
    hp.proposal_var = 0.001;
    hp.burnin = 1000;
    hp.iters = 2000;
    return hp;
}

Matrix residual_matrix(const Dataset& data, const Matrix& b) { return residual(data.y, data.x, b); }

Matrix scatter_matrix(const Matrix& e) { return gram(e); }

ModelState::ModelState(const Dataset& data, Matrix b, Matrix omega)
    : b_(std::move(b)), omega_(std::move(omega)) {
    if (b_.rows() != data.p() || b_.cols() != data.q()) {
        throw std::invalid_argument("ModelState: B must be p x q");
    }
    if (omega_.rows() != data.q() || omega_.cols() != data.q()) {
        throw std::invalid_argument("ModelState: Omega must be q x q");
    }
    if (!is_symmetric(omega_)) throw std::invalid_argument("ModelState: Omega must be symmetric");
    for (std::size_t s = 0; s < omega_.rows(); ++s) {
        if (!(omega_(s, s) > 0.0)) {
            throw std::invalid_argument("ModelState: Omega diagonal must be positive");
        }
    }
    xtx_ = gram(data.x);
    xty_ = mat_mul_tn(data.x, data.y);
}

ModelState ModelState::initial(const Dataset& data) {
    return ModelState(data, Matrix(data.p(), data.q()), Matrix::identity(data.q()));
}

namespace {
void require_valid(bool valid, const char* name) {
    if (!valid) throw std::logic_error(std::string("ModelState: cache '") + name + "' is stale");
}
}  // namespace

const Matrix& ModelState::m1() const {
    require_valid(m_valid_, "m1");
    return m1_;
}

const Matrix& ModelState::xtx_b() const {
    require_valid(m_valid_, "xtx_b");
    return xtx_b_;
}

const Matrix& ModelState::omega_sq() const {
    require_valid(omega_sq_valid_, "omega_sq");
    return omega_sq_;
}

const Matrix& ModelState::e() const {
    require_valid(residuals_valid_, "e");
    return e_;
}

const Matrix& ModelState::s() const {
    require_valid(residuals_valid_, "s");
    return s_;
}

void ModelState::refresh_omega_sq() {
    omega_sq_ = mat_mul(omega_, omega_);
    omega_sq_valid_ = true;
}

void ModelState::refresh_m_caches() {
    if (!omega_sq_valid_) refresh_omega_sq();
    m1_ = mat_mul(xty_, omega_sq_);
    xtx_b_ = mat_mul(xtx_, b_);
    m_valid_ = true;
}

void ModelState::refresh_residuals(const Dataset& data) {
    e_ = residual_matrix(data, b_);
    s_ = scatter_matrix(e_);
    residuals_valid_ = true;
}

void ModelState::set_b(std::size_t r, std::size_t s, double value) {
    const double delta = value - b_(r, s);
    if (delta == 0.0) return;
    b_(r, s) = value;
    residuals_valid_ = false;
    if (m_valid_) {
        const std::size_t p = xtx_.rows();
        for (std::size_t k = 0; k < p; ++k) xtx_b_(k, s) += delta * xtx_(k, r);
    }
}

void ModelState::set_omega_offdiag(std::size_t s, std::size_t t, double value) {
    if (s == t) throw std::invalid_argument("set_omega_offdiag: diagonal index");
    omega_(s, t) = value;
    omega_(t, s) = value;
    omega_sq_valid_ = false;
    m_valid_ = false;
}

void ModelState::set_omega_diag(std::size_t s, double value) {
    if (!(value > 0.0)) throw std::invalid_argument("set_omega_diag: value must be positive");
    omega_(s, s) = value;
    omega_sq_valid_ = false;
    m_valid_ = false;
}

double log_gen_likelihood_joint(const Dataset& data, const Matrix& b, const Matrix& omega) {
    const std::size_t n = data.n();
    const std::size_t q = data.q();
    if (omega.rows() != q || omega.cols() != q) {
        throw std::invalid_argument("log_gen_likelihood_joint: Omega must be q x q");
    }
    double value = -0.5 * static_cast<double>(n * q) * std::log(2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < q; ++j) {
        if (!(omega(j, j) > 0.0)) {
            throw std::invalid_argument("log_gen_likelihood_joint: non-positive diagonal");
        }
        value += static_cast<double>(n) * std::log(omega(j, j));
    }
    const Matrix e = residual_matrix(data, b);
    const Matrix eo = mat_mul(e, omega);
    double quad = 0.0;
    for (double v : eo.values()) quad += v * v;
    return value - 0.5 * quad;
}

}  // namespace mvsel
