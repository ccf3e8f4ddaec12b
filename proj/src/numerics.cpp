#include "mvsel/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mvsel {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    values_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("Matrix: ragged initializer list");
        }
        values_.insert(values_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_values(std::size_t rows, std::size_t cols, std::vector<double> values) {
    if (values.size() != rows * cols) {
        throw std::invalid_argument("Matrix: expected " + std::to_string(rows * cols) +
                                    " values, got " + std::to_string(values.size()));
    }
    Matrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.values_ = std::move(values);
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

std::size_t Mask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t Mask::count_upper() const noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j) c += (*this)(i, j) ? 1 : 0;
    return c;
}

Mask Mask::nonzero_pattern(const Matrix& m) {
    Mask mask(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) mask.set(i, j, m(i, j) != 0.0);
    return mask;
}

double frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    for (double v : a.values()) acc += v * v;
    return std::sqrt(acc);
}

double relative_frobenius_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("relative_frobenius_diff: shape mismatch");
    }
    double diff = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.values()[k] - b.values()[k];
        diff += d * d;
    }
    const double denom = std::max(frobenius_norm(b), std::numeric_limits<double>::min());
    return std::sqrt(diff) / denom;
}

bool is_symmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

bool all_finite(const Matrix& a) {
    return std::all_of(a.values().begin(), a.values().end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix cholesky_lower(const Matrix& a) {
    constexpr double kPivotTol = 1e-12;
    if (!is_symmetric(a)) throw std::invalid_argument("cholesky_lower: matrix not symmetric");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > kPivotTol)) {
            throw std::domain_error("cholesky_lower: matrix not positive definite (pivot " +
                                    std::to_string(j) + ")");
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / ljj;
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> rhs) {
    const std::size_t n = lower.rows();
    if (rhs.size() != n) throw std::invalid_argument("cholesky_solve: size mismatch");
    std::vector<double> z(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) z[i] -= lower(i, k) * z[k];
        z[i] /= lower(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) z[ii] -= lower(k, ii) * z[k];
        z[ii] /= lower(ii, ii);
    }
    return z;
}

namespace {

// Reduces a (copied) symmetric matrix to tridiagonal form with Householder reflections.
// diag receives the diagonal, off[i] couples rows i and i+1.
void tridiagonalize(Matrix a, std::vector<double>& diag, std::vector<double>& off) {
    const std::size_t n = a.rows();
    diag.assign(n, 0.0);
    off.assign(n, 0.0);
    std::vector<double> v(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the column below the diagonal
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += a(k + 1 + i, k) * a(k + 1 + i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double x0 = a(k + 1, k);
        const double alpha = x0 > 0.0 ? -norm : norm;
        for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
        v[0] -= alpha;
        double vnorm = 0.0;
        for (std::size_t i = 0; i < m; ++i) vnorm += v[i] * v[i];
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (std::size_t i = 0; i < m; ++i) v[i] /= vnorm;

        // A' = A - 2 v w^T - 2 w v^T with p = A v, K = v^T p, w = p - K v.
        double kappa = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += a(k + 1 + i, k + 1 + j) * v[j];
            p[i] = acc;
            kappa += v[i] * acc;
        }
        for (std::size_t i = 0; i < m; ++i) p[i] -= kappa * v[i];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                a(k + 1 + i, k + 1 + j) -= 2.0 * (v[i] * p[j] + p[i] * v[j]);
        a(k + 1, k) = alpha;
        a(k, k + 1) = alpha;
        for (std::size_t i = 1; i < m; ++i) {
            a(k + 1 + i, k) = 0.0;
            a(k, k + 1 + i) = 0.0;
        }
    }
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) off[i] = a(i + 1, i);
}

// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = d.size();
    if (n < 2) return;
    constexpr int kMaxIter = 100;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > kMaxIter) {
                throw std::runtime_error("symmetric_eigenvalues: QL iteration did not converge");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool deflated = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (deflated) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Matrix& a) {
    if (!is_symmetric(a)) throw std::invalid_argument("symmetric_eigenvalues: matrix not symmetric");
    std::vector<double> d, e;
    tridiagonalize(a, d, e);
    tridiagonal_ql(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

double min_eigenvalue_sym(const Matrix& a) {
    if (a.rows() == 0) throw std::invalid_argument("min_eigenvalue_sym: empty matrix");
    return symmetric_eigenvalues(a).front();
}

double quantile(std::span<const double> samples, double p) {
    if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0,1]");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace mvsel
