#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mvsel {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix from_values(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    Matrix transposed() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Binary sparsity pattern (1 = nonzero / selected).
class Mask {
public:
    Mask() = default;
    Mask(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    bool operator()(std::size_t i, std::size_t j) const noexcept { return bits_[i * cols_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) noexcept { bits_[i * cols_ + j] = v ? 1 : 0; }

    std::size_t count() const noexcept;
    /// Number of set entries strictly above the diagonal.
    std::size_t count_upper() const noexcept;

    static Mask nonzero_pattern(const Matrix& m);

    bool operator==(const Mask&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

double frobenius_norm(const Matrix& a);
/// ||a - b||_F / max(||b||_F, tiny).
double relative_frobenius_diff(const Matrix& a, const Matrix& b);
bool is_symmetric(const Matrix& a, double tol = 0.0);
bool all_finite(const Matrix& a);

/// Lower-triangular L with L L^T = a. Throws std::domain_error when a pivot is <= 1e-12.
Matrix cholesky_lower(const Matrix& a);

/// Solves (L L^T) x = b given the Cholesky factor.
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> rhs);

/// All eigenvalues of a symmetric matrix in ascending order.
/// Householder tridiagonalization followed by implicit QL.
std::vector<double> symmetric_eigenvalues(const Matrix& a);

double min_eigenvalue_sym(const Matrix& a);

/// Linear-interpolation quantile: the k-th order statistic (1-based) sits at (k-1)/(m-1).
double quantile(std::span<const double> samples, double p);

}  // namespace mvsel
