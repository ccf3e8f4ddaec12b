#include "mvsel/kernels.hpp"

#include <omp.h>

#include <stdexcept>
#include <string>

namespace mvsel {

namespace {

void require(bool ok, const char* what, const Matrix& a, const Matrix& b) {
    if (!ok) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
    }
}

// Below this many multiply-adds the fork/join overhead dominates.
constexpr long long kParallelWork = 1 << 15;

}  // namespace

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "mat_mul", a, b);
    const long long m = static_cast<long long>(a.rows());
    const std::size_t inner = a.cols();
    const std::size_t n = b.cols();
    Matrix c(a.rows(), n);
    const bool par = m * static_cast<long long>(inner * n) > kParallelWork;
#pragma omp parallel for schedule(static) if (par)
    for (long long i = 0; i < m; ++i) {
        double* ci = c.row(static_cast<std::size_t>(i)).data();
        const double* ai = a.row(static_cast<std::size_t>(i)).data();
        for (std::size_t k = 0; k < inner; ++k) {
            const double aik = ai[k];
            const double* bk = b.row(k).data();
            for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

Matrix mat_mul_tn(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "mat_mul_tn", a, b);
    const long long m = static_cast<long long>(a.cols());
    const std::size_t inner = a.rows();
    const std::size_t n = b.cols();
    Matrix c(a.cols(), n);
    const bool par = m * static_cast<long long>(inner * n) > kParallelWork;
#pragma omp parallel for schedule(static) if (par)
    for (long long r = 0; r < m; ++r) {
        double* cr = c.row(static_cast<std::size_t>(r)).data();
        for (std::size_t i = 0; i < inner; ++i) {
            const double air = a(i, static_cast<std::size_t>(r));
            const double* bi = b.row(i).data();
            for (std::size_t j = 0; j < n; ++j) cr[j] += air * bi[j];
        }
    }
    return c;
}

Matrix residual(const Matrix& y, const Matrix& x, const Matrix& b) {
    require(x.cols() == b.rows(), "residual", x, b);
    require(y.rows() == x.rows() && y.cols() == b.cols(), "residual", y, b);
    const long long m = static_cast<long long>(x.rows());
    const std::size_t inner = x.cols();
    const std::size_t n = b.cols();
    Matrix e(y.rows(), n);
    const bool par = m * static_cast<long long>(inner * n) > kParallelWork;
#pragma omp parallel for schedule(static) if (par)
    for (long long i = 0; i < m; ++i) {
        const auto row = static_cast<std::size_t>(i);
        double* ei = e.row(row).data();
        const double* xi = x.row(row).data();
        for (std::size_t k = 0; k < inner; ++k) {
            const double xik = xi[k];
            const double* bk = b.row(k).data();
            for (std::size_t j = 0; j < n; ++j) ei[j] += xik * bk[j];
        }
        const double* yi = y.row(row).data();
        for (std::size_t j = 0; j < n; ++j) ei[j] = yi[j] - ei[j];
    }
    return e;
}

Matrix gram(const Matrix& a) {
    const long long m = static_cast<long long>(a.cols());
    const std::size_t inner = a.rows();
    const std::size_t n = a.cols();
    Matrix c(n, n);
    const bool par = m * static_cast<long long>(inner * n) > kParallelWork;
#pragma omp parallel for schedule(dynamic, 8) if (par)
    for (long long r = 0; r < m; ++r) {
        const auto row = static_cast<std::size_t>(r);
        double* cr = c.row(row).data();
        for (std::size_t i = 0; i < inner; ++i) {
            const double air = a(i, row);
            const double* ai = a.row(i).data();
            for (std::size_t j = row; j < n; ++j) cr[j] += air * ai[j];
        }
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = r + 1; j < n; ++j) c(j, r) = c(r, j);
    return c;
}

namespace reference {

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "mat_mul", a, b);
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    return c;
}

Matrix mat_mul_tn(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "mat_mul_tn", a, b);
    Matrix c(a.cols(), b.cols());
    for (std::size_t r = 0; r < a.cols(); ++r)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, r) * b(i, j);
            c(r, j) = acc;
        }
    return c;
}

Matrix residual(const Matrix& y, const Matrix& x, const Matrix& b) {
    require(x.cols() == b.rows(), "residual", x, b);
    require(y.rows() == x.rows() && y.cols() == b.cols(), "residual", y, b);
    Matrix e(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.rows(); ++i)
        for (std::size_t s = 0; s < y.cols(); ++s) {
            double fit = 0.0;
            for (std::size_t j = 0; j < x.cols(); ++j) fit += x(i, j) * b(j, s);
            e(i, s) = y(i, s) - fit;
        }
    return e;
}

Matrix gram(const Matrix& a) { return reference::mat_mul_tn(a, a); }

}  // namespace reference

}  // namespace mvsel
