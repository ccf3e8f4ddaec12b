#pragma once

#include "mvsel/numerics.hpp"

// Dense kernels used on the sampler hot paths.
//
// The functions in mvsel:: are OpenMP-parallel over output rows. Every output
// element is accumulated in the same order as the serial versions in
// mvsel::reference, so results do not depend on the thread count.

namespace mvsel {

/// a * b. Throws std::invalid_argument on dimension mismatch.
Matrix mat_mul(const Matrix& a, const Matrix& b);

/// a^T * b.
Matrix mat_mul_tn(const Matrix& a, const Matrix& b);

/// y - x * b.
Matrix residual(const Matrix& y, const Matrix& x, const Matrix& b);

/// a^T * a, symmetric by construction.
Matrix gram(const Matrix& a);

namespace reference {

// Naive triple loops, single-threaded. Kept as test oracles and benchmark baselines.
Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_mul_tn(const Matrix& a, const Matrix& b);
Matrix residual(const Matrix& y, const Matrix& x, const Matrix& b);
Matrix gram(const Matrix& a);

}  // namespace reference

}  // namespace mvsel
