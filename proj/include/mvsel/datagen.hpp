#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "mvsel/model.hpp"
#include "mvsel/numerics.hpp"
#include "mvsel/rng.hpp"

namespace mvsel {

struct SimConfig {
    std::size_t n = 100;
    std::size_t p = 30;
    std::size_t q = 60;
    std::size_t nnz_b = 6;
    std::size_t nnz_omega = 12;  // upper-triangle count
    double ar_rho = 0.7;
    std::pair<double, double> b_range{1.0, 2.0};
    // Off-diagonal magnitudes; the sign is a fair coin, so values fall in (-hi,-lo) u (lo,hi).
    std::pair<double, double> omega_offdiag_range{0.5, 1.0};
    std::pair<double, double> omega_diag_range{1.0, 2.0};
    std::uint64_t seed = 0;

    void validate() const;
};

/// Simulation settings 1..6 with nonzero quotas floored to integers.
SimConfig preset_setting(int k);

struct GroundTruth {
    Matrix b0;
    Matrix omega0;
    Mask gamma_true;
    Mask eta_true;  // symmetric, empty diagonal
};

/// n x p rows from N(0, R0) with R0 = (rho^|j-k|), via the AR(1) recursion.
Matrix gen_design(const SimConfig& cfg, SeededRng& rng);

/// Random sparse B0 and Omega0. If eig_min(Omega0) <= 0.1 the diagonal is
/// raised by 0.1 - eig_min.
GroundTruth gen_truth(const SimConfig& cfg, SeededRng& rng);

/// X from gen_design, then Y = X B0 + E with rows of E from N(0, Omega0^{-1}).
Dataset gen_dataset(const SimConfig& cfg, const GroundTruth& truth, SeededRng& rng);

struct Simulation {
    GroundTruth truth;
    Dataset data;
};

/// gen_truth then gen_dataset on one stream seeded with cfg.seed.
Simulation simulate(const SimConfig& cfg);

}  // namespace mvsel
