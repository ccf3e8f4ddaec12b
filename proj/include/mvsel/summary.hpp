#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvsel/jrns.hpp"
#include "mvsel/numerics.hpp"

namespace mvsel {

/// Fraction of draws in which each entry is nonzero. Throws on an empty list.
Matrix inclusion_frequency(std::span<const Matrix> draws);

struct InclusionProbabilities {
    Matrix b;      // p x q
    Matrix omega;  // q x q; off-diagonals are the meaningful part
};

InclusionProbabilities inclusion_probabilities(const ChainOutput& chain);

/// incl >= threshold (ties selected).
Mask majority_vote_select(const Matrix& incl, double threshold = 0.5);

/// Majority vote over the off-diagonal entries of a symmetric inclusion matrix.
/// The result is symmetric with an empty diagonal.
Mask majority_vote_edges(const Matrix& incl_omega, double threshold = 0.5);

/// Mean of the nonzero draws on selected entries, 0 elsewhere.
Matrix conditional_mean(std::span<const Matrix> draws, const Mask& selected);

struct MagnitudeEstimates {
    Matrix b_hat;
    Matrix omega_hat;
};

/// B_hat from conditional-on-inclusion means; Omega_hat likewise off the
/// diagonal, with plain means on the diagonal.
MagnitudeEstimates magnitude_estimates(const ChainOutput& chain, const Mask& gamma, const Mask& eta);
Matrix omega_estimate(std::span<const Matrix> omega_draws, const Mask& eta);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const noexcept { return v >= lo && v <= hi; }
    bool operator==(const Interval&) const = default;
};

/// Per-entry credible intervals; std::nullopt marks an entry with no nonzero draws.
class IntervalMatrix {
public:
    IntervalMatrix() = default;
    IntervalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::optional<Interval>& operator()(std::size_t i, std::size_t j) const {
        return cells_[i * cols_ + j];
    }
    std::optional<Interval>& operator()(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }

    bool operator==(const IntervalMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::optional<Interval>> cells_;
};

/// Equal-tailed intervals from the nonzero draws of each entry.
IntervalMatrix credible_intervals(std::span<const Matrix> draws, double level);

/// Omega if its smallest eigenvalue exceeds eps, otherwise Omega + (eps - eig_min) I.
Matrix pd_projection(const Matrix& omega, double eps = 1e-3);

struct SelectionSummary {
    Matrix incl_b;
    Matrix incl_omega;
    Mask gamma_hat;
    Mask eta_hat;
    Matrix b_hat;
    Matrix omega_hat;
    double ci_level = 0.95;
    IntervalMatrix ci_b;
    IntervalMatrix ci_omega;
};

/// Everything above in one place. With pd_eps > 0 every Omega draw is first
/// passed through pd_projection; only diagonal summaries change.
SelectionSummary summarize(std::span<const Matrix> b_draws, std::span<const Matrix> omega_draws,
                           double ci_level = 0.95, double pd_eps = 0.0);

enum class TraceMatrix { b, omega };

struct TraceEntry {
    TraceMatrix matrix = TraceMatrix::b;
    std::size_t row = 0;  // zero-based
    std::size_t col = 0;
};

struct TraceSeries {
    std::string label;  // e.g. "B[3,7]" with one-based coordinates
    std::vector<double> values;
    std::vector<double> running_mean;
};

std::vector<TraceSeries> export_traces(std::span<const Matrix> b_draws,
                                       std::span<const Matrix> omega_draws,
                                       std::span<const TraceEntry> entries);
std::vector<TraceSeries> export_traces(const ChainOutput& chain, std::span<const TraceEntry> entries);

struct Edge {
    std::string from;
    std::string to;
    double inclusion_prob = 0.0;
};

struct EdgeTables {
    std::vector<Edge> predictor_response;  // from gamma_hat
    std::vector<Edge> response_response;   // from the upper triangle of eta_hat
};

/// Names default to X1..Xp and Y1..Yq when empty.
EdgeTables export_edge_lists(const SelectionSummary& summary,
                             std::span<const std::string> predictor_names = {},
                             std::span<const std::string> response_names = {});

}  // namespace mvsel
