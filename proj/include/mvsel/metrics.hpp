#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvsel/numerics.hpp"
#include "mvsel/summary.hpp"

namespace mvsel {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    bool operator==(const ConfusionCounts&) const = default;
};

enum class Scope {
    full,
    upper,  // strictly above the diagonal; square inputs only
};

ConfusionCounts confusion_counts(const Mask& est, const Mask& truth, Scope scope = Scope::full);

/// 0 when any factor of the denominator vanishes.
double mcc(const ConfusionCounts& c);
/// TP / (TP + FN), or 1 when there are no positives.
double sensitivity(const ConfusionCounts& c);
/// TN / (TN + FP), or 1 when there are no negatives.
double specificity(const ConfusionCounts& c);

/// ||est - truth||_F / ||truth||_F. Throws if truth is zero.
double relative_error(const Matrix& est, const Matrix& truth);

struct CoverageResult {
    double fraction = 0.0;   // NaN when nothing was evaluated
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // entries whose interval was empty
};

struct EntryIndex {
    std::size_t row = 0;
    std::size_t col = 0;
};

CoverageResult coverage(const IntervalMatrix& intervals, const Matrix& truth,
                        std::span<const EntryIndex> entries);

/// Every nonzero entry of truth (upper triangle only when upper_only).
std::vector<EntryIndex> nonzero_entries(const Matrix& truth, bool upper_only = false);

}  // namespace mvsel
