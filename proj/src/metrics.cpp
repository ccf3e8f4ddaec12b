#include "mvsel/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvsel {

ConfusionCounts confusion_counts(const Mask& est, const Mask& truth, Scope scope) {
    if (est.rows() != truth.rows() || est.cols() != truth.cols()) {
        throw std::invalid_argument("confusion_counts: shape mismatch");
    }
    if (scope == Scope::upper && est.rows() != est.cols()) {
        throw std::invalid_argument("confusion_counts: upper scope needs a square matrix");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < est.rows(); ++i) {
        const std::size_t j0 = scope == Scope::upper ? i + 1 : 0;
        for (std::size_t j = j0; j < est.cols(); ++j) {
            const bool e = est(i, j);
            const bool t = truth(i, j);
            if (e && t) ++c.tp;
            else if (!e && !t) ++c.tn;
            else if (e) ++c.fp;
            else ++c.fn;
        }
    }
    return c;
}

double mcc(const ConfusionCounts& c) {
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double d = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (d == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(d);
}

double sensitivity(const ConfusionCounts& c) {
    const std::size_t d = c.tp + c.fn;
    return d == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double specificity(const ConfusionCounts& c) {
    const std::size_t d = c.tn + c.fp;
    return d == 0 ? 1.0 : static_cast<double>(c.tn) / static_cast<double>(d);
}

double relative_error(const Matrix& est, const Matrix& truth) {
    if (est.rows() != truth.rows() || est.cols() != truth.cols()) {
        throw std::invalid_argument("relative_error: shape mismatch");
    }
    const double denom = frobenius_norm(truth);
    if (denom == 0.0) throw std::invalid_argument("relative_error: truth has zero norm");
    double acc = 0.0;
    const auto a = est.values();
    const auto b = truth.values();
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc) / denom;
}

CoverageResult coverage(const IntervalMatrix& intervals, const Matrix& truth,
                        std::span<const EntryIndex> entries) {
    if (intervals.rows() != truth.rows() || intervals.cols() != truth.cols()) {
        throw std::invalid_argument("coverage: shape mismatch");
    }
    CoverageResult out;
    std::size_t hits = 0;
    for (const EntryIndex& e : entries) {
        if (e.row >= truth.rows() || e.col >= truth.cols()) throw std::out_of_range("coverage: entry");
        const auto& iv = intervals(e.row, e.col);
        if (!iv) {
            ++out.skipped;
            continue;
        }
        ++out.evaluated;
        if (iv->contains(truth(e.row, e.col))) ++hits;
    }
    out.fraction = out.evaluated == 0 ? std::numeric_limits<double>::quiet_NaN()
                                      : static_cast<double>(hits) / static_cast<double>(out.evaluated);
    return out;
}

std::vector<EntryIndex> nonzero_entries(const Matrix& truth, bool upper_only) {
    std::vector<EntryIndex> out;
    for (std::size_t i = 0; i < truth.rows(); ++i)
        for (std::size_t j = upper_only ? i + 1 : 0; j < truth.cols(); ++j)
            if (truth(i, j) != 0.0) out.push_back({i, j});
    return out;
}

}  // namespace mvsel
