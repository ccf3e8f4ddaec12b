#include "mvsel/summary.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mvsel {

namespace {

void check_same_shape(std::span<const Matrix> draws, const char* who) {
    if (draws.empty()) throw std::invalid_argument(std::string(who) + ": empty chain");
    const std::size_t r = draws.front().rows();
    const std::size_t c = draws.front().cols();
    for (const Matrix& d : draws) {
        if (d.rows() != r || d.cols() != c) {
            throw std::invalid_argument(std::string(who) + ": draws differ in shape");
        }
    }
}

}  // namespace

Matrix inclusion_frequency(std::span<const Matrix> draws) {
    check_same_shape(draws, "inclusion_frequency");
    Matrix counts(draws.front().rows(), draws.front().cols());
    auto out = counts.values();
    for (const Matrix& d : draws) {
        const auto v = d.values();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0.0) out[i] += 1.0;
    }
    const double m = static_cast<double>(draws.size());
    for (double& x : out) x /= m;
    return counts;
}

InclusionProbabilities inclusion_probabilities(const ChainOutput& chain) {
    InclusionProbabilities out;
    out.b = inclusion_frequency(chain.b_samples);
    out.omega = inclusion_frequency(chain.omega_samples);
    return out;
}

Mask majority_vote_select(const Matrix& incl, double threshold) {
    Mask out(incl.rows(), incl.cols());
    for (std::size_t i = 0; i < incl.rows(); ++i)
        for (std::size_t j = 0; j < incl.cols(); ++j) {
            const double v = incl(i, j);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("majority_vote_select: probability outside [0, 1]");
            }
            out.set(i, j, v >= threshold);
        }
    return out;
}

Mask majority_vote_edges(const Matrix& incl_omega, double threshold) {
    if (incl_omega.rows() != incl_omega.cols()) {
        throw std::invalid_argument("majority_vote_edges: matrix must be square");
    }
    const std::size_t q = incl_omega.rows();
    Mask out(q, q);
    for (std::size_t s = 0; s < q; ++s)
        for (std::size_t t = s + 1; t < q; ++t) {
            const double v = incl_omega(s, t);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("majority_vote_edges: probability outside [0, 1]");
            }
            const bool on = v >= threshold;
            out.set(s, t, on);
            out.set(t, s, on);
        }
    return out;
}

Matrix conditional_mean(std::span<const Matrix> draws, const Mask& selected) {
    check_same_shape(draws, "conditional_mean");
    const std::size_t r = draws.front().rows();
    const std::size_t c = draws.front().cols();
    if (selected.rows() != r || selected.cols() != c) {
        throw std::invalid_argument("conditional_mean: mask shape mismatch");
    }
    Matrix sum(r, c);
    Matrix count(r, c);
    for (const Matrix& d : draws)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                const double v = d(i, j);
                if (v != 0.0) {
                    sum(i, j) += v;
                    count(i, j) += 1.0;
                }
            }
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            if (!selected(i, j)) continue;
            if (count(i, j) == 0.0) {
                throw std::invalid_argument("conditional_mean: selected entry (" + std::to_string(i) +
                                            "," + std::to_string(j) + ") is never nonzero");
            }
            out(i, j) = sum(i, j) / count(i, j);
        }
    return out;
}

Matrix omega_estimate(std::span<const Matrix> omega_draws, const Mask& eta) {
    Mask off = eta;
    for (std::size_t s = 0; s < off.rows() && s < off.cols(); ++s) off.set(s, s, false);
    Matrix out = conditional_mean(omega_draws, off);
    const std::size_t q = out.rows();
    for (std::size_t s = 0; s < q; ++s) {
        double acc = 0.0;
        for (const Matrix& d : omega_draws) acc += d(s, s);
        out(s, s) = acc / static_cast<double>(omega_draws.size());
    }
    return out;
}

MagnitudeEstimates magnitude_estimates(const ChainOutput& chain, const Mask& gamma, const Mask& eta) {
    return {conditional_mean(chain.b_samples, gamma), omega_estimate(chain.omega_samples, eta)};
}

IntervalMatrix credible_intervals(std::span<const Matrix> draws, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("credible_intervals: level must lie in (0, 1)");
    }
    check_same_shape(draws, "credible_intervals");
    const std::size_t r = draws.front().rows();
    const std::size_t c = draws.front().cols();
    const double lo_p = 0.5 * (1.0 - level);
    const double hi_p = 1.0 - lo_p;
    IntervalMatrix out(r, c);
    std::vector<double> nz;
    nz.reserve(draws.size());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            nz.clear();
            for (const Matrix& d : draws)
                if (d(i, j) != 0.0) nz.push_back(d(i, j));
            if (nz.empty()) continue;
            out(i, j) = Interval{quantile(nz, lo_p), quantile(nz, hi_p)};
        }
    return out;
}

Matrix pd_projection(const Matrix& omega, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("pd_projection: eps must be positive");
    if (!is_symmetric(omega)) throw std::invalid_argument("pd_projection: matrix is not symmetric");
    const double eig_min = min_eigenvalue_sym(omega);
    if (eig_min > eps) return omega;
    Matrix out = omega;
    const double shift = eps - eig_min;
    for (std::size_t s = 0; s < out.rows(); ++s) out(s, s) += shift;
    return out;
}

SelectionSummary summarize(std::span<const Matrix> b_draws, std::span<const Matrix> omega_draws,
                           double ci_level, double pd_eps) {
    std::vector<Matrix> projected;
    if (pd_eps > 0.0) {
        projected.reserve(omega_draws.size());
        for (const Matrix& w : omega_draws) projected.push_back(pd_projection(w, pd_eps));
        omega_draws = projected;
    }
    SelectionSummary out;
    out.incl_b = inclusion_frequency(b_draws);
    out.incl_omega = inclusion_frequency(omega_draws);
    out.gamma_hat = majority_vote_select(out.incl_b);
    out.eta_hat = majority_vote_edges(out.incl_omega);
    out.b_hat = conditional_mean(b_draws, out.gamma_hat);
    out.omega_hat = omega_estimate(omega_draws, out.eta_hat);
    out.ci_level = ci_level;
    out.ci_b = credible_intervals(b_draws, ci_level);
    out.ci_omega = credible_intervals(omega_draws, ci_level);
    return out;
}

std::vector<TraceSeries> export_traces(std::span<const Matrix> b_draws,
                                       std::span<const Matrix> omega_draws,
                                       std::span<const TraceEntry> entries) {
    std::vector<TraceSeries> out;
    out.reserve(entries.size());
    for (const TraceEntry& e : entries) {
        const bool is_b = e.matrix == TraceMatrix::b;
        const std::span<const Matrix> draws = is_b ? b_draws : omega_draws;
        if (draws.empty()) throw std::invalid_argument("export_traces: no draws for requested matrix");
        const Matrix& first = draws.front();
        if (e.row >= first.rows() || e.col >= first.cols()) {
            throw std::out_of_range("export_traces: entry (" + std::to_string(e.row + 1) + "," +
                                    std::to_string(e.col + 1) + ") outside " +
                                    std::to_string(first.rows()) + "x" + std::to_string(first.cols()));
        }
        TraceSeries ts;
        ts.label = std::string(is_b ? "B" : "Omega") + "[" + std::to_string(e.row + 1) + "," +
                   std::to_string(e.col + 1) + "]";
        ts.values.reserve(draws.size());
        ts.running_mean.reserve(draws.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < draws.size(); ++i) {
            const double v = draws[i](e.row, e.col);
            acc += v;
            ts.values.push_back(v);
            ts.running_mean.push_back(acc / static_cast<double>(i + 1));
        }
        out.push_back(std::move(ts));
    }
    return out;
}

std::vector<TraceSeries> export_traces(const ChainOutput& chain, std::span<const TraceEntry> entries) {
    return export_traces(chain.b_samples, chain.omega_samples, entries);
}

EdgeTables export_edge_lists(const SelectionSummary& summary,
                             std::span<const std::string> predictor_names,
                             std::span<const std::string> response_names) {
    const std::size_t p = summary.gamma_hat.rows();
    const std::size_t q = summary.gamma_hat.cols();
    if (!predictor_names.empty() && predictor_names.size() != p) {
        throw std::invalid_argument("export_edge_lists: need one predictor name per row");
    }
    if (!response_names.empty() && response_names.size() != q) {
        throw std::invalid_argument("export_edge_lists: need one response name per column");
    }
    auto xname = [&](std::size_t j) {
        return predictor_names.empty() ? "X" + std::to_string(j + 1) : predictor_names[j];
    };
    auto yname = [&](std::size_t k) {
        return response_names.empty() ? "Y" + std::to_string(k + 1) : response_names[k];
    };
    EdgeTables out;
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < q; ++k)
            if (summary.gamma_hat(j, k))
                out.predictor_response.push_back({xname(j), yname(k), summary.incl_b(j, k)});
    const std::size_t qe = summary.eta_hat.rows();
    for (std::size_t s = 0; s < qe; ++s)
        for (std::size_t t = s + 1; t < qe; ++t)
            if (summary.eta_hat(s, t))
                out.response_response.push_back({yname(s), yname(t), summary.incl_omega(s, t)});
    return out;
}

}  // namespace mvsel
