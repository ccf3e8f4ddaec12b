#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvsel/datagen.hpp"
#include "mvsel/jrns.hpp"
#include "mvsel/metrics.hpp"
#include "mvsel/model.hpp"
#include "mvsel/summary.hpp"

namespace mvsel::cli {

enum class Method { jrns, stepwise };

Method parse_method(const std::string& name);
std::string method_name(Method m);

/// Applies flat `key = value` lines (keys are Hyperparams field names, `#`
/// starts a comment). Unknown keys and malformed values throw.
void apply_config(Hyperparams& hp, const std::string& text);
void apply_config_value(Hyperparams& hp, const std::string& key, const std::string& value);

/// Fit result in the shape every command consumes.
struct FitResult {
    SelectionSummary summary;
    std::vector<HyperSnapshot> hyper_trace;
    std::vector<double> accept_rates;
    std::vector<Matrix> b_draws;
    std::vector<Matrix> omega_draws;
};

/// JRNS: summaries straight from the joint chain. Stepwise: selection and
/// intervals for B from the first stage, B_hat from the closed-form estimate,
/// everything about Omega from the second stage.
FitResult fit(const Dataset& data, const Hyperparams& hp, Method method, double ci_level = 0.95,
              double pd_eps = 1e-3);

struct MetricsReport {
    double mcc_b = 0.0;
    double mcc_omega = 0.0;
    double sensitivity_b = 0.0;
    double specificity_b = 0.0;
    double sensitivity_omega = 0.0;
    double specificity_omega = 0.0;
    double rel_err_b = 0.0;
    double rel_err_omega = 0.0;
    bool exact_gamma = false;
    std::optional<CoverageResult> coverage_b;
    std::optional<CoverageResult> coverage_omega;
};

MetricsReport evaluate(const Mask& gamma_hat, const Mask& eta_hat, const Matrix& b_hat,
                       const Matrix& omega_hat, const GroundTruth& truth,
                       const IntervalMatrix* ci_b = nullptr, const IntervalMatrix* ci_omega = nullptr);

struct SimulateOptions {
    std::optional<int> setting;
    std::optional<std::size_t> n, p, q, nnz_b, nnz_omega;
    std::uint64_t seed = 0;
    std::filesystem::path out;
};

/// Setting (if any) first, explicit sizes on top.
SimConfig resolve_sim_config(const SimulateOptions& opt);
void cmd_simulate(const SimulateOptions& opt);

struct RunOptions {
    Method method = Method::jrns;
    std::filesystem::path x, y, out;
    Hyperparams hp;
    double ci_level = 0.95;
    double pd_eps = 1e-3;
    bool save_draws = false;
};

void cmd_run(const RunOptions& opt);

/// Reads a run_meta.json back into options that reproduce the run.
RunOptions run_options_from_meta(const std::filesystem::path& meta_path);

std::string cmd_metrics(const std::filesystem::path& est_dir, const std::filesystem::path& truth_dir);

struct ExperimentOptions {
    SimulateOptions sim;  // seed and out are ignored
    std::size_t replicates = 1;
    Method method = Method::jrns;
    int threads = 1;
    std::uint64_t seed = 0;
    std::optional<std::size_t> burnin, iters;
    std::filesystem::path out;
};

struct ReplicateRow {
    std::size_t replicate = 0;
    std::uint64_t data_seed = 0;
    std::uint64_t chain_seed = 0;
    std::string status = "ok";
    MetricsReport metrics;
};

/// Replicate r simulates with derive_seed(seed, 2r) and samples with derive_seed(seed, 2r + 1).
std::vector<ReplicateRow> run_experiment(const ExperimentOptions& opt);
/// Header, one line per replicate, then mean and sd lines.
std::string format_experiment(const std::vector<ReplicateRow>& rows);
void cmd_experiment(const ExperimentOptions& opt);

struct TraceOptions {
    std::filesystem::path chain;
    std::vector<std::string> entries;  // "B:r,c" or "Omega:r,c", one-based
    std::filesystem::path out;         // empty: stdout
};

TraceEntry parse_trace_entry(const std::string& text);
std::string cmd_trace(const TraceOptions& opt);

/// Full command-line entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace mvsel::cli
