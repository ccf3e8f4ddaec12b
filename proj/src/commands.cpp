#include "mvsel/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mvsel/io.hpp"
#include "mvsel/stepwise.hpp"

namespace mvsel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": not a number: '" + v + "'");
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument(key + ": not a non-negative integer: '" + v + "'");
    }
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": out of range: '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument(key + ": not a boolean: '" + v + "'");
}

using Setter = std::function<void(Hyperparams&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto real = [&t](const char* k, double Hyperparams::*f) {
            t[k] = [f](Hyperparams& hp, const std::string& key, const std::string& v) { hp.*f = to_double(key, v); };
        };
        auto flag = [&t](const char* k, bool Hyperparams::*f) {
            t[k] = [f](Hyperparams& hp, const std::string& key, const std::string& v) { hp.*f = to_bool(key, v); };
        };
        auto count = [&t](const char* k, std::size_t Hyperparams::*f) {
            t[k] = [f](Hyperparams& hp, const std::string& key, const std::string& v) {
                hp.*f = static_cast<std::size_t>(to_uint(key, v));
            };
        };
        real("q1", &Hyperparams::q1);
        real("q2", &Hyperparams::q2);
        real("tau1_sq", &Hyperparams::tau1_sq);
        real("tau2_sq", &Hyperparams::tau2_sq);
        real("lambda", &Hyperparams::lambda);
        real("alpha", &Hyperparams::alpha);
        real("beta", &Hyperparams::beta);
        real("proposal_var", &Hyperparams::proposal_var);
        flag("adaptive_q", &Hyperparams::adaptive_q);
        flag("adaptive_tau", &Hyperparams::adaptive_tau);
        flag("adaptive_lambda", &Hyperparams::adaptive_lambda);
        flag("exact_mh", &Hyperparams::exact_mh);
        flag("per_entry_hyper", &Hyperparams::per_entry_hyper);
        count("burnin", &Hyperparams::burnin);
        count("iters", &Hyperparams::iters);
        count("thin", &Hyperparams::thin);
        t["seed"] = [](Hyperparams& hp, const std::string& key, const std::string& v) { hp.seed = to_uint(key, v); };
        return t;
    }();
    return table;
}

json hyper_to_json(const Hyperparams& hp) {
    return {
        {"q1", hp.q1},
        {"q2", hp.q2},
        {"tau1_sq", hp.tau1_sq},
        {"tau2_sq", hp.tau2_sq},
        {"lambda", hp.lambda},
        {"alpha", hp.alpha},
        {"beta", hp.beta},
        {"proposal_var", hp.proposal_var},
        {"adaptive_q", hp.adaptive_q},
        {"adaptive_tau", hp.adaptive_tau},
        {"adaptive_lambda", hp.adaptive_lambda},
        {"exact_mh", hp.exact_mh},
        {"per_entry_hyper", hp.per_entry_hyper},
        {"burnin", hp.burnin},
        {"iters", hp.iters},
        {"thin", hp.thin},
        {"seed", hp.seed},
    };
}

Hyperparams hyper_from_json(const json& j) {
    Hyperparams hp;
    for (const auto& [key, value] : j.items()) {
        std::string text;
        if (value.is_boolean()) text = value.get<bool>() ? "true" : "false";
        else if (value.is_number_unsigned()) text = std::to_string(value.get<std::uint64_t>());
        else if (value.is_number()) text = io::format_double(value.get<double>());
        else throw std::invalid_argument("run_meta: hyperparameter " + key + " has an unexpected type");
        apply_config_value(hp, key, text);
    }
    return hp;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

void ensure_dir(const fs::path& dir) {
    if (dir.empty()) throw std::invalid_argument("output directory not given");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create directory " + dir.string());
}

Matrix merge_hyper_rows(const std::vector<HyperSnapshot>& rows) {
    Matrix m(rows.size(), 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m(i, 0) = rows[i].q1;
        m(i, 1) = rows[i].q2;
        m(i, 2) = rows[i].tau1_sq;
        m(i, 3) = rows[i].tau2_sq;
        m(i, 4) = rows[i].lambda;
    }
    return m;
}

GroundTruth read_truth(const fs::path& dir) {
    GroundTruth t;
    t.b0 = io::read_matrix_csv(dir / "B0.csv");
    t.omega0 = io::read_matrix_csv(dir / "Omega0.csv");
    t.gamma_true = io::read_mask_csv(dir / "gamma.csv");
    t.eta_true = io::read_mask_csv(dir / "eta.csv");
    return t;
}

json report_to_json(const MetricsReport& r) {
    json j = {
        {"mcc_B", nullable(r.mcc_b)},
        {"mcc_Omega", nullable(r.mcc_omega)},
        {"sensitivity_B", r.sensitivity_b},
        {"specificity_B", r.specificity_b},
        {"sensitivity_Omega", r.sensitivity_omega},
        {"specificity_Omega", r.specificity_omega},
        {"rel_err_B", nullable(r.rel_err_b)},
        {"rel_err_Omega", nullable(r.rel_err_omega)},
        {"exact_gamma", r.exact_gamma},
    };
    auto put = [&j](const char* name, const std::optional<CoverageResult>& c) {
        const std::string key = name;
        j[key] = c ? nullable(c->fraction) : json(nullptr);
        j[key + "_evaluated"] = c ? json(c->evaluated) : json(nullptr);
        j[key + "_skipped"] = c ? json(c->skipped) : json(nullptr);
    };
    put("coverage_B", r.coverage_b);
    put("coverage_Omega", r.coverage_omega);
    return j;
}

Hyperparams experiment_hyper(const ExperimentOptions& opt, const SimConfig& cfg, std::uint64_t chain_seed) {
    Hyperparams hp = default_hyperparams(cfg.p, cfg.q);
    if (opt.burnin) hp.burnin = *opt.burnin;
    if (opt.iters) hp.iters = *opt.iters;
    hp.seed = chain_seed;
    return hp;
}

}  // namespace

Method parse_method(const std::string& name) {
    if (name == "jrns") return Method::jrns;
    if (name == "stepwise") return Method::stepwise;
    throw std::invalid_argument("unknown method '" + name + "' (expected jrns or stepwise)");
}

std::string method_name(Method m) { return m == Method::jrns ? "jrns" : "stepwise"; }

void apply_config_value(Hyperparams& hp, const std::string& key, const std::string& value) {
    const auto& t = setters();
    const auto it = t.find(key);
    if (it == t.end()) throw std::invalid_argument("unknown config key '" + key + "'");
    it->second(hp, key, value);
}

void apply_config(Hyperparams& hp, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_config_value(hp, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

FitResult fit(const Dataset& data, const Hyperparams& hp, Method method, double ci_level, double pd_eps) {
    hp.validate();
    SeededRng rng(hp.seed);
    FitResult out;
    if (method == Method::jrns) {
        ChainOutput chain = run_jrns(data, hp, std::nullopt, rng);
        out.summary = summarize(chain.b_samples, chain.omega_samples, ci_level, pd_eps);
        out.hyper_trace = std::move(chain.hyper_trace);
        out.accept_rates = chain.acceptance_rates();
        out.b_draws = std::move(chain.b_samples);
        out.omega_draws = std::move(chain.omega_samples);
        return out;
    }
    StepwiseOutput sw = run_stepwise(data, hp, rng);
    out.summary = summarize(sw.step1.chain.b_samples, sw.step2.chain.omega_samples, ci_level, pd_eps);
    out.summary.b_hat = std::move(sw.b_hat);
    const auto& t1 = sw.step1.chain.hyper_trace;
    const auto& t2 = sw.step2.chain.hyper_trace;
    out.hyper_trace.resize(std::min(t1.size(), t2.size()));
    for (std::size_t i = 0; i < out.hyper_trace.size(); ++i) {
        out.hyper_trace[i] = t2[i];
        out.hyper_trace[i].q1 = t1[i].q1;
        out.hyper_trace[i].tau1_sq = t1[i].tau1_sq;
    }
    out.accept_rates = sw.step2.chain.acceptance_rates();
    out.b_draws = std::move(sw.step1.chain.b_samples);
    out.omega_draws = std::move(sw.step2.chain.omega_samples);
    return out;
}

MetricsReport evaluate(const Mask& gamma_hat, const Mask& eta_hat, const Matrix& b_hat,
                       const Matrix& omega_hat, const GroundTruth& truth, const IntervalMatrix* ci_b,
                       const IntervalMatrix* ci_omega) {
    MetricsReport r;
    const ConfusionCounts cb = confusion_counts(gamma_hat, truth.gamma_true, Scope::full);
    const ConfusionCounts co = confusion_counts(eta_hat, truth.eta_true, Scope::upper);
    r.mcc_b = mcc(cb);
    r.mcc_omega = mcc(co);
    r.sensitivity_b = sensitivity(cb);
    r.specificity_b = specificity(cb);
    r.sensitivity_omega = sensitivity(co);
    r.specificity_omega = specificity(co);
    r.rel_err_b = frobenius_norm(truth.b0) > 0.0 ? relative_error(b_hat, truth.b0)
                                                 : std::numeric_limits<double>::quiet_NaN();
    r.rel_err_omega = relative_error(omega_hat, truth.omega0);
    r.exact_gamma = gamma_hat == truth.gamma_true;
    if (ci_b) r.coverage_b = coverage(*ci_b, truth.b0, nonzero_entries(truth.b0));
    if (ci_omega) r.coverage_omega = coverage(*ci_omega, truth.omega0, nonzero_entries(truth.omega0, true));
    return r;
}

SimConfig resolve_sim_config(const SimulateOptions& opt) {
    SimConfig cfg;
    if (opt.setting) {
        cfg = preset_setting(*opt.setting);
    } else if (!(opt.n && opt.p && opt.q)) {
        throw std::invalid_argument("give --setting or all of --n, --p, --q");
    } else {
        cfg.nnz_b = *opt.p / 5;
        cfg.nnz_omega = *opt.q / 5;
    }
    if (opt.n) cfg.n = *opt.n;
    if (opt.p) cfg.p = *opt.p;
    if (opt.q) cfg.q = *opt.q;
    if (opt.nnz_b) cfg.nnz_b = *opt.nnz_b;
    if (opt.nnz_omega) cfg.nnz_omega = *opt.nnz_omega;
    cfg.seed = opt.seed;
    cfg.validate();
    return cfg;
}

void cmd_simulate(const SimulateOptions& opt) {
    const SimConfig cfg = resolve_sim_config(opt);
    ensure_dir(opt.out);
    const Simulation sim = simulate(cfg);
    io::write_matrix_csv(opt.out / "X.csv", sim.data.x);
    io::write_matrix_csv(opt.out / "Y.csv", sim.data.y);
    io::write_matrix_csv(opt.out / "B0.csv", sim.truth.b0);
    io::write_matrix_csv(opt.out / "Omega0.csv", sim.truth.omega0);
    io::write_mask_csv(opt.out / "gamma.csv", sim.truth.gamma_true);
    io::write_mask_csv(opt.out / "eta.csv", sim.truth.eta_true);
    json meta = {
        {"setting", opt.setting ? json(*opt.setting) : json(nullptr)},
        {"n", cfg.n},
        {"p", cfg.p},
        {"q", cfg.q},
        {"nnz_B", cfg.nnz_b},
        {"nnz_Omega", cfg.nnz_omega},
        {"ar_rho", cfg.ar_rho},
        {"b_range", {cfg.b_range.first, cfg.b_range.second}},
        {"omega_offdiag_range", {cfg.omega_offdiag_range.first, cfg.omega_offdiag_range.second}},
        {"omega_diag_range", {cfg.omega_diag_range.first, cfg.omega_diag_range.second}},
        {"seed", cfg.seed},
        {"omega0_min_eigenvalue", min_eigenvalue_sym(sim.truth.omega0)},
    };
    io::write_text(opt.out / "meta.json", meta.dump(2) + "\n");
}

void cmd_run(const RunOptions& opt) {
    opt.hp.validate();
    if (!(opt.ci_level > 0.0 && opt.ci_level < 1.0)) throw std::invalid_argument("ci level must lie in (0, 1)");
    if (opt.pd_eps < 0.0) throw std::invalid_argument("pd-eps must be non-negative");
    Matrix x = io::read_matrix_csv(opt.x);
    Matrix y = io::read_matrix_csv(opt.y);
    if (x.rows() != y.rows()) {
        throw std::invalid_argument("X has " + std::to_string(x.rows()) + " rows but Y has " +
                                    std::to_string(y.rows()));
    }
    const Dataset data(std::move(x), std::move(y));
    ensure_dir(opt.out);
    const FitResult r = fit(data, opt.hp, opt.method, opt.ci_level, opt.pd_eps);
    const SelectionSummary& s = r.summary;
    io::write_matrix_csv(opt.out / "incl_B.csv", s.incl_b);
    io::write_matrix_csv(opt.out / "incl_Omega.csv", s.incl_omega);
    io::write_matrix_csv(opt.out / "B_hat.csv", s.b_hat);
    io::write_matrix_csv(opt.out / "Omega_hat.csv", s.omega_hat);
    io::write_mask_csv(opt.out / "gamma_hat.csv", s.gamma_hat);
    io::write_mask_csv(opt.out / "eta_hat.csv", s.eta_hat);
    io::write_intervals_csv(opt.out / "ci_B.csv", s.ci_b);
    io::write_intervals_csv(opt.out / "ci_Omega.csv", s.ci_omega);
    io::write_matrix_csv(opt.out / "hyper_trace.csv", merge_hyper_rows(r.hyper_trace));
    io::write_matrix_csv(opt.out / "accept_rates.csv",
                         Matrix::from_values(r.accept_rates.size(), 1, r.accept_rates));

    const EdgeTables edges = export_edge_lists(s);
    const std::vector<std::string> header{"from", "to", "inclusion_prob"};
    for (const auto& [name, table] : {std::pair{"edges_B.hdr.csv", &edges.predictor_response},
                                      std::pair{"edges_Omega.hdr.csv", &edges.response_response}}) {
        std::vector<std::vector<std::string>> rows;
        for (const Edge& e : *table) rows.push_back({e.from, e.to, io::format_double(e.inclusion_prob)});
        io::write_table_csv(opt.out / name, header, rows);
    }
    if (opt.save_draws) {
        io::write_draws_csv(opt.out / "draws_B.csv", r.b_draws);
        io::write_draws_csv(opt.out / "draws_Omega.csv", r.omega_draws);
    }

    json meta = {
        {"method", method_name(opt.method)},
        {"x", opt.x.string()},
        {"y", opt.y.string()},
        {"n", data.n()},
        {"p", data.p()},
        {"q", data.q()},
        {"ci_level", opt.ci_level},
        {"pd_eps", opt.pd_eps},
        {"save_draws", opt.save_draws},
        {"draws_stored", r.b_draws.size()},
        {"hyperparams", hyper_to_json(opt.hp)},
    };
    io::write_text(opt.out / "run_meta.json", meta.dump(2) + "\n");
}

RunOptions run_options_from_meta(const fs::path& meta_path) {
    const json meta = json::parse(io::read_text(meta_path));
    RunOptions opt;
    opt.method = parse_method(meta.at("method").get<std::string>());
    opt.x = meta.at("x").get<std::string>();
    opt.y = meta.at("y").get<std::string>();
    opt.ci_level = meta.at("ci_level").get<double>();
    opt.pd_eps = meta.at("pd_eps").get<double>();
    opt.save_draws = meta.at("save_draws").get<bool>();
    opt.hp = hyper_from_json(meta.at("hyperparams"));
    return opt;
}

std::string cmd_metrics(const fs::path& est_dir, const fs::path& truth_dir) {
    const GroundTruth truth = read_truth(truth_dir);
    const Mask gamma_hat = io::read_mask_csv(est_dir / "gamma_hat.csv");
    const Mask eta_hat = io::read_mask_csv(est_dir / "eta_hat.csv");
    const Matrix b_hat = io::read_matrix_csv(est_dir / "B_hat.csv");
    const Matrix omega_hat = io::read_matrix_csv(est_dir / "Omega_hat.csv");
    std::optional<IntervalMatrix> ci_b;
    std::optional<IntervalMatrix> ci_omega;
    if (fs::exists(est_dir / "ci_B.csv")) ci_b = io::read_intervals_csv(est_dir / "ci_B.csv");
    if (fs::exists(est_dir / "ci_Omega.csv")) ci_omega = io::read_intervals_csv(est_dir / "ci_Omega.csv");
    const MetricsReport r = evaluate(gamma_hat, eta_hat, b_hat, omega_hat, truth, ci_b ? &*ci_b : nullptr,
                                     ci_omega ? &*ci_omega : nullptr);
    return report_to_json(r).dump(2) + "\n";
}

std::vector<ReplicateRow> run_experiment(const ExperimentOptions& opt) {
    if (opt.replicates < 1) throw std::invalid_argument("replicates must be at least 1");
    if (opt.threads < 1) throw std::invalid_argument("threads must be at least 1");
    const SimConfig base = resolve_sim_config(opt.sim);
    experiment_hyper(opt, base, 0).validate();

    std::vector<ReplicateRow> rows(opt.replicates);
    omp_set_max_active_levels(1);
    const long long total = static_cast<long long>(opt.replicates);
#pragma omp parallel for schedule(dynamic) num_threads(opt.threads)
    for (long long rr = 0; rr < total; ++rr) {
        const auto r = static_cast<std::size_t>(rr);
        ReplicateRow& row = rows[r];
        row.replicate = r;
        row.data_seed = derive_seed(opt.seed, 2 * r);
        row.chain_seed = derive_seed(opt.seed, 2 * r + 1);
        try {
            SimConfig cfg = base;
            cfg.seed = row.data_seed;
            const Simulation sim = simulate(cfg);
            const FitResult f = fit(sim.data, experiment_hyper(opt, cfg, row.chain_seed), opt.method);
            const SelectionSummary& s = f.summary;
            row.metrics = evaluate(s.gamma_hat, s.eta_hat, s.b_hat, s.omega_hat, sim.truth, &s.ci_b, &s.ci_omega);
        } catch (const std::exception& e) {
            std::string msg = one_line(e.what());
            for (char& c : msg)
                if (c == ',') c = ';';
            row.status = "error: " + msg;
        }
    }
    return rows;
}

std::string format_experiment(const std::vector<ReplicateRow>& rows) {
    using Getter = double (*)(const MetricsReport&);
    static const std::vector<std::pair<const char*, Getter>> cols = {
        {"mcc_B", [](const MetricsReport& m) { return m.mcc_b; }},
        {"mcc_Omega", [](const MetricsReport& m) { return m.mcc_omega; }},
        {"sensitivity_B", [](const MetricsReport& m) { return m.sensitivity_b; }},
        {"specificity_B", [](const MetricsReport& m) { return m.specificity_b; }},
        {"sensitivity_Omega", [](const MetricsReport& m) { return m.sensitivity_omega; }},
        {"specificity_Omega", [](const MetricsReport& m) { return m.specificity_omega; }},
        {"rel_err_B", [](const MetricsReport& m) { return m.rel_err_b; }},
        {"rel_err_Omega", [](const MetricsReport& m) { return m.rel_err_omega; }},
        {"exact_gamma", [](const MetricsReport& m) { return m.exact_gamma ? 1.0 : 0.0; }},
        {"coverage_B",
         [](const MetricsReport& m) {
             return m.coverage_b ? m.coverage_b->fraction : std::numeric_limits<double>::quiet_NaN();
         }},
        {"coverage_Omega",
         [](const MetricsReport& m) {
             return m.coverage_omega ? m.coverage_omega->fraction : std::numeric_limits<double>::quiet_NaN();
         }},
    };
    auto cell = [](double v) { return std::isfinite(v) ? io::format_double(v) : std::string("NA"); };

    std::ostringstream out;
    out << "replicate,data_seed,chain_seed,status";
    for (const auto& c : cols) out << ',' << c.first;
    out << '\n';
    for (const ReplicateRow& r : rows) {
        out << r.replicate + 1 << ',' << r.data_seed << ',' << r.chain_seed << ',' << r.status;
        const bool ok = r.status == "ok";
        for (const auto& c : cols) out << ',' << (ok ? cell(c.second(r.metrics)) : std::string("NA"));
        out << '\n';
    }
    std::vector<double> mean(cols.size());
    std::vector<double> sd(cols.size());
    std::size_t n_ok = 0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::vector<double> vals;
        for (const ReplicateRow& r : rows) {
            if (r.status != "ok") continue;
            const double v = cols[k].second(r.metrics);
            if (std::isfinite(v)) vals.push_back(v);
        }
        double m = 0.0;
        for (double v : vals) m += v;
        m = vals.empty() ? std::numeric_limits<double>::quiet_NaN() : m / static_cast<double>(vals.size());
        double ss = 0.0;
        for (double v : vals) ss += (v - m) * (v - m);
        mean[k] = m;
        sd[k] = vals.size() > 1 ? std::sqrt(ss / static_cast<double>(vals.size() - 1))
                                : std::numeric_limits<double>::quiet_NaN();
    }
    for (const ReplicateRow& r : rows) n_ok += r.status == "ok";
    for (const auto& [label, vals] : {std::pair{"mean", &mean}, std::pair{"sd", &sd}}) {
        out << label << ",,,n_ok=" << n_ok;
        for (double v : *vals) out << ',' << cell(v);
        out << '\n';
    }
    return out.str();
}

void cmd_experiment(const ExperimentOptions& opt) {
    if (opt.out.empty()) throw std::invalid_argument("output file not given");
    const std::vector<ReplicateRow> rows = run_experiment(opt);
    if (opt.out.has_parent_path()) ensure_dir(opt.out.parent_path());
    io::write_text(opt.out, format_experiment(rows));
    std::size_t failed = 0;
    for (const ReplicateRow& r : rows) failed += r.status != "ok";
    if (failed) {
        throw std::runtime_error(std::to_string(failed) + " of " + std::to_string(rows.size()) +
                                 " replicates failed; see status column in " + opt.out.string());
    }
}

TraceEntry parse_trace_entry(const std::string& text) {
    const auto colon = text.find(':');
    const auto comma = text.find(',', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || comma == std::string::npos) {
        throw std::invalid_argument("bad entry '" + text + "' (expected B:r,c or Omega:r,c)");
    }
    const std::string which = text.substr(0, colon);
    TraceEntry e;
    if (which == "B") e.matrix = TraceMatrix::b;
    else if (which == "Omega") e.matrix = TraceMatrix::omega;
    else throw std::invalid_argument("bad entry '" + text + "': matrix must be B or Omega");
    const std::uint64_t r = to_uint(text, text.substr(colon + 1, comma - colon - 1));
    const std::uint64_t c = to_uint(text, text.substr(comma + 1));
    if (r < 1 || c < 1) throw std::invalid_argument("bad entry '" + text + "': coordinates are one-based");
    e.row = static_cast<std::size_t>(r - 1);
    e.col = static_cast<std::size_t>(c - 1);
    return e;
}

std::string cmd_trace(const TraceOptions& opt) {
    if (opt.entries.empty()) throw std::invalid_argument("no entries requested");
    const json meta = json::parse(io::read_text(opt.chain / "run_meta.json"));
    if (!meta.at("save_draws").get<bool>()) {
        throw std::invalid_argument("run in " + opt.chain.string() + " was made without --save-draws");
    }
    const std::size_t p = meta.at("p").get<std::size_t>();
    const std::size_t q = meta.at("q").get<std::size_t>();
    std::vector<TraceEntry> entries;
    bool need_b = false;
    bool need_omega = false;
    for (const std::string& s : opt.entries) {
        entries.push_back(parse_trace_entry(s));
        const TraceEntry& e = entries.back();
        const bool is_b = e.matrix == TraceMatrix::b;
        const std::size_t rows = is_b ? p : q;
        if (e.row >= rows || e.col >= q) {
            throw std::out_of_range("entry " + s + " outside " + std::to_string(rows) + "x" + std::to_string(q));
        }
        (is_b ? need_b : need_omega) = true;
    }
    std::vector<Matrix> b_draws;
    std::vector<Matrix> omega_draws;
    if (need_b) b_draws = io::read_draws_csv(opt.chain / "draws_B.csv", p, q);
    if (need_omega) omega_draws = io::read_draws_csv(opt.chain / "draws_Omega.csv", q, q);
    const std::vector<TraceSeries> series = export_traces(b_draws, omega_draws, entries);

    std::ostringstream out;
    out << "entry,iteration,value,running_mean\n";
    for (const TraceSeries& ts : series)
        for (std::size_t i = 0; i < ts.values.size(); ++i)
            out << '"' << ts.label << "\"," << i + 1 << ',' << io::format_double(ts.values[i]) << ','
                << io::format_double(ts.running_mean[i]) << '\n';
    if (!opt.out.empty()) io::write_text(opt.out, out.str());
    return out.str();
}

int main(int argc, char** argv) {
    CLI::App app{"Joint sparse selection of regression coefficients and error precision"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::optional<int> setting;
    auto* c_sim = app.add_subcommand("simulate", "generate a synthetic data set");
    c_sim->add_option("--setting", setting, "preset 1..6")->check(CLI::Range(1, 6));
    c_sim->add_option("--n", sim.n);
    c_sim->add_option("--p", sim.p);
    c_sim->add_option("--q", sim.q);
    c_sim->add_option("--nnz-b", sim.nnz_b);
    c_sim->add_option("--nnz-omega", sim.nnz_omega);
    c_sim->add_option("--seed", sim.seed);
    c_sim->add_option("--out", sim.out, "output directory")->required();

    RunOptions run;
    std::string method = "jrns";
    std::string config_path;
    std::string meta_path;
    std::optional<std::size_t> burnin, iters, thin;
    std::optional<std::uint64_t> seed;
    std::optional<double> proposal_var;
    std::optional<bool> adaptive_q, per_entry, exact_mh;
    auto* c_run = app.add_subcommand("run", "run a sampler and summarize it");
    c_run->add_option("--method", method, "jrns or stepwise");
    c_run->add_option("--x", run.x);
    c_run->add_option("--y", run.y);
    c_run->add_option("--out", run.out)->required();
    c_run->add_option("--config", config_path, "key = value file");
    c_run->add_option("--from-meta", meta_path, "reuse the settings of an earlier run_meta.json");
    c_run->add_option("--burnin", burnin);
    c_run->add_option("--iters", iters);
    c_run->add_option("--thin", thin);
    c_run->add_option("--seed", seed);
    c_run->add_option("--proposal-var", proposal_var);
    c_run->add_flag("--adaptive-q,!--no-adaptive-q", adaptive_q);
    c_run->add_flag("--per-entry-hyper,!--no-per-entry-hyper", per_entry);
    c_run->add_flag("--exact-mh,!--no-exact-mh", exact_mh);
    c_run->add_option("--ci-level", run.ci_level);
    c_run->add_option("--pd-eps", run.pd_eps, "diagonal floor applied to every Omega draw (0 disables)");
    c_run->add_flag("--save-draws", run.save_draws);

    std::string est_dir, truth_dir;
    auto* c_met = app.add_subcommand("metrics", "score estimates against the truth");
    c_met->add_option("--est", est_dir)->required();
    c_met->add_option("--truth", truth_dir)->required();

    ExperimentOptions exp;
    std::string exp_method = "jrns";
    std::optional<int> exp_setting;
    auto* c_exp = app.add_subcommand("experiment", "replicated simulate, run, metrics");
    c_exp->add_option("--setting", exp_setting)->check(CLI::Range(1, 6));
    c_exp->add_option("--n", exp.sim.n);
    c_exp->add_option("--p", exp.sim.p);
    c_exp->add_option("--q", exp.sim.q);
    c_exp->add_option("--nnz-b", exp.sim.nnz_b);
    c_exp->add_option("--nnz-omega", exp.sim.nnz_omega);
    c_exp->add_option("--replicates", exp.replicates)->required();
    c_exp->add_option("--method", exp_method);
    c_exp->add_option("--threads", exp.threads);
    c_exp->add_option("--seed", exp.seed);
    c_exp->add_option("--burnin", exp.burnin);
    c_exp->add_option("--iters", exp.iters);
    c_exp->add_option("--out", exp.out)->required();

    TraceOptions tr;
    std::string tr_out;
    auto* c_tr = app.add_subcommand("trace", "per-iteration values and running means");
    c_tr->add_option("--chain", tr.chain)->required();
    c_tr->add_option("--entries", tr.entries)->required();
    c_tr->add_option("--out", tr.out);

    std::string command = "usage";
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << one_line(e.what()) << "\n";
        return 2;
    }

    try {
        if (*c_sim) {
            command = "simulate";
            sim.setting = setting;
            cmd_simulate(sim);
        } else if (*c_run) {
            command = "run";
            RunOptions opt = run;
            if (!meta_path.empty()) {
                RunOptions m = run_options_from_meta(meta_path);
                m.out = run.out;
                if (c_run->count("--x")) m.x = run.x;
                if (c_run->count("--y")) m.y = run.y;
                if (c_run->count("--method")) m.method = parse_method(method);
                if (c_run->count("--ci-level")) m.ci_level = run.ci_level;
                if (c_run->count("--pd-eps")) m.pd_eps = run.pd_eps;
                if (run.save_draws) m.save_draws = true;
                opt = m;
            } else {
                if (run.x.empty() || run.y.empty()) throw std::invalid_argument("--x and --y are required");
                opt.method = parse_method(method);
                const Matrix x = io::read_matrix_csv(opt.x);
                const Matrix y = io::read_matrix_csv(opt.y);
                opt.hp = default_hyperparams(x.cols(), y.cols());
            }
            if (!config_path.empty()) apply_config(opt.hp, io::read_text(config_path));
            if (burnin) opt.hp.burnin = *burnin;
            if (iters) opt.hp.iters = *iters;
            if (thin) opt.hp.thin = *thin;
            if (seed) opt.hp.seed = *seed;
            if (proposal_var) opt.hp.proposal_var = *proposal_var;
            if (adaptive_q) opt.hp.adaptive_q = *adaptive_q;
            if (per_entry) opt.hp.per_entry_hyper = *per_entry;
            if (exact_mh) opt.hp.exact_mh = *exact_mh;
            cmd_run(opt);
        } else if (*c_met) {
            command = "metrics";
            std::cout << cmd_metrics(est_dir, truth_dir);
        } else if (*c_exp) {
            command = "experiment";
            exp.method = parse_method(exp_method);
            exp.sim.setting = exp_setting;
            cmd_experiment(exp);
        } else if (*c_tr) {
            command = "trace";
            const std::string text = cmd_trace(tr);
            if (tr.out.empty()) std::cout << text;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << command << ": " << one_line(e.what()) << "\n";
        return 1;
    }
    return 0;
}

}  // namespace mvsel::cli
