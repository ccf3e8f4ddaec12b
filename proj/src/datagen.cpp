#include "mvsel/datagen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsel {

namespace {

void check_range(const std::pair<double, double>& r, bool positive, const char* name) {
    if (!(std::isfinite(r.first) && std::isfinite(r.second) && r.first < r.second) ||
        (positive && !(r.first > 0.0))) {
        throw std::invalid_argument(std::string("SimConfig: bad ") + name);
    }
}

// First k entries of a partial Fisher-Yates shuffle of 0..m-1.
std::vector<std::size_t> distinct_positions(std::size_t m, std::size_t k, SeededRng& rng) {
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t span = m - i;
        std::size_t j = i + static_cast<std::size_t>(rng.uniform() * static_cast<double>(span));
        if (j >= m) j = m - 1;
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace

void SimConfig::validate() const {
    if (n == 0 || p == 0 || q == 0) throw std::invalid_argument("SimConfig: n, p, q must be positive");
    if (nnz_b > p * q) throw std::invalid_argument("SimConfig: nnz_b exceeds p*q");
    if (nnz_omega > q * (q - 1) / 2) throw std::invalid_argument("SimConfig: nnz_omega exceeds q(q-1)/2");
    if (!(ar_rho >= 0.0 && ar_rho < 1.0)) throw std::invalid_argument("SimConfig: ar_rho must lie in [0, 1)");
    check_range(b_range, false, "b_range");
    check_range(omega_offdiag_range, false, "omega_offdiag_range");
    check_range(omega_diag_range, true, "omega_diag_range");
}

SimConfig preset_setting(int k) {
    struct Row {
        std::size_t n, p, q;
        std::size_t b_div;
    };
    static constexpr Row rows[] = {
        {100, 30, 60, 5},   {100, 60, 30, 5},   {150, 200, 200, 5},
        {150, 300, 300, 5}, {100, 200, 200, 30}, {200, 200, 200, 30},
    };
    if (k < 1 || k > 6) throw std::invalid_argument("preset_setting: setting must be 1..6, got " + std::to_string(k));
    const Row& r = rows[k - 1];
    SimConfig cfg;
    cfg.n = r.n;
    cfg.p = r.p;
    cfg.q = r.q;
    cfg.nnz_b = r.p / r.b_div;
    cfg.nnz_omega = r.q / 5;
    return cfg;
}

Matrix gen_design(const SimConfig& cfg, SeededRng& rng) {
    cfg.validate();
    const double rho = cfg.ar_rho;
    const double innov = std::sqrt(1.0 - rho * rho);
    Matrix x(cfg.n, cfg.p);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        double prev = rng.standard_normal();
        x(i, 0) = prev;
        for (std::size_t j = 1; j < cfg.p; ++j) {
            prev = rho * prev + innov * rng.standard_normal();
            x(i, j) = prev;
        }
    }
    return x;
}

GroundTruth gen_truth(const SimConfig& cfg, SeededRng& rng) {
    cfg.validate();
    const std::size_t p = cfg.p;
    const std::size_t q = cfg.q;
    GroundTruth t{Matrix(p, q), Matrix(q, q), Mask(p, q), Mask(q, q)};

    for (std::size_t pos : distinct_positions(p * q, cfg.nnz_b, rng)) {
        const std::size_t r = pos / q;
        const std::size_t c = pos % q;
        t.b0(r, c) = draw_uniform(rng, cfg.b_range.first, cfg.b_range.second);
        t.gamma_true.set(r, c, true);
    }

    std::vector<std::pair<std::size_t, std::size_t>> upper;
    upper.reserve(q * (q - 1) / 2);
    for (std::size_t s = 0; s < q; ++s)
        for (std::size_t u = s + 1; u < q; ++u) upper.emplace_back(s, u);
    for (std::size_t pos : distinct_positions(upper.size(), cfg.nnz_omega, rng)) {
        const auto [s, u] = upper[pos];
        const double mag = draw_uniform(rng, cfg.omega_offdiag_range.first, cfg.omega_offdiag_range.second);
        const double v = rng.uniform() < 0.5 ? -mag : mag;
        t.omega0(s, u) = v;
        t.omega0(u, s) = v;
        t.eta_true.set(s, u, true);
        t.eta_true.set(u, s, true);
    }
    for (std::size_t s = 0; s < q; ++s)
        t.omega0(s, s) = draw_uniform(rng, cfg.omega_diag_range.first, cfg.omega_diag_range.second);

    const double eig_min = min_eigenvalue_sym(t.omega0);
    if (eig_min <= 0.1) {
        for (std::size_t s = 0; s < q; ++s) t.omega0(s, s) += 0.1 - eig_min;
    }
    return t;
}

Dataset gen_dataset(const SimConfig& cfg, const GroundTruth& truth, SeededRng& rng) {
    cfg.validate();
    const std::size_t n = cfg.n;
    const std::size_t p = cfg.p;
    const std::size_t q = cfg.q;
    if (truth.b0.rows() != p || truth.b0.cols() != q || truth.omega0.rows() != q || truth.omega0.cols() != q) {
        throw std::invalid_argument("gen_dataset: truth does not match config");
    }
    Matrix x = gen_design(cfg, rng);
    const Matrix l = cholesky_lower(truth.omega0);
    Matrix y(n, q);
    std::vector<double> u(q);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < q; ++s) u[s] = rng.standard_normal();
        // L^T u = z by back substitution.
        for (std::size_t s = q; s-- > 0;) {
            double acc = u[s];
            for (std::size_t k = s + 1; k < q; ++k) acc -= l(k, s) * u[k];
            u[s] = acc / l(s, s);
        }
        for (std::size_t s = 0; s < q; ++s) {
            double acc = u[s];
            for (std::size_t r = 0; r < p; ++r) acc += x(i, r) * truth.b0(r, s);
            y(i, s) = acc;
        }
    }
    return Dataset(std::move(x), std::move(y));
}

Simulation simulate(const SimConfig& cfg) {
    SeededRng rng(cfg.seed);
    GroundTruth truth = gen_truth(cfg, rng);
    Dataset data = gen_dataset(cfg, truth, rng);
    return {std::move(truth), std::move(data)};
}

}  // namespace mvsel
