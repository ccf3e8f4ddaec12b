// Parallel kernels against the serial reference, plus one JRNS sweep.
// usage: kernel_bench [size=300] [reps=5]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "mvsel/datagen.hpp"
#include "mvsel/jrns.hpp"
#include "mvsel/kernels.hpp"

using namespace mvsel;
using clock_type = std::chrono::steady_clock;

static double best_ms(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        f();
        const double ms = std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

static Matrix random_matrix(std::size_t r, std::size_t c, SeededRng& rng) {
    Matrix m(r, c);
    for (double& v : m.values()) v = rng.standard_normal();
    return m;
}

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 300;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    SeededRng rng(42);
    const Matrix a = random_matrix(n, n, rng);
    const Matrix b = random_matrix(n, n, rng);
    const Matrix y = random_matrix(n, n, rng);

    std::printf("threads %d, size %zu, best of %d\n", omp_get_max_threads(), n, reps);
    std::printf("%-12s %12s %12s %8s %s\n", "kernel", "parallel ms", "serial ms", "speedup", "match");

    auto row = [&](const char* name, auto par, auto ser) {
        Matrix p, s;
        const double tp = best_ms(reps, [&] { p = par(); });
        const double ts = best_ms(reps, [&] { s = ser(); });
        std::printf("%-12s %12.3f %12.3f %8.2f %s\n", name, tp, ts, ts / tp, p == s ? "yes" : "NO");
    };
    row("mat_mul", [&] { return mat_mul(a, b); }, [&] { return reference::mat_mul(a, b); });
    row("mat_mul_tn", [&] { return mat_mul_tn(a, b); }, [&] { return reference::mat_mul_tn(a, b); });
    row("residual", [&] { return residual(y, a, b); }, [&] { return reference::residual(y, a, b); });
    row("gram", [&] { return gram(a); }, [&] { return reference::gram(a); });

    SimConfig cfg = preset_setting(1);
    cfg.seed = 1;
    const Simulation sim = simulate(cfg);
    Hyperparams hp = default_hyperparams(cfg.p, cfg.q);
    ModelState state = ModelState::initial(sim.data);
    std::vector<std::size_t> counts(cfg.q);
    const double tb = best_ms(reps, [&] { sweep_b(state, hp, rng); });
    const double to = best_ms(reps, [&] { sweep_omega(sim.data, state, hp, rng, counts); });
    std::printf("setting 1 sweep_b %.3f ms, sweep_omega %.3f ms\n", tb, to);
    return 0;
}
