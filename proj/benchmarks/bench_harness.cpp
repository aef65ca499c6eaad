// Times the OpenMP experiment runner against the serial reference on the
// default max-power sweep and verifies that both produce identical results.
//
// Usage: pinchopt_bench [trials]   (default 200)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "pinchopt/mc_harness.hpp"

using namespace pinchopt;
using Clock = std::chrono::steady_clock;

namespace {

bool identical(const SweepResult& a, const SweepResult& b) {
    if (a.cells.size() != b.cells.size()) return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const SweepCell& x = a.cells[i];
        const SweepCell& y = b.cells[i];
        if (x.ee_mean != y.ee_mean || x.ee_std != y.ee_std || x.flagged != y.flagged ||
            x.trial_ee != y.trial_ee) {
            return false;
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    ExperimentSpec spec;
    spec.trials = (argc > 1) ? std::atoi(argv[1]) : 200;

    const std::size_t solves = spec.sweep_values.size() * spec.schemes.size() *
                               static_cast<std::size_t>(spec.trials);
    std::printf("max-power sweep: %zu sweep points x %zu schemes x %d trials = %zu solves\n",
                spec.sweep_values.size(), spec.schemes.size(), spec.trials, solves);

    auto t0 = Clock::now();
    const SweepResult serial = run_experiment_serial(spec);
    const double dt_serial = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%-18s %8.3f s  %8.0f solves/s\n", "serial reference", dt_serial,
                solves / dt_serial);

    for (int workers : {1, 2, 4}) {
        t0 = Clock::now();
        const SweepResult parallel = run_experiment(spec, workers);
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        const bool same = identical(serial, parallel);
        std::printf("%-15s %d  %8.3f s  %8.0f solves/s  speedup %.2fx  results %s\n",
                    "omp workers =", workers, dt, solves / dt, dt_serial / dt,
                    same ? "identical" : "MISMATCH");
        if (!same) return 1;
    }
    return 0;
}
