// Timing comparison of the serial reference kernels against the OpenMP
// parallel ones: path-batch simulation and the nonlocal-operator apply.
#include <chrono>
#include <cstdio>

#include "levyobst/jump_sde.hpp"
#include "levyobst/pide_solver.hpp"

using namespace levyobst;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace

int main() {
    const LevyModel model = LevyModel::variance_gamma(0.1, 0.2, -0.14);
    const double b = calibrate_drift(model, 0.05);
    const DriftSpec drift = DriftSpec::constant(b);
    const JumpCoefficient amp = JumpCoefficient::identity();

    SimConfig sim;
    sim.dt = 0.01;
    sim.horizon = 1.0;
    sim.n_paths = 20000;
    sim.seed = 7;
    sim.keep_jumps = false;

    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "parallel[s]", "speedup");

    {
        sim.workers = 1;
        auto t0 = std::chrono::steady_clock::now();
        const PathBatch serial = simulate_batch(model, drift, amp, 0.0, sim);
        auto t1 = std::chrono::steady_clock::now();
        sim.workers = 0;
        const PathBatch parallel = simulate_batch(model, drift, amp, 0.0, sim);
        auto t2 = std::chrono::steady_clock::now();
        const bool identical = serial.states == parallel.states;
        std::printf("%-28s %10.3f %10.3f %8.2f  (bit-identical: %s)\n", "simulate_batch",
                    seconds(t0, t1), seconds(t1, t2), seconds(t0, t1) / seconds(t1, t2),
                    identical ? "yes" : "NO");
    }

    {
        ProblemData prob = ProblemData::american(payoffs::put(1.0), 0.05, 1.0);
        Discretization disc;
        disc.x_lo = -2.0;
        disc.x_hi = 2.0;
        disc.n_nodes = 1201;
        disc.dt = 0.005;
        disc.workers = 1;
        auto t0 = std::chrono::steady_clock::now();
        const PideSolution serial = solve_pide(model, drift, prob, disc);
        auto t1 = std::chrono::steady_clock::now();
        disc.workers = 0;
        const PideSolution parallel = solve_pide(model, drift, prob, disc);
        auto t2 = std::chrono::steady_clock::now();
        const bool identical = serial.values == parallel.values;
        std::printf("%-28s %10.3f %10.3f %8.2f  (bit-identical: %s)\n", "pide_nonlocal_step",
                    seconds(t0, t1), seconds(t1, t2), seconds(t0, t1) / seconds(t1, t2),
                    identical ? "yes" : "NO");
    }
    return 0;
}
