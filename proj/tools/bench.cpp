// Benchmark: serial reference loop vs the OpenMP experiment kernel, plus the
// quadrature-heavy mixture evaluation. Also cross-checks that both experiment
// paths agree, since the serial loop is the reference implementation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "prqs/analytic.hpp"
#include "prqs/simulate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

int main(int argc, char** argv) {
    std::int64_t trials = 200000;
    std::int64_t rounds = 100;
    if (argc > 1) trials = std::stoll(argv[1]);
    if (argc > 2) rounds = std::stoll(argv[2]);

    prqs::ProtocolConfig cfg;
    cfg.alpha = 1.0;
    cfg.eta = 0.8;
    cfg.n_rounds = rounds;
    cfg.phi_true = 0.3;
    cfg.seed = 7;
    cfg.n_trials = trials;

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("experiment kernel: %lld trials x %lld rounds, %d thread(s)\n",
                static_cast<long long>(trials), static_cast<long long>(rounds), threads);

    auto t0 = std::chrono::steady_clock::now();
    const auto serial = prqs::run_experiment_serial(cfg);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel = prqs::run_experiment(cfg);
    const double t_parallel = seconds_since(t0);

    const double rounds_total = static_cast<double>(trials) * static_cast<double>(rounds);
    std::printf("  serial reference : %8.3f s  (%.1f Mrounds/s)\n", t_serial,
                rounds_total / t_serial / 1e6);
    std::printf("  parallel kernel  : %8.3f s  (%.1f Mrounds/s, speedup %.2fx)\n", t_parallel,
                rounds_total / t_parallel / 1e6, t_serial / t_parallel);

    const double drift = std::max(rel_diff(serial.mse_alice.value, parallel.mse_alice.value),
                                  rel_diff(serial.mse_eve.value, parallel.mse_eve.value));
    std::printf("  serial/parallel agreement: max rel diff %.2e\n", drift);
    if (drift > 1e-12) {
        std::printf("  MISMATCH between reference and kernel\n");
        return 1;
    }

    const prqs::ChannelPoint pt{1.0, 0.5, 100};
    t0 = std::chrono::steady_clock::now();
    const double mse_eve = prqs::mse_eve_exact(pt);
    const double t_mix = seconds_since(t0);
    std::printf("mixture quadrature (N=100): %.3f s, mse_eve = %.12g\n", t_mix, mse_eve);
    return 0;
}
