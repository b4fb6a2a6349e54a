#include <chrono>
#include <cstdlib>
#include <iostream>

#include "vmap/feedgen.hpp"
#include "vmap/signal_engine.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace vmap;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
#ifdef _OPENMP
    std::cout << "threads " << omp_get_max_threads() << '\n';
#else
    std::cout << "threads 1 (no OpenMP)\n";
#endif
    const SessionConfig session;
    const int ssm = 45000;
    // Index 23069 has no usable scramble multiplier, so universes stay below it.
    for (int n : {1000, 5000, 20000}) {
        feedgen::GenSpec spec;
        spec.tickers = n;
        spec.interval_seconds = 23400;
        spec.industries_per_sector = 20;
        const auto day = feedgen::generate_day(spec);
        const auto& u = day.back().universe;

        std::vector<SignalState> a, b;
        const double ts = best_of(reps, [&] { a = serial::compute_signals(u, ssm, session); });
        const double tp = best_of(reps, [&] { b = compute_signals(u, ssm, session); });
        std::cout << "n=" << n << "  serial " << ts * 1e3 << " ms  parallel " << tp * 1e3 << " ms  speedup "
                  << ts / tp << (a == b ? "  identical" : "  MISMATCH") << '\n';
        if (a != b) return 1;
    }
    return 0;
}
