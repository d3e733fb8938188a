// Times the OpenMP kernels against their serial reference implementations:
// Monte Carlo detection sampling, the commuting-argument scan, and the
// rate-curve grid sweep.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "pmqkd/experiments.hpp"
#include "pmqkd/montecarlo.hpp"
#include "pmqkd/verify.hpp"

using namespace pmqkd;

namespace {

double seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-24s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   results %s\n", name,
                serial, parallel, serial / parallel, identical ? "identical" : "DIFFER");
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    {
        montecarlo::McConfig cfg;
        cfg.rounds = 8'000'000;
        cfg.seed = 99;
        cfg.proto.dimension = 17;
        cfg.proto.phaseSlices = 17;
        cfg.proto.intensity = 0.03;
        cfg.channelParams = channel::ChannelParams{0.2, 100.0, 0.2, 1e-8};
        cfg.model = channel::MisalignmentModel(0.1, 0.3);

        auto t0 = std::chrono::steady_clock::now();
        const auto serial = montecarlo::simulateSerial(cfg);
        const double ts = seconds(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = montecarlo::simulate(cfg);
        const double tp = seconds(t0);
        report("monte-carlo", ts, tp, serial == parallel);
    }

    {
        auto t0 = std::chrono::steady_clock::now();
        const double serial = verify::commutingScanWorstDeviation(7, 24, 128, false);
        const double ts = seconds(t0);
        t0 = std::chrono::steady_clock::now();
        const double parallel = verify::commutingScanWorstDeviation(7, 24, 128, true);
        const double tp = seconds(t0);
        report("commuting-scan", ts, tp, serial == parallel);
    }

    {
        experiments::GridConfig cfg;
        cfg.distancesKm = {50, 100, 150, 200, 250, 300};
        cfg.dimensions = {2, 17};
        cfg.delta0s = {0.0, 0.1};
        cfg.phiLims = {0.0, 0.5};

        cfg.parallel = false;
        auto t0 = std::chrono::steady_clock::now();
        const auto serial = experiments::rateCurve(cfg);
        const double ts = seconds(t0);
        cfg.parallel = true;
        t0 = std::chrono::steady_clock::now();
        const auto parallel = experiments::rateCurve(cfg);
        const double tp = seconds(t0);
        bool identical = serial.size() == parallel.size();
        for (size_t i = 0; identical && i < serial.size(); ++i)
            identical = serial[i].rate == parallel[i].rate && serial[i].mu == parallel[i].mu;
        report("rate-curve-sweep", ts, tp, identical);
    }

    return 0;
}
