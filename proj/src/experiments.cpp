#include "pmqkd/experiments.hpp"

#include <cmath>
#include <exception>
#include <numbers>

namespace pmqkd::experiments {

int defaultPhaseSlices(int d) {
    if (d >= 10) return d;
    int slices = 16;
    while (slices % d != 0) ++slices;
    return slices;
}

channel::ProtocolParams makeProtocol(int d, double mu, const Defaults& defs,
                                     int phaseSlicesOverride) {
    channel::ProtocolParams proto;
    proto.dimension = d;
    proto.phaseSlices = phaseSlicesOverride > 0 ? phaseSlicesOverride : defaultPhaseSlices(d);
    proto.intensity = mu > 0.0 ? mu : 0.1;
    proto.ecEfficiency = defs.ecEfficiency;
    proto.validate();
    return proto;
}

namespace {

// OpenMP regions cannot leak exceptions; keep the first one and rethrow
// after the loop.
class ErrorCollector {
public:
    template <typename F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
#pragma omp critical(pmqkd_experiments_error)
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::exception_ptr error_;
};

RateRow evaluatePoint(double distanceKm, int d, double delta0, double phiLim, double mu,
                      const Defaults& defs, int phaseSlicesOverride) {
    channel::ChannelParams ch = defs.channelParams;
    ch.distanceKm = distanceKm;
    const channel::MisalignmentModel model(delta0, phiLim, defs.mode, defs.quadratureNodes);

    RateRow row;
    row.distanceKm = distanceKm;
    row.dimension = d;
    row.delta0 = delta0;
    row.phiLim = phiLim;
    row.plob = keyrate::plobBound(ch.channelTransmittance());

    if (mu > 0.0) {
        const auto proto = makeProtocol(d, mu, defs, phaseSlicesOverride);
        const auto pt = keyrate::keyRate(proto, ch, model, defs.nMaxPhotons);
        row.mu = mu;
        row.rate = pt.rate;
        row.mi = pt.mi;
        row.pl = pt.pl;
        row.gain = pt.left.gain + pt.right.gain;
    } else {
        const auto proto = makeProtocol(d, 0.1, defs, phaseSlicesOverride);
        const auto opt = keyrate::optimizeIntensity(proto, ch, model, 1e-4, 0.5, 48,
                                                    defs.nMaxPhotons);
        row.mu = opt.mu;
        row.rate = opt.rate;
        row.mi = opt.point.mi;
        row.pl = opt.point.pl;
        row.gain = opt.point.left.gain + opt.point.right.gain;
    }
    return row;
}

}  // namespace

std::vector<RateRow> rateCurve(const GridConfig& config) {
    if (config.distancesKm.empty() || config.dimensions.empty() || config.delta0s.empty() ||
        config.phiLims.empty())
        throw ConfigError("rate-curve grid must be non-empty");

    const std::vector<double> mus =
        config.intensities.empty() ? std::vector<double>{-1.0} : config.intensities;

    struct Point {
        double distance, delta0, phiLim, mu;
        int d;
    };
    std::vector<Point> grid;
    for (double distance : config.distancesKm)
        for (int d : config.dimensions)
            for (double delta0 : config.delta0s)
                for (double phiLim : config.phiLims)
                    for (double mu : mus) grid.push_back({distance, delta0, phiLim, mu, d});

    std::vector<RateRow> rows(grid.size());
    ErrorCollector errors;
#pragma omp parallel for schedule(dynamic) if (config.parallel)
    for (long i = 0; i < static_cast<long>(grid.size()); ++i) {
        errors.run([&] {
            const auto& p = grid[i];
            rows[i] = evaluatePoint(p.distance, p.d, p.delta0, p.phiLim, p.mu, config.defaults,
                                    config.phaseSlicesOverride);
        });
    }
    errors.rethrow();
    return rows;
}

std::vector<MisalignmentRow> misalignmentSweep(int d, double distanceKm, int gridPoints,
                                               const Defaults& defs, bool parallel) {
    if (gridPoints < 2) throw ConfigError("misalignment sweep needs at least 2 grid points");
    const double hi = 2.0 * std::numbers::pi / d;
    std::vector<MisalignmentRow> rows(gridPoints);
    ErrorCollector errors;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < gridPoints; ++i) {
        errors.run([&] {
            const double delta0 = hi * i / (gridPoints - 1);
            const auto row = evaluatePoint(distanceKm, d, delta0, 0.0, -1.0, defs, 0);
            rows[i] = {delta0, row.rate};
        });
    }
    errors.rethrow();
    return rows;
}

namespace {

FluctuationRow fluctuationPoint(const FluctuationConfig& config, int d, double mu, double x) {
    channel::ChannelParams ch = config.defaults.channelParams;
    ch.distanceKm = config.distanceKm;
    FluctuationRow row;
    row.dimension = d;
    row.x = x;
    switch (config.variant) {
        case FluctuationVariant::MiPlVsPhiLim: {
            const channel::MisalignmentModel model(0.0, x, config.defaults.mode,
                                                   config.defaults.quadratureNodes);
            const auto pt = keyrate::keyRate(makeProtocol(d, mu, config.defaults), ch, model,
                                             config.defaults.nMaxPhotons);
            row.mi = pt.mi;
            row.pl = pt.pl;
            row.muStar = mu;
            break;
        }
        case FluctuationVariant::MiPlVsMu: {
            const channel::MisalignmentModel model(0.0, config.phiLimFixed, config.defaults.mode,
                                                   config.defaults.quadratureNodes);
            const auto pt = keyrate::keyRate(makeProtocol(d, x, config.defaults), ch, model,
                                             config.defaults.nMaxPhotons);
            row.mi = pt.mi;
            row.pl = pt.pl;
            row.muStar = x;
            break;
        }
        case FluctuationVariant::OptimalMuVsPhiLim: {
            const channel::MisalignmentModel model(0.0, x, config.defaults.mode,
                                                   config.defaults.quadratureNodes);
            const auto opt = keyrate::optimizeIntensity(makeProtocol(d, 0.1, config.defaults), ch,
                                                        model, 1e-4, 0.5, 48,
                                                        config.defaults.nMaxPhotons);
            row.mi = opt.point.mi;
            row.pl = opt.point.pl;
            row.muStar = opt.mu;
            break;
        }
    }
    return row;
}

}  // namespace

std::vector<FluctuationRow> fluctuationStudy(const FluctuationConfig& config) {
    if (config.xs.empty()) throw ConfigError("fluctuation study grid must be non-empty");
    struct Point {
        int d;
        double mu, x;
    };
    std::vector<Point> grid;
    for (const auto& [d, mu] : config.dimsAndMu)
        for (double x : config.xs) grid.push_back({d, mu, x});

    std::vector<FluctuationRow> rows(grid.size());
    ErrorCollector errors;
#pragma omp parallel for schedule(dynamic) if (config.parallel)
    for (long i = 0; i < static_cast<long>(grid.size()); ++i) {
        errors.run([&] {
            rows[i] = fluctuationPoint(config, grid[i].d, grid[i].mu, grid[i].x);
        });
    }
    errors.rethrow();
    return rows;
}

std::vector<CompareRow> compareCurves(const std::vector<double>& distancesKm, double delta0,
                                      double phiLim, const Defaults& defs, bool parallel) {
    if (distancesKm.empty()) throw ConfigError("compare grid must be non-empty");
    std::vector<CompareRow> rows(distancesKm.size());
    ErrorCollector errors;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < static_cast<long>(distancesKm.size()); ++i) {
        errors.run([&] {
            const double L = distancesKm[i];
            rows[i].distanceKm = L;
            rows[i].rate17 = evaluatePoint(L, 17, delta0, phiLim, -1.0, defs, 0).rate;
            rows[i].rate2Misaligned = evaluatePoint(L, 2, delta0, phiLim, -1.0, defs, 0).rate;
            rows[i].rate2FluctuationOnly = evaluatePoint(L, 2, 0.0, phiLim, -1.0, defs, 0).rate;
        });
    }
    errors.rethrow();
    return rows;
}

std::vector<DecoyRow> decoyDemo(int d, double distanceKm, const std::vector<double>& intensities,
                                int nCut, const Defaults& defs) {
    channel::ChannelParams ch = defs.channelParams;
    ch.distanceKm = distanceKm;
    const channel::MisalignmentModel model(0.0);

    std::vector<std::pair<double, double>> gains;
    for (double mu : intensities) {
        const auto proto = makeProtocol(d, mu, defs);
        gains.emplace_back(mu, channel::gain(proto, ch, model, channel::Detector::L));
    }
    const auto est = keyrate::decoyEstimate(gains, nCut);

    const auto proto = makeProtocol(d, intensities.front(), defs);
    std::vector<DecoyRow> rows;
    for (int n = 0; n <= nCut; ++n) {
        DecoyRow row;
        row.n = n;
        row.yieldTrue = channel::nPhotonYield(n, proto, ch, model, channel::Detector::L);
        row.yieldLower = est.lower[n];
        row.yieldUpper = est.upper[n];
        rows.push_back(row);
    }
    return rows;
}

std::vector<McCheckRow> mcCheck(const montecarlo::McConfig& config) {
    const auto res = montecarlo::simulate(config);
    std::vector<McCheckRow> rows;
    for (auto det : {channel::Detector::L, channel::Detector::R}) {
        const char* tag = det == channel::Detector::L ? "L" : "R";
        const auto stats = channel::evaluate(config.proto, config.channelParams, config.model, det);

        McCheckRow gainRow;
        gainRow.quantity = std::string("gain_") + tag;
        gainRow.analytic = stats.gain;
        gainRow.empirical = res.gain(det);
        gainRow.sigma = std::sqrt(stats.gain * (1.0 - stats.gain) /
                                  static_cast<double>(config.rounds));
        gainRow.sigmaRatio =
            gainRow.sigma > 0.0 ? std::abs(gainRow.empirical - gainRow.analytic) / gainRow.sigma
                                : 0.0;
        rows.push_back(gainRow);

        const auto eHat = res.bitError(det);
        const double singles = static_cast<double>(res.singles(det));
        for (int k = 0; k < config.proto.dimension; ++k) {
            McCheckRow row;
            row.quantity = std::string("bit_error_") + tag + "_" + std::to_string(k);
            row.analytic = stats.bitError[k];
            row.empirical = eHat[k];
            row.sigma = singles > 0.0
                            ? std::sqrt(row.analytic * (1.0 - row.analytic) / singles)
                            : 0.0;
            row.sigmaRatio =
                row.sigma > 0.0 ? std::abs(row.empirical - row.analytic) / row.sigma : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<std::pair<int, double>> table2() { return keyrate::firstOrderFractionInaccuracy(); }

}  // namespace pmqkd::experiments
