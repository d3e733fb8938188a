#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pmqkd/channel.hpp"
#include "pmqkd/keyrate.hpp"
#include "pmqkd/montecarlo.hpp"

namespace pmqkd::experiments {

/// Simulation defaults: 0.2 dB/km fiber, 20% detectors, 1e-8 dark counts,
/// 0.95 reconciliation efficiency.
struct Defaults {
    channel::ChannelParams channelParams{0.2, 0.0, 0.2, 1e-8};
    double ecEfficiency = 0.95;
    channel::FluctuationMode mode = channel::FluctuationMode::IndependentPerParty;
    int quadratureNodes = 65;
    int nMaxPhotons = 10;
};

/// D = d for d >= 10; otherwise the smallest multiple of d at or above 16
/// (so the binary protocol uses the customary 16 slices).
int defaultPhaseSlices(int d);

channel::ProtocolParams makeProtocol(int d, double mu, const Defaults& defs,
                                     int phaseSlicesOverride = 0);

struct RateRow {
    double distanceKm = 0.0;
    int dimension = 0;
    double delta0 = 0.0;
    double phiLim = 0.0;
    double mu = 0.0;
    double rate = 0.0;
    double mi = 0.0;
    double pl = 0.0;
    double gain = 0.0;
    double plob = 0.0;
};

struct GridConfig {
    std::vector<double> distancesKm;
    std::vector<int> dimensions;
    std::vector<double> delta0s{0.0};
    std::vector<double> phiLims{0.0};
    std::vector<double> intensities;  // empty: optimize per grid point
    Defaults defaults;
    int phaseSlicesOverride = 0;
    bool parallel = true;
};

/// Cartesian sweep; rows come out in grid order regardless of scheduling.
std::vector<RateRow> rateCurve(const GridConfig& config);

struct MisalignmentRow {
    double delta0 = 0.0;
    double rate = 0.0;
};

std::vector<MisalignmentRow> misalignmentSweep(int d, double distanceKm, int gridPoints,
                                               const Defaults& defs, bool parallel = true);

enum class FluctuationVariant {
    MiPlVsPhiLim,     // fixed mu per dimension, sweep phi_lim
    MiPlVsMu,         // fixed phi_lim, sweep mu
    OptimalMuVsPhiLim // optimize mu at each phi_lim
};

struct FluctuationRow {
    int dimension = 0;
    double x = 0.0;  // phi_lim or mu depending on the variant
    double mi = 0.0;
    double pl = 0.0;
    double muStar = 0.0;
};

struct FluctuationConfig {
    FluctuationVariant variant = FluctuationVariant::MiPlVsPhiLim;
    std::vector<std::pair<int, double>> dimsAndMu{{2, 0.2}, {17, 0.03}};
    std::vector<double> xs;
    double distanceKm = 300.0;
    double phiLimFixed = 0.0;  // used by MiPlVsMu
    Defaults defaults;
    bool parallel = true;
};

std::vector<FluctuationRow> fluctuationStudy(const FluctuationConfig& config);

struct CompareRow {
    double distanceKm = 0.0;
    double rate17 = 0.0;
    double rate2Misaligned = 0.0;
    double rate2FluctuationOnly = 0.0;
};

/// 17-PM and 2-PM under fixed misalignment plus fluctuation, and 2-PM under
/// fluctuation alone, with per-point intensity optimization.
std::vector<CompareRow> compareCurves(const std::vector<double>& distancesKm, double delta0,
                                      double phiLim, const Defaults& defs, bool parallel = true);

struct DecoyRow {
    int n = 0;
    double yieldTrue = 0.0;
    double yieldLower = 0.0;
    double yieldUpper = 0.0;
};

std::vector<DecoyRow> decoyDemo(int d, double distanceKm, const std::vector<double>& intensities,
                                int nCut, const Defaults& defs);

struct McCheckRow {
    std::string quantity;
    double analytic = 0.0;
    double empirical = 0.0;
    double sigma = 0.0;
    double sigmaRatio = 0.0;
};

std::vector<McCheckRow> mcCheck(const montecarlo::McConfig& config);

std::vector<std::pair<int, double>> table2();

}  // namespace pmqkd::experiments
