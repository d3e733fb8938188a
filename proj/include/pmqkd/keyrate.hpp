#pragma once

#include <utility>
#include <vector>

#include "pmqkd/channel.hpp"

namespace pmqkd::keyrate {

/// log2-based Shannon entropy in bits; renormalizes inputs whose sum is
/// within 1e-8 of one and treats 0 log 0 as 0.
double entropy(std::vector<double> v);

struct GroupRate {
    double gain = 0.0;
    double mi = 0.0;    // log2 d - H(bit-error vector)
    double pl = 0.0;    // H(phase-error vector), residual assigned adversarially
    double rate = 0.0;  // (d/D) Q { gamma * MI - PL }, before total clamping
    channel::DetectionStats stats;
};

struct RatePoint {
    double distanceKm = 0.0;
    double mu = 0.0;
    double rate = 0.0;  // bits per pulse pair, groups summed, clamped at 0
    double mi = 0.0;    // gain-weighted across groups
    double pl = 0.0;
    GroupRate left, right;
};

RatePoint keyRate(const channel::ProtocolParams& proto, const channel::ChannelParams& ch,
                  const channel::MisalignmentModel& model, int nMaxPhotons = 10);

/// Repeaterless secret-key capacity -log2(1 - eta) of a lossy channel.
double plobBound(double channelTransmittance);

struct IntensityOpt {
    double mu = 0.0;  // 0 when no positive rate exists in the bracket
    double rate = 0.0;
    bool found = false;
    RatePoint point;
};

/// Coarse log-grid scan followed by golden-section refinement to a relative
/// tolerance of 1e-4 on mu.
IntensityOpt optimizeIntensity(channel::ProtocolParams proto, const channel::ChannelParams& ch,
                               const channel::MisalignmentModel& model, double muLo = 1e-4,
                               double muHi = 0.5, int gridPoints = 48, int nMaxPhotons = 10);

struct DecoyEstimate {
    std::vector<double> lower, upper;   // index n = 0..nCut
    std::vector<double> residualBound;  // per intensity: mass above nCut
};

/// Interval bounds on Y_0..Y_nCut from observed gains (mu_i, Q_i), solving the
/// truncated linear system with the above-cutoff contribution bracketed in
/// [0, sum_{n>nCut} P_mu(n)] and 0 <= Y_n <= 1. With zeroTailAssumption the
/// above-cutoff contribution is pinned to zero (exact inversion setting).
DecoyEstimate decoyEstimate(const std::vector<std::pair<double, double>>& gains, int nCut,
                            bool zeroTailAssumption = false);

struct RandomizationDeviation {
    double yieldBound;     // |Y_k - Y_{lambda_k}|  <= sqrt(mu^D k! / (D+k)!)
    double fractionBound;  // |q_k - q_{lambda_k}| <= mu^{D/2+k} e^{-mu} / (Q sqrt((D+k)!/k!))
};

RandomizationDeviation discreteRandDeviation(int k, double mu, int D, double qMu);

/// Relative single-photon fraction inaccuracy mu^{D/2} / (eta sqrt((D+1)!))
/// in the first-order regime Q = eta mu, q_1 = e^{-mu}, for D = 8..16.
std::vector<std::pair<int, double>> firstOrderFractionInaccuracy(double mu = 0.1,
                                                                 double eta = 1e-6);

}  // namespace pmqkd::keyrate
