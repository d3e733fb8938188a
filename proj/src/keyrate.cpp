#include "pmqkd/keyrate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

namespace pmqkd::keyrate {

double entropy(std::vector<double> v) {
    double sum = 0.0;
    for (double p : v) {
        if (p < -1e-12) throw NumericGuardError("negative probability in entropy input");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw NumericGuardError("entropy input sums to " + std::to_string(sum));
    double h = 0.0;
    for (double p : v) {
        p = std::max(0.0, p) / sum;
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

namespace {

GroupRate groupRate(const channel::ProtocolParams& proto, const channel::ChannelParams& ch,
                    const channel::MisalignmentModel& model, channel::Detector det,
                    int nMaxPhotons) {
    GroupRate g;
    g.stats = channel::evaluate(proto, ch, model, det, nMaxPhotons);
    g.gain = g.stats.gain;
    if (g.gain <= 0.0) return g;  // no clicks, no key from this group
    if (g.stats.residualTail > 1e-6)
        throw TruncationError("photon-number residual " + std::to_string(g.stats.residualTail) +
                              " exceeds bound; raise the photon cutoff");
    g.mi = std::log2(static_cast<double>(proto.dimension)) - entropy(g.stats.bitError);
    g.pl = entropy(channel::pessimisticPhaseVector(g.stats.phaseError, g.stats.residualTail));
    g.rate = proto.siftingFactor() * g.gain * (proto.ecEfficiency * g.mi - g.pl);
    return g;
}

}  // namespace

RatePoint keyRate(const channel::ProtocolParams& proto, const channel::ChannelParams& ch,
                  const channel::MisalignmentModel& model, int nMaxPhotons) {
    RatePoint pt;
    pt.distanceKm = ch.distanceKm;
    pt.mu = proto.intensity;
    pt.left = groupRate(proto, ch, model, channel::Detector::L, nMaxPhotons);
    pt.right = groupRate(proto, ch, model, channel::Detector::R, nMaxPhotons);
    pt.rate = std::max(0.0, pt.left.rate + pt.right.rate);
    const double gainSum = pt.left.gain + pt.right.gain;
    if (gainSum > 0.0) {
        pt.mi = (pt.left.gain * pt.left.mi + pt.right.gain * pt.right.mi) / gainSum;
        pt.pl = (pt.left.gain * pt.left.pl + pt.right.gain * pt.right.pl) / gainSum;
    }
    return pt;
}

double plobBound(double channelTransmittance) {
    if (channelTransmittance <= 0.0 || channelTransmittance >= 1.0)
        throw ConfigError("PLOB bound needs transmittance in (0, 1)");
    return -std::log2(1.0 - channelTransmittance);
}

IntensityOpt optimizeIntensity(channel::ProtocolParams proto, const channel::ChannelParams& ch,
                               const channel::MisalignmentModel& model, double muLo, double muHi,
                               int gridPoints, int nMaxPhotons) {
    if (!(muLo > 0.0) || muHi > 0.5 || muHi <= muLo)
        throw ConfigError("intensity bracket must satisfy 0 < lo < hi <= 0.5");
    gridPoints = std::max(gridPoints, 40);

    const auto rateAt = [&](double mu) {
        proto.intensity = mu;
        return keyRate(proto, ch, model, nMaxPhotons);
    };

    const double logLo = std::log(muLo), logHi = std::log(muHi);
    int bestIdx = -1;
    double bestRate = 0.0;
    std::vector<double> mus(gridPoints);
    for (int i = 0; i < gridPoints; ++i) {
        mus[i] = std::exp(logLo + (logHi - logLo) * i / (gridPoints - 1));
        const double r = rateAt(mus[i]).rate;
        if (r > bestRate) {
            bestRate = r;
            bestIdx = i;
        }
    }

    IntensityOpt opt;
    if (bestIdx < 0) return opt;  // zero rate everywhere in the bracket

    double lo = std::log(mus[std::max(0, bestIdx - 1)]);
    double hi = std::log(mus[std::min(gridPoints - 1, bestIdx + 1)]);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = rateAt(std::exp(x1)).rate;
    double f2 = rateAt(std::exp(x2)).rate;
    while (hi - lo > 1e-4) {  // relative tolerance on mu (log scale)
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = rateAt(std::exp(x2)).rate;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = rateAt(std::exp(x1)).rate;
        }
    }
    opt.mu = std::exp(0.5 * (lo + hi));
    opt.point = rateAt(opt.mu);
    opt.rate = opt.point.rate;
    opt.found = opt.rate > 0.0;
    if (!opt.found) opt.mu = 0.0;
    return opt;
}

DecoyEstimate decoyEstimate(const std::vector<std::pair<double, double>>& gains, int nCut,
                            bool zeroTailAssumption) {
    if (nCut < 0 || nCut > 3) throw ConfigError("decoy cutoff must be in 0..3");
    std::set<double> distinct;
    double muMin = 1.0;
    for (const auto& [mu, q] : gains) {
        if (mu <= 0.0 || q < 0.0 || q > 1.0) throw ConfigError("invalid decoy gain entry");
        distinct.insert(mu);
        muMin = std::min(muMin, mu);
    }
    if (static_cast<int>(distinct.size()) < nCut + 1)
        throw ConfigError("need at least nCut+1 distinct intensities");
    if (muMin > 0.01) throw ConfigError("decoy estimation needs a near-vacuum intensity");

    const int m = nCut + 1;
    DecoyEstimate est;

    // Half-space constraints c . y <= b over y = (Y_0..Y_nCut).
    std::vector<Eigen::VectorXd> cs;
    std::vector<double> bs;
    for (int n = 0; n < m; ++n) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
        e[n] = 1.0;
        cs.push_back(e);
        bs.push_back(1.0);
        cs.push_back(-e);
        bs.push_back(0.0);
    }
    for (const auto& [mu, q] : gains) {
        Eigen::VectorXd row(m);
        double below = 0.0;
        for (int n = 0; n < m; ++n) {
            row[n] = channel::poissonPmf(mu, n);
            below += row[n];
        }
        const double tailMass = zeroTailAssumption ? 0.0 : std::max(0.0, 1.0 - below);
        est.residualBound.push_back(tailMass);
        cs.push_back(row);
        bs.push_back(q);  // residual >= 0
        cs.push_back(-row);
        bs.push_back(tailMass - q);  // residual <= tail mass
    }

    const int nc = static_cast<int>(cs.size());
    est.lower.assign(m, 1.0);
    est.upper.assign(m, 0.0);
    bool feasible = false;
    constexpr double kTol = 1e-9;

    std::vector<int> pick(m);
    const auto tryVertex = [&](const std::vector<int>& idx) {
        Eigen::MatrixXd a(m, m);
        Eigen::VectorXd b(m);
        for (int i = 0; i < m; ++i) {
            a.row(i) = cs[idx[i]].transpose();
            b[i] = bs[idx[i]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible()) return;
        const Eigen::VectorXd y = lu.solve(b);
        for (int i = 0; i < nc; ++i)
            if (cs[i].dot(y) > bs[i] + kTol) return;
        feasible = true;
        for (int n = 0; n < m; ++n) {
            est.lower[n] = std::min(est.lower[n], y[n]);
            est.upper[n] = std::max(est.upper[n], y[n]);
        }
    };

    // enumerate all m-subsets of constraint hyperplanes
    const std::function<void(int, int)> recurse = [&](int start, int depth) {
        if (depth == m) {
            tryVertex(pick);
            return;
        }
        for (int i = start; i < nc; ++i) {
            pick[depth] = i;
            recurse(i + 1, depth + 1);
        }
    };
    recurse(0, 0);

    if (!feasible) throw EstimationError("observed gains admit no consistent yield vector");
    for (int n = 0; n < m; ++n) {
        // widen by the feasibility tolerance so the interval stays an outer
        // bound even when an extreme vertex was rejected by rounding
        est.lower[n] = std::clamp(est.lower[n] - kTol, 0.0, 1.0);
        est.upper[n] = std::clamp(est.upper[n] + kTol, 0.0, 1.0);
    }
    return est;
}

RandomizationDeviation discreteRandDeviation(int k, double mu, int D, double qMu) {
    if (D < 2 || k < 0 || k >= D) throw ConfigError("need D >= 2 and 0 <= k < D");
    if (mu <= 0.0 || qMu <= 0.0) throw ConfigError("need positive intensity and gain");
    const double logFallingFactorial =
        std::lgamma(static_cast<double>(D + k) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0);
    RandomizationDeviation dev;
    dev.yieldBound = std::exp(0.5 * (D * std::log(mu) - logFallingFactorial));
    dev.fractionBound =
        std::exp((0.5 * D + k) * std::log(mu) - mu - 0.5 * logFallingFactorial) / qMu;
    return dev;
}

std::vector<std::pair<int, double>> firstOrderFractionInaccuracy(double mu, double eta) {
    std::vector<std::pair<int, double>> rows;
    for (int D = 8; D <= 16; D += 2) {
        const double qMu = eta * mu;           // first-order gain
        const double q1 = std::exp(-mu);       // first-order single-photon fraction
        const auto dev = discreteRandDeviation(1, mu, D, qMu);
        rows.emplace_back(D, dev.fractionBound / q1);
    }
    return rows;
}

}  // namespace pmqkd::keyrate
