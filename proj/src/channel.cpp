#include "pmqkd/channel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pmqkd::channel {

namespace {

bool isPrime(int p) {
    if (p < 2) return false;
    for (int q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

// Gauss-Legendre nodes and weights on [-1, 1] via the Jacobi-matrix
// eigenproblem (Golub-Welsch).
void gaussLegendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    if (n == 1) {
        w[0] = 2.0;
        return;
    }
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k - 1, k) = b;
        jacobi(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()[i];
        const double v = es.eigenvectors()(0, i);
        w[i] = 2.0 * v * v;
    }
}

double entropyBits(const std::vector<double>& v) {
    double h = 0.0;
    for (double p : v)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

}  // namespace

void ChannelParams::validate() const {
    if (attenuationDbPerKm < 0.0) throw ConfigError("fiber attenuation must be >= 0");
    if (distanceKm < 0.0) throw ConfigError("distance must be >= 0");
    if (detectorEfficiency < 0.0 || detectorEfficiency > 1.0)
        throw ConfigError("detector efficiency must be in [0, 1]");
    if (darkCountRate < 0.0 || darkCountRate >= 1.0)
        throw ConfigError("dark count rate must be in [0, 1)");
}

double ChannelParams::armTransmittance() const {
    return detectorEfficiency * std::pow(10.0, -attenuationDbPerKm * (distanceKm / 2.0) / 10.0);
}

double ChannelParams::channelTransmittance() const {
    return std::pow(10.0, -attenuationDbPerKm * distanceKm / 10.0);
}

void ProtocolParams::validate() const {
    if (!isPrime(dimension)) throw ConfigError("protocol dimension must be prime");
    if (phaseSlices < dimension) throw ConfigError("phase slice count D must be >= d");
    if (dimension < 10 && phaseSlices % dimension != 0)
        throw ConfigError("D must be a multiple of d for d < 10");
    if (intensity <= 0.0) throw ConfigError("intensity must be positive");
    if (ecEfficiency <= 0.0 || ecEfficiency > 1.0)
        throw ConfigError("error correction efficiency must be in (0, 1]");
}

MisalignmentModel::MisalignmentModel(double delta0, double phiLim, FluctuationMode mode,
                                     int quadratureNodes)
    : delta0_(delta0), phiLim_(phiLim), mode_(mode), quadNodes_(quadratureNodes) {
    if (phiLim_ < 0.0) throw ConfigError("fluctuation half-width must be >= 0");
    if (quadNodes_ < 1) throw ConfigError("quadrature node count must be >= 1");

    if (phiLim_ == 0.0) {
        nodes_.push_back({delta0_, 1.0});
    } else if (mode_ == FluctuationMode::SingleUniform) {
        std::vector<double> x, w;
        gaussLegendre(quadNodes_, x, w);
        for (int i = 0; i < quadNodes_; ++i)
            nodes_.push_back({delta0_ + phiLim_ * x[i], 0.5 * w[i]});
    } else {
        // difference of two independent uniforms: triangular density
        // (2 phi - |t|) / (4 phi^2) on [-2 phi, 2 phi], one panel per sign
        std::vector<double> x, w;
        gaussLegendre(quadNodes_, x, w);
        for (int panel = 0; panel < 2; ++panel) {
            const double lo = (panel == 0) ? -2.0 * phiLim_ : 0.0;
            const double hi = (panel == 0) ? 0.0 : 2.0 * phiLim_;
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (int i = 0; i < quadNodes_; ++i) {
                const double t = mid + half * x[i];
                const double density = (2.0 * phiLim_ - std::abs(t)) / (4.0 * phiLim_ * phiLim_);
                nodes_.push_back({delta0_ + t, half * w[i] * density});
            }
        }
    }

    double sum = 0.0;
    for (const auto& n : nodes_) sum += n.weight;
    if (std::abs(sum - 1.0) > 1e-12)
        throw NumericGuardError("misalignment quadrature weights sum to " + std::to_string(sum));
}

double MisalignmentModel::sampleDelta(double u1, double u2) const {
    if (phiLim_ == 0.0) return delta0_;
    if (mode_ == FluctuationMode::SingleUniform) return delta0_ + (2.0 * u1 - 1.0) * phiLim_;
    return delta0_ + (2.0 * u1 - 1.0) * phiLim_ - (2.0 * u2 - 1.0) * phiLim_;
}

std::pair<double, double> clickProbs(double mu, double psi, const ChannelParams& ch) {
    const double eta = ch.armTransmittance();
    const double pd = ch.darkCountRate;
    const double c = std::cos(0.5 * psi), s = std::sin(0.5 * psi);
    const double pL = 1.0 - (1.0 - pd) * std::exp(-eta * mu * c * c);
    const double pR = 1.0 - (1.0 - pd) * std::exp(-eta * mu * s * s);
    return {pL, pR};
}

double singleClickProb(double mu, double phi, double delta, const ChannelParams& ch,
                       Detector det) {
    const auto [pL, pR] = clickProbs(mu, phi + delta, ch);
    return det == Detector::L ? pL * (1.0 - pR) : pR * (1.0 - pL);
}

double gainAtDelta(const ProtocolParams& proto, const ChannelParams& ch, double delta,
                   Detector det) {
    const int d = proto.dimension;
    double q = 0.0;
    for (int k = 0; k < d; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / d;
        q += singleClickProb(proto.intensity, phi, delta, ch, det);
    }
    return q / d;
}

double gain(const ProtocolParams& proto, const ChannelParams& ch, const MisalignmentModel& model,
            Detector det) {
    double q = 0.0;
    for (const auto& node : model.nodes()) q += node.weight * gainAtDelta(proto, ch, node.delta, det);
    return q;
}

std::vector<double> bitErrorVector(const ProtocolParams& proto, const ChannelParams& ch,
                                   const MisalignmentModel& model, Detector det) {
    const int d = proto.dimension;
    std::vector<double> raw(d, 0.0);
    for (const auto& node : model.nodes())
        for (int k = 0; k < d; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / d;
            raw[k] += node.weight * singleClickProb(proto.intensity, phi, node.delta, ch, det) / d;
        }
    double total = 0.0;
    for (double v : raw) total += v;
    if (total <= 0.0) throw ConfigError("bit-error vector undefined at zero gain");

    const int shift = det == Detector::R ? d / 2 : 0;
    std::vector<double> out(d);
    for (int k = 0; k < d; ++k) out[k] = raw[(k + shift) % d] / total;
    return out;
}

double nPhotonYield(int n, const ProtocolParams& proto, const ChannelParams& ch,
                    const MisalignmentModel& model, Detector det) {
    const int d = proto.dimension;
    const double eta = ch.armTransmittance();
    const double pd = ch.darkCountRate;
    double y = 0.0;
    for (const auto& node : model.nodes()) {
        double yDelta = 0.0;
        for (int k = 0; k < d; ++k) {
            const double psi = 2.0 * std::numbers::pi * k / d + node.delta;
            const double c = std::cos(0.5 * psi), s = std::sin(0.5 * psi);
            // fraction of the n photons aimed at the opposite detector
            const double other = det == Detector::L ? s * s : c * c;
            const double p = (1.0 - pd) * std::pow(1.0 - eta * other, n) -
                             (1.0 - pd) * (1.0 - pd) * std::pow(1.0 - eta, n);
            yDelta += std::max(0.0, p);
        }
        y += node.weight * yDelta / d;
    }
    return y;
}

double poissonPmf(double mu, int n) {
    return std::exp(-mu + n * std::log(mu) - std::lgamma(static_cast<double>(n) + 1.0));
}

std::pair<std::vector<double>, double> photonFractions(const ProtocolParams& proto,
                                                       const ChannelParams& ch,
                                                       const MisalignmentModel& model,
                                                       Detector det, int nMaxPhotons) {
    const double q = gain(proto, ch, model, det);
    if (q <= 0.0) throw ConfigError("photon fractions undefined at zero gain");
    std::vector<double> fractions(nMaxPhotons + 1, 0.0);
    double sum = 0.0;
    for (int n = 0; n <= nMaxPhotons; ++n) {
        fractions[n] = poissonPmf(proto.intensity, n) * nPhotonYield(n, proto, ch, model, det) / q;
        sum += fractions[n];
    }
    return {fractions, std::max(0.0, 1.0 - sum)};
}

std::vector<double> pessimisticPhaseVector(const std::vector<double>& folded,
                                           double residualTail) {
    // the adversary gets the unassigned mass wherever it leaks most
    std::vector<double> best = folded;
    double bestH = -1.0;
    for (size_t i = 0; i < folded.size(); ++i) {
        std::vector<double> cand = folded;
        cand[i] += residualTail;
        const double h = entropyBits(cand);
        if (h > bestH) {
            bestH = h;
            best = std::move(cand);
        }
    }
    return best;
}

std::vector<double> phaseErrorVector(const ProtocolParams& proto, const ChannelParams& ch,
                                     const MisalignmentModel& model, Detector det,
                                     int nMaxPhotons, double tailBound) {
    const auto [fractions, tail] = photonFractions(proto, ch, model, det, nMaxPhotons);
    if (tail > tailBound)
        throw TruncationError("photon-number residual " + std::to_string(tail) +
                              " exceeds bound; raise the photon cutoff");
    const int d = proto.dimension;
    std::vector<double> folded(d, 0.0);
    for (int n = 0; n <= nMaxPhotons; ++n) folded[n % d] += fractions[n];
    return pessimisticPhaseVector(folded, tail);
}

DetectionStats evaluate(const ProtocolParams& proto, const ChannelParams& ch,
                        const MisalignmentModel& model, Detector det, int nMaxPhotons) {
    proto.validate();
    ch.validate();
    const int d = proto.dimension;
    const double mu = proto.intensity;
    const double eta = ch.armTransmittance();
    const double pd = ch.darkCountRate;

    DetectionStats st;
    st.bitError.assign(d, 0.0);
    st.yields.assign(nMaxPhotons + 1, 0.0);
    st.fractions.assign(nMaxPhotons + 1, 0.0);
    st.phaseError.assign(d, 0.0);

    std::vector<double> raw(d, 0.0);
    const double bothSilentBase = (1.0 - pd) * (1.0 - pd);
    for (const auto& node : model.nodes()) {
        for (int k = 0; k < d; ++k) {
            const double psi = 2.0 * std::numbers::pi * k / d + node.delta;
            const double c = std::cos(0.5 * psi), s = std::sin(0.5 * psi);
            const double toward = det == Detector::L ? c * c : s * s;
            const double other = 1.0 - toward;

            const double fire = 1.0 - (1.0 - pd) * std::exp(-eta * mu * toward);
            const double silent = (1.0 - pd) * std::exp(-eta * mu * other);
            raw[k] += node.weight * fire * silent / d;

            // powers of (1 - eta*other) and (1 - eta) for the n-photon yields
            double pow1 = 1.0, pow2 = 1.0;
            const double base1 = 1.0 - eta * other, base2 = 1.0 - eta;
            for (int n = 0; n <= nMaxPhotons; ++n) {
                double p = (1.0 - pd) * pow1 - bothSilentBase * pow2;
                if (p < 0.0) {
                    p = 0.0;
                    ++st.clampCount;
                }
                st.yields[n] += node.weight * p / d;
                pow1 *= base1;
                pow2 *= base2;
            }
        }
    }

    for (double v : raw) st.gain += v;
    if (st.gain > 0.0) {
        const int shift = det == Detector::R ? d / 2 : 0;
        for (int k = 0; k < d; ++k) st.bitError[k] = raw[(k + shift) % d] / st.gain;
        double sum = 0.0;
        for (int n = 0; n <= nMaxPhotons; ++n) {
            st.fractions[n] = poissonPmf(mu, n) * st.yields[n] / st.gain;
            sum += st.fractions[n];
            st.phaseError[n % d] += st.fractions[n];
        }
        st.residualTail = std::max(0.0, 1.0 - sum);
    }
    return st;
}

}  // namespace pmqkd::channel
