#include "pmqkd/encoding.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "pmqkd/errors.hpp"

namespace pmqkd::encoding {

namespace {

constexpr double kCoherentTailBound = 1e-6;
constexpr double kPseudoFockTailBound = 1e-10;

double logFactorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

FockState::FockState(int nMax, Eigen::VectorXcd amps, double tail)
    : nMax_(nMax), amps_(std::move(amps)), tail_(tail) {
    if (nMax_ < 1) throw ConfigError("Fock cutoff must be >= 1");
    if (amps_.size() != dim(nMax_)) throw ConfigError("Fock amplitude count mismatch");
}

ModeKet coherentKet(Cplx alpha, int nMax) {
    Eigen::VectorXcd amps(nMax + 1);
    amps[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= nMax; ++n) amps[n] = amps[n - 1] * alpha / std::sqrt(double(n));
    const double tail = std::max(0.0, 1.0 - amps.squaredNorm());
    if (tail > kCoherentTailBound)
        throw TruncationError("coherent state tail " + std::to_string(tail) +
                              " exceeds bound; raise the cutoff or lower |alpha|^2");
    return ModeKet{std::move(amps), tail};
}

Eigen::VectorXcd rotationPhases(int d, int nMax) {
    Eigen::VectorXcd ph(nMax + 1);
    for (int n = 0; n <= nMax; ++n) {
        const double ang = 2.0 * std::numbers::pi * n / d;
        ph[n] = Cplx{std::cos(ang), std::sin(ang)};
    }
    return ph;
}

FockState productState(const ModeKet& a, const ModeKet& b, int nMax) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(FockState::dim(nMax));
    const int aMax = static_cast<int>(a.amps.size()) - 1;
    const int bMax = static_cast<int>(b.amps.size()) - 1;
    for (int nA = 0; nA <= std::min(nMax, aMax); ++nA)
        for (int nB = 0; nB <= std::min(nMax - nA, bMax); ++nB)
            amps[FockState::index(nA, nB)] = a.amps[nA] * b.amps[nB];
    const double tail = std::max(0.0, 1.0 - amps.squaredNorm());
    return FockState(nMax, std::move(amps), tail);
}

FockState kPhotonSymmetric(int k, double delta, int nMax) {
    if (k > nMax) throw ConfigError("photon number k exceeds the cutoff");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(FockState::dim(nMax));
    for (int nB = 0; nB <= k; ++nB) {
        // sqrt(binom(k, nB) / 2^k) e^{i delta nB} on |k-nB, nB>
        const double mag = std::exp(
            0.5 * (logFactorial(k) - logFactorial(nB) - logFactorial(k - nB)) -
            0.5 * k * std::numbers::ln2);
        const double ang = delta * nB;
        amps[FockState::index(k - nB, nB)] = mag * Cplx{std::cos(ang), std::sin(ang)};
    }
    return FockState(nMax, std::move(amps), 0.0);
}

FockState pseudoFock(int k, double delta, double mu, int D, int nMax) {
    if (D < 2) throw ConfigError("phase slice count D must be >= 2");
    if (k >= D) throw ConfigError("pseudo-Fock index k must be below D");
    if (mu <= 0.0) throw ConfigError("intensity must be positive");

    // weight of the k-th residue class: sum_n e^{-mu} mu^{nD+k} / (nD+k)!
    double classWeight = 0.0;
    for (int m = k; m <= std::max(nMax, 300); m += D) {
        const double term = std::exp(-mu + m * std::log(mu) - logFactorial(m));
        classWeight += term;
        if (m > mu && term < 1e-300) break;
    }

    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(FockState::dim(nMax));
    for (int m = k; m <= nMax; m += D) {
        const double coeff =
            std::exp(-0.5 * mu + 0.5 * m * std::log(mu) - 0.5 * logFactorial(m)) /
            std::sqrt(classWeight);
        const FockState shell = kPhotonSymmetric(m, delta, nMax);
        amps += coeff * shell.amplitudes();
    }
    const double tail = std::max(0.0, 1.0 - amps.squaredNorm());
    if (tail > kPseudoFockTailBound)
        throw TruncationError("pseudo-Fock truncation tail " + std::to_string(tail) +
                              " exceeds bound; raise the cutoff");
    return FockState(nMax, std::move(amps), tail);
}

JointEncodedState::JointEncodedState(int d, int nMax, Eigen::VectorXcd amps, double tail)
    : d_(d), nMax_(nMax), amps_(std::move(amps)), tail_(tail) {
    if (amps_.size() != static_cast<long>(d_) * d_ * fockDim())
        throw ConfigError("encoded state amplitude count mismatch");
}

Eigen::MatrixXcd JointEncodedState::ancillaDensity() const {
    const long dd = static_cast<long>(d_) * d_;
    const long fd = fockDim();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dd, dd);
    for (long r = 0; r < dd; ++r)
        for (long c = 0; c < dd; ++c) {
            Cplx acc{0.0, 0.0};
            for (long f = 0; f < fd; ++f) acc += amps_[r * fd + f] * std::conj(amps_[c * fd + f]);
            rho(r, c) = acc;
        }
    return rho;
}

JointEncodedState entangledEncode(const FockState& input, const galois::FieldPtr& field) {
    const int d = field->order();
    const int nMax = input.nMax();
    const long fd = FockState::dim(nMax);
    const auto omega = [&](long e) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(e % d) / d;
        return Cplx{std::cos(ang), std::sin(ang)};
    };

    Eigen::VectorXcd amps(static_cast<long>(d) * d * fd);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            const long base = (static_cast<long>(j) * d + k) * fd;
            for (int nA = 0; nA <= nMax; ++nA)
                for (int nB = 0; nB + nA <= nMax; ++nB) {
                    const long fi = FockState::index(nA, nB);
                    amps[base + fi] = input.amplitudes()[fi] *
                                      omega(static_cast<long>(j) * nA + static_cast<long>(k) * nB) /
                                      static_cast<double>(d);
                }
        }
    return JointEncodedState(d, nMax, std::move(amps), input.tail());
}

std::vector<double> xCorrelation(const JointEncodedState& state) {
    const int d = state.d();
    const long fd = state.fockDim();
    const auto omegaBar = [&](long e) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(e % d) / d;
        return Cplx{std::cos(ang), std::sin(ang)};
    };

    std::vector<double> dist(d, 0.0);
    for (int la = 0; la < d; ++la)
        for (int lb = 0; lb < d; ++lb) {
            double prob = 0.0;
            for (long f = 0; f < fd; ++f) {
                Cplx acc{0.0, 0.0};
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        acc += omegaBar(static_cast<long>(la) * j + static_cast<long>(lb) * k) *
                               state.amplitudes()[state.index(j, k, f)];
                prob += std::norm(acc) / (static_cast<double>(d) * d);
            }
            dist[(la + lb) % d] += prob;
        }
    return dist;
}

std::vector<double> xCorrelation(const FockEnsemble& ensemble, const galois::FieldPtr& field) {
    std::vector<double> dist(field->order(), 0.0);
    for (const auto& [w, state] : ensemble) {
        const auto part = xCorrelation(entangledEncode(state, field));
        for (size_t i = 0; i < dist.size(); ++i) dist[i] += w * part[i];
    }
    return dist;
}

Eigen::MatrixXcd densityMatrix(const FockEnsemble& ensemble) {
    const long dim = ensemble.at(0).second.amplitudes().size();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [w, state] : ensemble)
        rho += w * (state.amplitudes() * state.amplitudes().adjoint());
    return rho;
}

double traceDistance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a - b);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace pmqkd::encoding
