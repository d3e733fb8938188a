#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "pmqkd/galois.hpp"

namespace pmqkd::encoding {

using Cplx = std::complex<double>;

/// Single optical mode truncated at nMax photons; tail is the probability
/// mass beyond the cutoff.
struct ModeKet {
    Eigen::VectorXcd amps;
    double tail = 0.0;
};

/// Two joint optical modes with a total photon-number cutoff: amplitudes are
/// indexed by (nA, nB) with nA + nB <= nMax, packed shell by shell.
class FockState {
public:
    FockState(int nMax, Eigen::VectorXcd amps, double tail);

    static long dim(int nMax) { return static_cast<long>(nMax + 1) * (nMax + 2) / 2; }
    static long index(int nA, int nB) {
        const long shell = nA + nB;
        return shell * (shell + 1) / 2 + nB;
    }

    int nMax() const { return nMax_; }
    double tail() const { return tail_; }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    Cplx amp(int nA, int nB) const { return amps_[index(nA, nB)]; }

private:
    int nMax_;
    Eigen::VectorXcd amps_;
    double tail_;
};

using FockEnsemble = std::vector<std::pair<double, FockState>>;

/// Coherent state amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!); throws
/// TruncationError when the reported tail exceeds 1e-6.
ModeKet coherentKet(Cplx alpha, int nMax);

/// Diagonal of the encoding rotation on photon number: entries e^{i 2 pi n / d}.
Eigen::VectorXcd rotationPhases(int d, int nMax);

/// Joint state |a> (x) |b| with the total-photon cutoff applied.
FockState productState(const ModeKet& a, const ModeKet& b, int nMax);

/// k-photon symmetric state (a^dag + e^{i delta} b^dag)^k / sqrt(2^k k!) |00>.
FockState kPhotonSymmetric(int k, double delta, int nMax);

/// k-th mixture component of D-slice discrete phase randomization at total
/// intensity mu: a superposition of the (nD+k)-photon symmetric states with
/// Poissonian weights.
FockState pseudoFock(int k, double delta, double mu, int D, int nMax);

/// State of qudit A' (x) qudit B' (x) two truncated modes after the
/// controlled-rotation encoding circuit with both ancillas prepared in |+>.
class JointEncodedState {
public:
    JointEncodedState(int d, int nMax, Eigen::VectorXcd amps, double tail);

    int d() const { return d_; }
    int nMax() const { return nMax_; }
    double tail() const { return tail_; }
    long fockDim() const { return FockState::dim(nMax_); }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    long index(int j, int k, long fockIndex) const {
        return (static_cast<long>(j) * d_ + k) * fockDim() + fockIndex;
    }

    /// Reduced density matrix of the two ancilla qudits (d^2 x d^2).
    Eigen::MatrixXcd ancillaDensity() const;

private:
    int d_;
    int nMax_;
    Eigen::VectorXcd amps_;
    double tail_;
};

JointEncodedState entangledEncode(const FockState& input, const galois::FieldPtr& field);

/// Measures both ancillas in the basis complementary to the computational
/// one and returns the distribution of the mod-d sum of the outcome labels.
/// Labels follow the key-correlation convention (conjugate Fourier kernel),
/// under which an l-symmetric input gives outcome sum l.
std::vector<double> xCorrelation(const JointEncodedState& state);
std::vector<double> xCorrelation(const FockEnsemble& ensemble, const galois::FieldPtr& field);

Eigen::MatrixXcd densityMatrix(const FockEnsemble& ensemble);
double traceDistance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace pmqkd::encoding
