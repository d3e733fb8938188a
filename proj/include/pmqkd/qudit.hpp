#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "pmqkd/galois.hpp"

namespace pmqkd::qudit {

using Cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Basis index convention for N qudits over GF(d): a string z = (z_0..z_{N-1})
// maps to index z_0 d^{N-1} + ... + z_{N-1}, i.e. qudit 0 is the most
// significant position and the left factor of tensor products.

long dimPow(int d, int nQudits);
std::vector<int> indexToString(long index, int d, int nQudits);
long stringToIndex(const std::vector<int>& digits, int d);

/// Normalized pure state of N qudits (norm checked to 1e-10).
class StateVector {
public:
    StateVector(galois::FieldPtr field, int nQudits, Vec amplitudes);

    const galois::FieldPtr& field() const { return field_; }
    int nQudits() const { return n_; }
    long dim() const { return amps_.size(); }
    const Vec& amplitudes() const { return amps_; }

private:
    galois::FieldPtr field_;
    int n_;
    Vec amps_;
};

/// Weighted mixture of pure states (weights sum to 1).
using Ensemble = std::vector<std::pair<double, StateVector>>;

/// Dense operator on N qudits.
class Operator {
public:
    Operator(galois::FieldPtr field, int nQudits, Mat matrix);

    const galois::FieldPtr& field() const { return field_; }
    int nQudits() const { return n_; }
    long dim() const { return mat_.rows(); }
    const Mat& matrix() const { return mat_; }

private:
    galois::FieldPtr field_;
    int n_;
    Mat mat_;
};

/// d-outcome projective measurement given by Kraus projectors labeled 0..d-1.
struct MeasurementChannel {
    std::vector<Operator> projectors;

    /// Worst deviation from Hermitian/idempotent/mutually-orthogonal/complete.
    double validationDeviation() const;
    void validate(double tol = 1e-10) const;
};

enum class Basis { Z, X };

// Single-qudit generalized Paulis. Z = sum_l gamma^l |l><l|;
// X = sum_l |l (+) 1><l| with (+) the canonical field addition.
Operator pauliZ(const galois::FieldPtr& field);
Operator pauliX(const galois::FieldPtr& field);

/// X-eigenbasis ket |l~> = d^{-1/2} sum_j gamma^{-(l*j)} |j>, X|l~> = gamma^l |l~>.
StateVector mubKet(const galois::Fe& l);

/// Heisenberg-Weyl operator W(u,v) = sum_l |l+u> gamma^{l*v} <l|.
Operator weyl(const galois::Fe& u, const galois::Fe& v);

/// Two-qudit Bell state d^{-1/2} sum_l gamma^{l*v} |l> (x) |l+u>.
StateVector bellState(const galois::Fe& u, const galois::Fe& v);

/// Projector onto { |z> : z . v = l } in the chosen basis.
Operator parityProjector(const galois::Fe& l, const galois::DitString& v, Basis basis);

/// The d projectors {P_l(v)} as a measurement channel.
MeasurementChannel parityChannel(const galois::DitString& v, Basis basis);

std::vector<double> measureStats(const MeasurementChannel& channel, const StateVector& state);
std::vector<double> measureStats(const MeasurementChannel& channel, const Ensemble& ensemble);
/// Density-matrix route; must agree with the ensemble route.
std::vector<double> measureStatsDensity(const MeasurementChannel& channel, const Mat& rho);

Mat densityMatrix(const Ensemble& ensemble);

// Fast O(d^N)-ish paths used by the exhaustive verification scans.
// zParityStats: outcome distribution of the Z-parity measurement along a.
// zDiagonalAfterXParity: Z-basis diagonal of the state after the X-parity
// channel along b has been applied (the only quantity the Z statistics of
// any later Z-parity measurement depend on).
std::vector<double> zParityStats(const StateVector& state, const galois::DitString& a);
std::vector<double> zDiagonalAfterXParity(const StateVector& state, const galois::DitString& b);
std::vector<double> zParityStatsFromDiagonal(const std::vector<double>& diag,
                                             const galois::DitString& a);

/// max_l | stats_l(M_Z(a) after M_X(b)) - stats_l(M_Z(a)) | on a pure state.
double verifyCommuting(const galois::DitString& a, const galois::DitString& b,
                       const StateVector& state);

/// Exhaustive character-sum check; returns the worst absolute deviation of the
/// normalized sums from their closed forms over all admissible (a, x, l).
double verifyLemmaSums(const galois::FieldPtr& field, int nDigits, int variant);

StateVector randomState(const galois::FieldPtr& field, int nQudits, std::uint64_t seed);

}  // namespace pmqkd::qudit
