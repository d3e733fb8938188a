#pragma once

#include <utility>
#include <vector>

#include "pmqkd/errors.hpp"

namespace pmqkd::channel {

/// Fiber and detector parameters. The untrusted measurement node sits midway,
/// so each arm spans half the total distance.
struct ChannelParams {
    double attenuationDbPerKm = 0.2;
    double distanceKm = 0.0;  // total Alice-to-Bob distance
    double detectorEfficiency = 0.2;
    double darkCountRate = 1e-8;  // per detector per round

    void validate() const;
    /// eta = eta_d * 10^{-alpha (L/2) / 10}
    double armTransmittance() const;
    /// 10^{-alpha L / 10}; detector efficiency excluded (used for the PLOB benchmark)
    double channelTransmittance() const;
};

struct ProtocolParams {
    int dimension = 2;     // prime d
    int phaseSlices = 16;  // D >= d, and a multiple of d when d < 10
    double intensity = 0.1;  // mu: mean total photon number per pulse pair
    double ecEfficiency = 0.95;

    void validate() const;
    double siftingFactor() const { return static_cast<double>(dimension) / phaseSlices; }
};

enum class FluctuationMode {
    SingleUniform,       // one uniform draw on [-phi_lim, phi_lim] added to the difference
    IndependentPerParty  // independent uniform draws per party; difference is triangular
};

/// Fixed reference misalignment delta0 plus per-round phase fluctuation.
/// Expectations over the fluctuation use Gauss-Legendre quadrature; the node
/// weights sum to one.
class MisalignmentModel {
public:
    explicit MisalignmentModel(double delta0, double phiLim = 0.0,
                               FluctuationMode mode = FluctuationMode::IndependentPerParty,
                               int quadratureNodes = 65);

    struct Node {
        double delta;
        double weight;
    };

    double delta0() const { return delta0_; }
    double phiLim() const { return phiLim_; }
    FluctuationMode mode() const { return mode_; }
    int quadratureNodes() const { return quadNodes_; }
    const std::vector<Node>& nodes() const { return nodes_; }

    /// Draws one per-round misalignment from two uniforms in [0, 1).
    double sampleDelta(double u1, double u2) const;

private:
    double delta0_;
    double phiLim_;
    FluctuationMode mode_;
    int quadNodes_;
    std::vector<Node> nodes_;
};

enum class Detector { L, R };

/// Everything the key-rate formula needs for one detector group.
struct DetectionStats {
    double gain = 0.0;
    std::vector<double> bitError;   // length d, sums to 1
    std::vector<double> yields;     // Y_0 .. Y_nMax
    std::vector<double> fractions;  // q_0 .. q_nMax
    std::vector<double> phaseError; // length d, folded fractions, tail unassigned
    double residualTail = 0.0;      // fractions plus this sum to 1
    long clampCount = 0;            // negative intermediate probabilities clamped to 0
};

/// Detector click probabilities for total phase difference psi:
/// P_L = 1-(1-p_d)exp(-eta mu cos^2(psi/2)), P_R with sin^2.
std::pair<double, double> clickProbs(double mu, double psi, const ChannelParams& ch);

/// Probability that only the given detector fires at encoding phase phi and
/// misalignment delta.
double singleClickProb(double mu, double phi, double delta, const ChannelParams& ch, Detector det);

double gainAtDelta(const ProtocolParams& proto, const ChannelParams& ch, double delta,
                   Detector det);
double gain(const ProtocolParams& proto, const ChannelParams& ch, const MisalignmentModel& model,
            Detector det);

/// Posterior over the encoding difference given a single click in the group.
/// The R group is re-indexed by floor(d/2) so its dominant entry sits at 0
/// after the deterministic opposite-phase relabeling.
std::vector<double> bitErrorVector(const ProtocolParams& proto, const ChannelParams& ch,
                                   const MisalignmentModel& model, Detector det);

/// Yield of n-photon pulse pairs for the group. A single L click requires the
/// R detector silent: P_n(L) = (1-p_d)(1-eta sin^2(psi/2))^n - (1-p_d)^2 (1-eta)^n,
/// and symmetrically for R; this keeps gain == sum_n P_mu(n) Y_n exact.
double nPhotonYield(int n, const ProtocolParams& proto, const ChannelParams& ch,
                    const MisalignmentModel& model, Detector det);

/// q_n = P_mu(n) Y_n / Q plus the unassigned residual.
std::pair<std::vector<double>, double> photonFractions(const ProtocolParams& proto,
                                                       const ChannelParams& ch,
                                                       const MisalignmentModel& model,
                                                       Detector det, int nMaxPhotons);

/// Photon fractions folded mod d with the residual tail assigned to whichever
/// entry maximizes the Shannon entropy (keeps the key rate a lower bound).
/// Throws TruncationError when the tail exceeds tailBound.
std::vector<double> phaseErrorVector(const ProtocolParams& proto, const ChannelParams& ch,
                                     const MisalignmentModel& model, Detector det,
                                     int nMaxPhotons = 10, double tailBound = 1e-6);

std::vector<double> pessimisticPhaseVector(const std::vector<double>& folded, double residualTail);

/// Single-pass evaluation of all statistics for one group; agrees with the
/// operation-by-operation route above.
DetectionStats evaluate(const ProtocolParams& proto, const ChannelParams& ch,
                        const MisalignmentModel& model, Detector det, int nMaxPhotons = 10);

double poissonPmf(double mu, int n);

}  // namespace pmqkd::channel
