#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pmqkd::verify {

struct CheckResult {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

CheckResult makeResult(std::string name, double deviation, double tolerance);
bool allPass(const std::vector<CheckResult>& results);

/// Field axioms (exhaustive for every supported order <= 16), exponent
/// compatibility, coset partitions, weight totals.
std::vector<CheckResult> galoisSuite();

/// Commuting-argument scan over every orthogonal string pair with d^N up to
/// maxDim for d in {2,3,4,5}, Lemma sum enumerations, parity-channel
/// invariants, Weyl/Bell identities, ensemble-vs-density agreement.
std::vector<CheckResult> quditSuite(std::uint64_t seed = 7, int statesPerPair = 100,
                                    long maxDim = 256, bool parallel = true);

/// Symmetric-encoding point-mass correlations across (k, d, delta), pseudo-
/// Fock symmetry, continuous-randomization decomposition, rotation algebra.
std::vector<CheckResult> encodingSuite();

/// Serial reference for the heavy commuting scan (same numbers, no OpenMP).
double commutingScanWorstDeviation(std::uint64_t seed, int statesPerPair, long maxDim,
                                   bool parallel);

}  // namespace pmqkd::verify
