#include "pmqkd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "pmqkd/encoding.hpp"
#include "pmqkd/channel.hpp"
#include "pmqkd/galois.hpp"
#include "pmqkd/qudit.hpp"

namespace pmqkd::verify {

using galois::DitString;
using galois::FieldPtr;
using galois::FieldSpec;
using qudit::Cplx;

CheckResult makeResult(std::string name, double deviation, double tolerance) {
    CheckResult r;
    r.name = std::move(name);
    r.deviation = deviation;
    r.tolerance = tolerance;
    r.pass = deviation <= tolerance;
    return r;
}

bool allPass(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

namespace {

const std::vector<int> kSupportedOrdersUpTo16 = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16};

double fieldAxiomViolations(const FieldSpec& f) {
    const int d = f.order();
    long bad = 0;
    for (int a = 0; a < d; ++a) {
        if (f.addv(a, 0) != a || f.mulv(a, 1) != a) ++bad;               // identities
        if (f.addv(a, f.negv(a)) != 0) ++bad;                            // additive inverse
        if (a != 0 && f.mulv(a, f.invv(a)) != 1) ++bad;                  // multiplicative inverse
        for (int b = 0; b < d; ++b) {
            if (f.addv(a, b) != f.addv(b, a)) ++bad;
            if (f.mulv(a, b) != f.mulv(b, a)) ++bad;
            for (int c = 0; c < d; ++c) {
                if (f.addv(f.addv(a, b), c) != f.addv(a, f.addv(b, c))) ++bad;
                if (f.mulv(f.mulv(a, b), c) != f.mulv(a, f.mulv(b, c))) ++bad;
                if (f.mulv(a, f.addv(b, c)) != f.addv(f.mulv(a, b), f.mulv(a, c))) ++bad;
            }
        }
    }
    return static_cast<double>(bad);
}

double exponentCompatibilityDeviation(const FieldSpec& f) {
    double worst = 0.0;
    for (int a = 0; a < f.order(); ++a)
        for (int b = 0; b < f.order(); ++b)
            worst = std::max(worst, std::abs(f.gammaPow(a) * f.gammaPow(b) -
                                             f.gammaPow(f.addv(a, b))));
    return worst;
}

double cosetPartitionDeviation(const FieldPtr& field, int nDigits) {
    const FieldSpec& f = *field;
    const int d = f.order();
    const long dim = qudit::dimPow(d, nDigits);
    const long expected = dim / d;
    double worst = 0.0;
    for (long yi = 1; yi < dim; ++yi) {
        const auto y = qudit::indexToString(yi, d, nDigits);
        std::vector<long> sizes(d, 0);
        for (long xi = 0; xi < dim; ++xi) {
            int acc = 0;
            long rem = xi;
            for (int k = nDigits - 1; k >= 0; --k) {
                acc = f.addv(acc, f.mulv(static_cast<int>(rem % d), y[k]));
                rem /= d;
            }
            ++sizes[acc];
        }
        for (int l = 0; l < d; ++l)
            worst = std::max(worst, std::abs(static_cast<double>(sizes[l] - expected)));
    }
    return worst;
}

}  // namespace

std::vector<CheckResult> galoisSuite() {
    std::vector<CheckResult> out;

    double axioms = 0.0, expo = 0.0;
    for (int d : kSupportedOrdersUpTo16) {
        const auto f = FieldSpec::fromOrder(d);
        axioms += fieldAxiomViolations(*f);
        expo = std::max(expo, exponentCompatibilityDeviation(*f));
    }
    out.push_back(makeResult("galois/field-axioms-exhaustive-d<=16", axioms, 0.0));
    out.push_back(makeResult("galois/exponent-compatibility", expo, 1e-12));

    double coset = 0.0;
    const std::vector<std::pair<int, int>> cosetCases = {{2, 10}, {3, 5}, {4, 4}, {5, 3}, {7, 2}, {16, 2}};
    for (const auto& [d, n] : cosetCases)
        coset = std::max(coset, cosetPartitionDeviation(FieldSpec::fromOrder(d), n));
    out.push_back(makeResult("galois/coset-partition", coset, 0.0));

    double weightDev = 0.0;
    for (int d : {2, 5, 16}) {
        const auto f = FieldSpec::fromOrder(d);
        std::vector<int> digits;
        for (int k = 0; k < 37; ++k) digits.push_back((k * 7 + 3) % d);
        const auto w = galois::weight(DitString(f, digits));
        weightDev = std::max(weightDev, std::abs(static_cast<double>(w.total() - 37)));
    }
    out.push_back(makeResult("galois/weight-totals", weightDev, 0.0));
    return out;
}

namespace {

struct DimCase {
    FieldPtr field;
    int nDigits;
};

std::vector<DimCase> commutingCases(long maxDim) {
    std::vector<DimCase> cases;
    for (int d : {2, 3, 4, 5}) {
        const auto f = FieldSpec::fromOrder(d);
        for (int n = 1; qudit::dimPow(d, n) <= maxDim; ++n) cases.push_back({f, n});
    }
    return cases;
}

}  // namespace

double commutingScanWorstDeviation(std::uint64_t seed, int statesPerPair, long maxDim,
                                   bool parallel) {
    double worst = 0.0;
    for (const auto& [field, nDigits] : commutingCases(maxDim)) {
        const FieldSpec& f = *field;
        const int d = f.order();
        const long dim = qudit::dimPow(d, nDigits);

        std::vector<qudit::StateVector> states;
        states.reserve(statesPerPair);
        for (int s = 0; s < statesPerPair; ++s)
            states.push_back(qudit::randomState(field, nDigits,
                                                seed + 1000003ull * s + 17ull * dim));

        // Z-parity statistics of every string a on every untouched state.
        std::vector<std::vector<std::vector<double>>> before(dim);
        for (long ai = 0; ai < dim; ++ai) {
            const DitString a(field, qudit::indexToString(ai, d, nDigits));
            before[ai].reserve(states.size());
            for (const auto& st : states) before[ai].push_back(qudit::zParityStats(st, a));
        }

        double caseWorst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : caseWorst) if (parallel)
        for (long bi = 0; bi < dim; ++bi) {
            const DitString b(field, qudit::indexToString(bi, d, nDigits));
            for (size_t s = 0; s < states.size(); ++s) {
                const auto diagAfter = qudit::zDiagonalAfterXParity(states[s], b);
                for (long ai = 0; ai < dim; ++ai) {
                    const DitString a(field, qudit::indexToString(ai, d, nDigits));
                    if (galois::dot(a, b).value() != 0) continue;
                    const auto after = qudit::zParityStatsFromDiagonal(diagAfter, a);
                    for (int l = 0; l < d; ++l)
                        caseWorst = std::max(caseWorst, std::abs(after[l] - before[ai][s][l]));
                }
            }
        }
        worst = std::max(worst, caseWorst);
    }
    return worst;
}

std::vector<CheckResult> quditSuite(std::uint64_t seed, int statesPerPair, long maxDim,
                                    bool parallel) {
    std::vector<CheckResult> out;

    out.push_back(makeResult("qudit/commuting-orthogonal-pairs",
                             commutingScanWorstDeviation(seed, statesPerPair, maxDim, parallel),
                             1e-10));

    double lemma = 0.0;
    for (int variant : {1, 2, 3})
        for (int d : {2, 3, 4, 5})
            for (int n = 1; n <= 3; ++n)
                lemma = std::max(lemma, qudit::verifyLemmaSums(FieldSpec::fromOrder(d), n, variant));
    out.push_back(makeResult("qudit/lemma-sums-1-2-3", lemma, 1e-10));

    double channelDev = 0.0;
    for (int d : {2, 3, 4, 5}) {
        const auto f = FieldSpec::fromOrder(d);
        const int n = 2;
        for (long vi = 0; vi < qudit::dimPow(d, n); ++vi) {
            const DitString v(f, qudit::indexToString(vi, d, n));
            for (auto basis : {qudit::Basis::Z, qudit::Basis::X})
                channelDev = std::max(
                    channelDev, qudit::parityChannel(v, basis).validationDeviation());
        }
    }
    out.push_back(makeResult("qudit/parity-channel-invariants", channelDev, 1e-10));

    // applying two Z-parity channels in either order gives the same joint law
    double orderDev = 0.0;
    for (int d : {2, 3, 5}) {
        const auto f = FieldSpec::fromOrder(d);
        const int n = 2;
        const long dim = qudit::dimPow(d, n);
        for (int rep = 0; rep < 20; ++rep) {
            const auto st = qudit::randomState(f, n, seed + 31 * rep + d);
            const DitString v1(f, qudit::indexToString(1 + (rep % (dim - 1)), d, n));
            const DitString v2(f, qudit::indexToString(1 + ((rep * 7 + 3) % (dim - 1)), d, n));
            const auto ch1 = qudit::parityChannel(v1, qudit::Basis::Z);
            const auto ch2 = qudit::parityChannel(v2, qudit::Basis::Z);
            for (int l1 = 0; l1 < d; ++l1)
                for (int l2 = 0; l2 < d; ++l2) {
                    const qudit::Vec w1 = ch1.projectors[l1].matrix() * st.amplitudes();
                    const qudit::Vec w12 = ch2.projectors[l2].matrix() * w1;
                    const qudit::Vec w2 = ch2.projectors[l2].matrix() * st.amplitudes();
                    const qudit::Vec w21 = ch1.projectors[l1].matrix() * w2;
                    orderDev = std::max(orderDev,
                                        std::abs(w12.squaredNorm() - w21.squaredNorm()));
                }
        }
    }
    out.push_back(makeResult("qudit/same-basis-commutation", orderDev, 1e-10));

    double weylDev = 0.0, bellDev = 0.0;
    for (int d : {2, 3, 4, 5, 7, 8, 9}) {
        const auto f = FieldSpec::fromOrder(d);
        for (int u = 0; u < d; ++u)
            for (int v = 0; v < d; ++v) {
                const galois::Fe ue(u, f), ve(v, f);
                const auto wu = qudit::weyl(ue, galois::Fe(0, f)).matrix();
                const auto wv = qudit::weyl(galois::Fe(0, f), ve).matrix();
                const Cplx phase = f->gammaPow(f->negv(f->mulv(u, v)));
                weylDev = std::max(weylDev,
                                   (wu * wv - phase * wv * wu).cwiseAbs().maxCoeff());

                // (I (x) W(u,v)) |Phi_00> = |Phi_uv>
                const auto phi00 = qudit::bellState(galois::Fe(0, f), galois::Fe(0, f));
                const auto phiUv = qudit::bellState(ue, ve);
                const auto w = qudit::weyl(ue, ve).matrix();
                qudit::Vec lhs(static_cast<long>(d) * d);
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c) {
                        Cplx acc{0.0, 0.0};
                        for (int m = 0; m < d; ++m)
                            acc += w(c, m) * phi00.amplitudes()[static_cast<long>(r) * d + m];
                        lhs[static_cast<long>(r) * d + c] = acc;
                    }
                bellDev = std::max(bellDev, (lhs - phiUv.amplitudes()).cwiseAbs().maxCoeff());
            }
    }
    out.push_back(makeResult("qudit/weyl-commutation", weylDev, 1e-12));
    out.push_back(makeResult("qudit/bell-generation-identity", bellDev, 1e-12));

    double mixDev = 0.0;
    for (int d : {2, 3, 5}) {
        const auto f = FieldSpec::fromOrder(d);
        const int n = 2;
        qudit::Ensemble ens;
        for (int s = 0; s < 4; ++s)
            ens.push_back({0.25, qudit::randomState(f, n, seed + 97 * s + d)});
        const auto rho = qudit::densityMatrix(ens);
        for (long vi = 1; vi < qudit::dimPow(d, n); vi += 3) {
            const DitString v(f, qudit::indexToString(vi, d, n));
            for (auto basis : {qudit::Basis::Z, qudit::Basis::X}) {
                const auto ch = qudit::parityChannel(v, basis);
                const auto p1 = qudit::measureStats(ch, ens);
                const auto p2 = qudit::measureStatsDensity(ch, rho);
                for (int l = 0; l < d; ++l)
                    mixDev = std::max(mixDev, std::abs(p1[l] - p2[l]));
            }
        }
    }
    out.push_back(makeResult("qudit/ensemble-vs-density", mixDev, 1e-10));

    return out;
}

std::vector<CheckResult> encodingSuite() {
    std::vector<CheckResult> out;
    const int nMax = 12;
    const double pi = std::numbers::pi;

    // point-mass key correlation, independent of the relative phase
    double obsDev = 0.0;
    for (int d : {2, 3, 5, 7}) {
        const auto f = FieldSpec::fromOrder(d);
        for (int k = 0; k <= 6; ++k)
            for (double delta : {0.0, 0.3, pi / 2.0, 2.9}) {
                const auto state = encoding::kPhotonSymmetric(k, delta, nMax);
                const auto dist = encoding::xCorrelation(encoding::entangledEncode(state, f));
                const double offMass = 1.0 - dist[k % d];
                obsDev = std::max(obsDev, offMass - state.tail());
            }
    }
    out.push_back(makeResult("encoding/symmetric-point-mass", obsDev, 1e-10));

    double symDev = 0.0;
    for (const auto& [d, D] : std::vector<std::pair<int, int>>{
             {2, 16}, {4, 16}, {8, 16}, {16, 16}, {3, 9}, {17, 17}}) {
        const auto phases = encoding::rotationPhases(d, nMax);
        for (int k = 0; k < std::min(3, D); ++k) {
            const auto state = encoding::pseudoFock(k, 0.4, 0.1, D, nMax);
            const double ang = 2.0 * pi * k / d;
            const Cplx expected{std::cos(ang), std::sin(ang)};
            for (int nA = 0; nA <= nMax; ++nA)
                for (int nB = 0; nA + nB <= nMax; ++nB) {
                    const Cplx amp = state.amp(nA, nB);
                    symDev = std::max(symDev,
                                      std::abs(phases[nA] * phases[nB] * amp - expected * amp));
                }
        }
    }
    out.push_back(makeResult("encoding/pseudo-fock-symmetry", symDev, 1e-12));

    // averaging M equally spaced common phases reproduces the Poissonian
    // mixture of photon-number symmetric states
    double randDev = 0.0;
    for (double mu : {0.1, 0.5})
        for (double delta : {0.0, 0.7}) {
            const int M = 64;
            encoding::FockEnsemble coherentMix, fockMix;
            for (int j = 0; j < M; ++j) {
                const double phi = 2.0 * pi * j / M;
                const auto a = encoding::coherentKet(
                    std::polar(std::sqrt(mu / 2.0), phi), nMax);
                const auto b = encoding::coherentKet(
                    std::polar(std::sqrt(mu / 2.0), phi + delta), nMax);
                coherentMix.push_back({1.0 / M, encoding::productState(a, b, nMax)});
            }
            for (int k = 0; k <= nMax; ++k)
                fockMix.push_back({channel::poissonPmf(mu, k),
                                   encoding::kPhotonSymmetric(k, delta, nMax)});
            randDev = std::max(randDev,
                               encoding::traceDistance(encoding::densityMatrix(coherentMix),
                                                       encoding::densityMatrix(fockMix)));
        }
    out.push_back(makeResult("encoding/continuous-randomization", randDev, 1e-8));

    double rotDev = 0.0;
    for (int d : {2, 3, 5, 7}) {
        const auto phases = encoding::rotationPhases(d, nMax);
        for (int n = 0; n <= nMax; ++n) {
            Cplx acc{1.0, 0.0};
            for (int rep = 0; rep < d; ++rep) acc *= phases[n];
            rotDev = std::max(rotDev, std::abs(acc - Cplx{1.0, 0.0}));
        }
        // U coherent(alpha) = coherent(alpha e^{i 2 pi / d})
        const auto ket = encoding::coherentKet(0.3, nMax);
        const auto rotated = encoding::coherentKet(
            0.3 * std::polar(1.0, 2.0 * pi / d), nMax);
        for (int n = 0; n <= nMax; ++n)
            rotDev = std::max(rotDev, std::abs(phases[n] * ket.amps[n] - rotated.amps[n]));
    }
    out.push_back(makeResult("encoding/rotation-algebra", rotDev, 1e-12));

    // Poissonian input at d = 2 splits the correlation by photon parity
    {
        const double mu = 0.2;
        const auto f = FieldSpec::fromOrder(2);
        encoding::FockEnsemble ens;
        double even = 0.0, odd = 0.0;
        for (int k = 0; k <= nMax; ++k) {
            const double w = channel::poissonPmf(mu, k);
            ens.push_back({w, encoding::kPhotonSymmetric(k, 0.45, nMax)});
            (k % 2 == 0 ? even : odd) += w;
        }
        const auto dist = encoding::xCorrelation(ens, f);
        const double dev = std::max(std::abs(dist[0] - even), std::abs(dist[1] - odd));
        out.push_back(makeResult("encoding/poisson-parity-split", dev, 1e-8));
    }

    return out;
}

}  // namespace pmqkd::verify
