#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "pmqkd/channel.hpp"
#include "pmqkd/encoding.hpp"
#include "pmqkd/qudit.hpp"

using namespace pmqkd;
using encoding::Cplx;
using encoding::FockState;
using galois::FieldSpec;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kNMax = 12;
}

TEST_SUITE("encoding") {

TEST_CASE("coherent states") {
    const auto vac = encoding::coherentKet(0.0, kNMax);
    CHECK(std::abs(vac.amps[0] - Cplx{1, 0}) < 1e-15);
    CHECK(vac.tail == 0.0);

    // |alpha|^2 = 0.1: tail below 1e-12 at a cutoff of 12
    const auto weak = encoding::coherentKet(std::sqrt(0.1), kNMax);
    CHECK(weak.tail < 1e-12);

    // Poisson tail oracle: 1 - sum_{n<=nMax} e^{-mu} mu^n / n!
    double poissonTail = 1.0;
    for (int n = 0; n <= kNMax; ++n) poissonTail -= channel::poissonPmf(0.1, n);
    CHECK(weak.tail == doctest::Approx(poissonTail).epsilon(1e-6));

    // mean photon number equals |alpha|^2 up to the tail
    double mean = 0.0;
    for (int n = 0; n <= kNMax; ++n) mean += n * std::norm(weak.amps[n]);
    CHECK(mean == doctest::Approx(0.1).epsilon(1e-10));

    CHECK_THROWS_AS((void)encoding::coherentKet(3.0, 4), TruncationError);
}

TEST_CASE("rotation operator") {
    for (int d : {2, 3, 7}) {
        const auto ph = encoding::rotationPhases(d, kNMax);
        for (int n = 0; n <= kNMax; ++n) {
            Cplx acc{1, 0};
            for (int rep = 0; rep < d; ++rep) acc *= ph[n];
            CHECK(std::abs(acc - Cplx{1, 0}) < 1e-12);  // U^d = I
        }
    }
    const auto ph2 = encoding::rotationPhases(2, kNMax);
    CHECK(std::abs(ph2[0] - Cplx{1, 0}) < 1e-15);
    CHECK(std::abs(ph2[1] - Cplx{-1, 0}) < 1e-15);
    CHECK(std::abs(ph2[2] - Cplx{1, 0}) < 1e-15);

    // rotating a coherent state rotates its amplitude
    const auto ket = encoding::coherentKet(0.4, kNMax);
    const auto rot = encoding::coherentKet(0.4 * std::polar(1.0, 2.0 * kPi / 3.0), kNMax);
    const auto ph3 = encoding::rotationPhases(3, kNMax);
    for (int n = 0; n <= kNMax; ++n)
        CHECK(std::abs(ph3[n] * ket.amps[n] - rot.amps[n]) < 1e-12);
}

TEST_CASE("k-photon symmetric states") {
    const auto vac = encoding::kPhotonSymmetric(0, 0.7, kNMax);
    CHECK(std::abs(vac.amp(0, 0) - Cplx{1, 0}) < 1e-15);

    const auto one = encoding::kPhotonSymmetric(1, 0.0, kNMax);
    CHECK(std::abs(one.amp(1, 0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(one.amp(0, 1) - 1.0 / std::sqrt(2.0)) < 1e-15);

    // eigenstate of the joint rotation with eigenvalue gamma_d^k
    for (int d : {2, 3, 5, 7}) {
        const auto ph = encoding::rotationPhases(d, kNMax);
        for (int k = 0; k <= 6; ++k) {
            const auto st = encoding::kPhotonSymmetric(k, 0.9, kNMax);
            const Cplx eig = std::polar(1.0, 2.0 * kPi * k / d);
            for (int nA = 0; nA <= kNMax; ++nA)
                for (int nB = 0; nA + nB <= kNMax; ++nB)
                    CHECK(std::abs(ph[nA] * ph[nB] * st.amp(nA, nB) - eig * st.amp(nA, nB)) <
                          1e-12);
        }
    }
    CHECK(encoding::kPhotonSymmetric(5, 0.1, kNMax).amplitudes().squaredNorm() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)encoding::kPhotonSymmetric(13, 0.0, kNMax), ConfigError);
}

TEST_CASE("pseudo-Fock states") {
    // overlap with the true k-photon state: deficit below 1e-10 at D = 16
    {
        const auto pf = encoding::pseudoFock(1, 0.3, 0.1, 16, kNMax);
        const auto kp = encoding::kPhotonSymmetric(1, 0.3, kNMax);
        Cplx overlap{0, 0};
        for (long i = 0; i < pf.amplitudes().size(); ++i)
            overlap += std::conj(kp.amplitudes()[i]) * pf.amplitudes()[i];
        CHECK(1.0 - std::norm(overlap) < 1e-10);
    }

    // the discretely phase-averaged coherent pair equals the pseudo-Fock mixture
    {
        const double mu = 0.2, delta = 0.5;
        const int D = 4;
        encoding::FockEnsemble discrete;
        for (int j = 0; j < D; ++j) {
            const double phi = 2.0 * kPi * j / D;
            discrete.push_back(
                {1.0 / D,
                 encoding::productState(
                     encoding::coherentKet(std::polar(std::sqrt(mu / 2.0), phi), kNMax),
                     encoding::coherentKet(std::polar(std::sqrt(mu / 2.0), phi + delta), kNMax),
                     kNMax)});
        }
        encoding::FockEnsemble pseudo;
        for (int k = 0; k < D; ++k) {
            double w = 0.0;  // sum_n P_mu(nD + k)
            for (int m = k; m <= 60; m += D) w += channel::poissonPmf(mu, m);
            pseudo.push_back({w, encoding::pseudoFock(k, delta, mu, D, kNMax)});
        }
        CHECK(encoding::traceDistance(encoding::densityMatrix(discrete),
                                      encoding::densityMatrix(pseudo)) < 1e-10);
    }

    // k = 0 at vanishing intensity approaches the vacuum
    const auto nearVac = encoding::pseudoFock(0, 0.0, 1e-6, 8, kNMax);
    CHECK(std::norm(nearVac.amp(0, 0)) == doctest::Approx(1.0).epsilon(1e-5));

    CHECK_THROWS_AS((void)encoding::pseudoFock(8, 0.0, 0.1, 8, kNMax), ConfigError);
    // shells at 2 and 10 both fit, 18 does not: cutoff 9 loses real mass
    CHECK_THROWS_AS((void)encoding::pseudoFock(2, 0.0, 0.5, 8, 9), TruncationError);
}

TEST_CASE("entangled encoding matches the closed form") {
    // vacuum input leaves the ancillas in the product |+>|+>
    const auto gf3 = FieldSpec::fromOrder(3);
    const auto vacEnc = encoding::entangledEncode(encoding::kPhotonSymmetric(0, 0.0, 4), gf3);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(vacEnc.amplitudes()[vacEnc.index(j, k, 0)] - Cplx{1.0 / 3.0, 0.0}) <
                  1e-14);

    // l-symmetric input: amplitude(j, k) = gamma^{j l} (U^{k-j} psi) / d
    for (int d : {2, 3, 5}) {
        const auto f = FieldSpec::fromOrder(d);
        const int l = 1 % d;
        const double delta = 0.8;
        const auto psi = encoding::kPhotonSymmetric(l, delta, 6);
        const auto enc = encoding::entangledEncode(psi, f);
        const auto ph = encoding::rotationPhases(d, 6);
        double worst = 0.0;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int nA = 0; nA <= 6; ++nA)
                    for (int nB = 0; nA + nB <= 6; ++nB) {
                        // U_B^{k-j} adds phase e^{i 2 pi (k-j) nB / d}
                        Cplx ub{1, 0};
                        const int rot = ((k - j) % d + d) % d;
                        for (int rep = 0; rep < rot; ++rep) ub *= ph[nB];
                        const Cplx gammaJl =
                            std::polar(1.0, 2.0 * kPi * ((j * l) % d) / d);
                        const Cplx expected = gammaJl * ub *
                                              psi.amp(nA, nB) / static_cast<double>(d);
                        const Cplx got =
                            enc.amplitudes()[enc.index(j, k, FockState::index(nA, nB))];
                        worst = std::max(worst, std::abs(expected - got));
                    }
        CHECK(worst < 1e-10);
    }

    // k = 1 symmetric input at d = 3: the ancilla marginal mixes all three
    // Bell states with phase label 1 (weight 1/3 each). Its matrix rank is 2,
    // not 3: a single photon spans a two-dimensional mode space, which caps
    // the Schmidt rank of the partial trace.
    {
        const auto f = FieldSpec::fromOrder(3);
        const auto enc =
            encoding::entangledEncode(encoding::kPhotonSymmetric(1, 0.4, 6), f);
        const auto rho = enc.ancillaDensity();

        double bellMass = 0.0;
        for (int u = 0; u < 3; ++u) {
            const auto bell = qudit::bellState(galois::Fe(u, f), galois::Fe(1, f));
            const double w = std::real(bell.amplitudes().dot(rho * bell.amplitudes()));
            CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
            bellMass += w;
        }
        CHECK(bellMass == doctest::Approx(1.0).epsilon(1e-10));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
        int nonzero = 0;
        for (long i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()[i] > 1e-10) ++nonzero;
        CHECK(nonzero == 2);
    }
}

TEST_CASE("complementary-basis correlations") {
    // l-symmetric input: outcome sum is a point mass at l, whatever delta is
    for (int d : {2, 3, 5, 7}) {
        const auto f = FieldSpec::fromOrder(d);
        for (int k = 0; k <= 6; ++k)
            for (double delta : {0.0, 0.3, kPi / 2.0, 2.9}) {
                const auto dist = encoding::xCorrelation(
                    encoding::entangledEncode(encoding::kPhotonSymmetric(k, delta, kNMax), f));
                CHECK(dist[k % d] == doctest::Approx(1.0).epsilon(1e-10));
            }
    }

    // vacuum: point mass at zero
    const auto gf5 = FieldSpec::fromOrder(5);
    const auto vdist = encoding::xCorrelation(
        encoding::entangledEncode(encoding::kPhotonSymmetric(0, 1.0, 6), gf5));
    CHECK(vdist[0] == doctest::Approx(1.0).epsilon(1e-12));

    // Poissonian mixture at d = 2 splits by photon-number parity
    {
        const double mu = 0.2;
        const auto gf2 = FieldSpec::fromOrder(2);
        encoding::FockEnsemble ens;
        double even = 0.0, odd = 0.0;
        for (int k = 0; k <= kNMax; ++k) {
            const double w = channel::poissonPmf(mu, k);
            ens.push_back({w, encoding::kPhotonSymmetric(k, 0.35, kNMax)});
            (k % 2 == 0 ? even : odd) += w;
        }
        const auto dist = encoding::xCorrelation(ens, gf2);
        CHECK(std::abs(dist[0] - even) < 1e-8);
        CHECK(std::abs(dist[1] - odd) < 1e-8);
    }
}

TEST_CASE("continuous randomization decomposition") {
    const double mu = 0.5, delta = 0.7;
    const int M = 64;
    encoding::FockEnsemble coherentMix, fockMix;
    for (int j = 0; j < M; ++j) {
        const double phi = 2.0 * kPi * j / M;
        coherentMix.push_back(
            {1.0 / M,
             encoding::productState(
                 encoding::coherentKet(std::polar(std::sqrt(mu / 2.0), phi), kNMax),
                 encoding::coherentKet(std::polar(std::sqrt(mu / 2.0), phi + delta), kNMax),
                 kNMax)});
    }
    for (int k = 0; k <= kNMax; ++k)
        fockMix.push_back({channel::poissonPmf(mu, k), encoding::kPhotonSymmetric(k, delta, kNMax)});
    CHECK(encoding::traceDistance(encoding::densityMatrix(coherentMix),
                                  encoding::densityMatrix(fockMix)) < 1e-8);
}

}  // TEST_SUITE
