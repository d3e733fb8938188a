#include "pmqkd/qudit.hpp"

#include <cmath>
#include <random>
#include <string>

#include "pmqkd/errors.hpp"

namespace pmqkd::qudit {

namespace {

constexpr long kMaxDim = 4096;

void requireSameField(const galois::FieldPtr& a, const galois::FieldPtr& b) {
    if (!a->sameField(*b)) throw FieldMismatchError("mixed fields in qudit operation");
}

// Applies the same single-qudit matrix m to qudit `pos` of v.
Vec applyOneQudit(const Vec& v, const Mat& m, int d, int nQudits, int pos) {
    const long dim = v.size();
    const long stride = dimPow(d, nQudits - 1 - pos);
    const long block = stride * d;
    Vec out(dim);
    for (long base = 0; base < dim; base += block) {
        for (long lo = 0; lo < stride; ++lo) {
            for (int a = 0; a < d; ++a) {
                Cplx acc{0.0, 0.0};
                for (int b = 0; b < d; ++b) acc += m(a, b) * v[base + b * stride + lo];
                out[base + a * stride + lo] = acc;
            }
        }
    }
    return out;
}

Vec applyPerQudit(Vec v, const Mat& m, int d, int nQudits) {
    for (int pos = 0; pos < nQudits; ++pos) v = applyOneQudit(v, m, d, nQudits, pos);
    return v;
}

// <x~|z> = gamma^{x*z} / sqrt(d); rows index the X-basis label x.
Mat mubBraMatrix(const galois::FieldSpec& f) {
    const int d = f.order();
    Mat g(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int x = 0; x < d; ++x)
        for (int z = 0; z < d; ++z) g(x, z) = f.gammaPow(f.mulv(x, z)) * norm;
    return g;
}

// Dot products z . a for every packed basis index z.
std::vector<int> allDots(const galois::FieldSpec& f, const std::vector<int>& a, int nQudits) {
    const int d = f.order();
    const long dim = dimPow(d, nQudits);
    std::vector<int> dots(dim, 0);
    long repeat = 1;
    for (int pos = nQudits - 1; pos >= 0; --pos) {
        // contribution of digit at `pos` cycles with period d*repeat
        std::vector<int> contrib(d);
        for (int z = 0; z < d; ++z) contrib[z] = f.mulv(z, a[pos]);
        for (long i = 0; i < dim; ++i) dots[i] = f.addv(dots[i], contrib[(i / repeat) % d]);
        repeat *= d;
    }
    return dots;
}

}  // namespace

long dimPow(int d, int nQudits) {
    long dim = 1;
    for (int i = 0; i < nQudits; ++i) dim *= d;
    return dim;
}

std::vector<int> indexToString(long index, int d, int nQudits) {
    std::vector<int> digits(nQudits);
    for (int k = nQudits - 1; k >= 0; --k) {
        digits[k] = static_cast<int>(index % d);
        index /= d;
    }
    return digits;
}

long stringToIndex(const std::vector<int>& digits, int d) {
    long index = 0;
    for (int v : digits) index = index * d + v;
    return index;
}

StateVector::StateVector(galois::FieldPtr field, int nQudits, Vec amplitudes)
    : field_(std::move(field)), n_(nQudits), amps_(std::move(amplitudes)) {
    if (n_ < 1) throw ConfigError("state needs at least one qudit");
    const long dim = dimPow(field_->order(), n_);
    if (amps_.size() != dim) throw ConfigError("amplitude count does not match d^N");
    if (std::abs(amps_.squaredNorm() - 1.0) > 1e-10)
        throw ConfigError("state vector is not normalized");
}

Operator::Operator(galois::FieldPtr field, int nQudits, Mat matrix)
    : field_(std::move(field)), n_(nQudits), mat_(std::move(matrix)) {
    const long dim = dimPow(field_->order(), n_);
    if (mat_.rows() != dim || mat_.cols() != dim)
        throw ConfigError("operator dimensions do not match d^N");
}

double MeasurementChannel::validationDeviation() const {
    double worst = 0.0;
    const long dim = projectors.at(0).dim();
    Mat sum = Mat::Zero(dim, dim);
    for (const auto& p : projectors) {
        const Mat& m = p.matrix();
        worst = std::max(worst, (m - m.adjoint()).cwiseAbs().maxCoeff());
        worst = std::max(worst, (m * m - m).cwiseAbs().maxCoeff());
        sum += m;
    }
    for (size_t i = 0; i < projectors.size(); ++i)
        for (size_t j = i + 1; j < projectors.size(); ++j)
            worst = std::max(worst, (projectors[i].matrix() * projectors[j].matrix())
                                        .cwiseAbs()
                                        .maxCoeff());
    worst = std::max(worst, (sum - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff());
    return worst;
}

void MeasurementChannel::validate(double tol) const {
    const double dev = validationDeviation();
    if (dev > tol)
        throw NumericGuardError("measurement channel invariants violated, deviation " +
                                std::to_string(dev));
}

Operator pauliZ(const galois::FieldPtr& field) {
    const int d = field->order();
    Mat m = Mat::Zero(d, d);
    for (int l = 0; l < d; ++l) m(l, l) = field->gammaPow(l);
    return Operator(field, 1, std::move(m));
}

Operator pauliX(const galois::FieldPtr& field) {
    const int d = field->order();
    Mat m = Mat::Zero(d, d);
    for (int l = 0; l < d; ++l) m(field->addv(l, 1), l) = 1.0;
    return Operator(field, 1, std::move(m));
}

StateVector mubKet(const galois::Fe& l) {
    const auto& f = *l.field();
    const int d = f.order();
    Vec v(d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) v[j] = f.gammaPow(f.negv(f.mulv(l.value(), j))) * norm;
    return StateVector(l.field(), 1, std::move(v));
}

Operator weyl(const galois::Fe& u, const galois::Fe& v) {
    requireSameField(u.field(), v.field());
    const auto& f = *u.field();
    const int d = f.order();
    Mat m = Mat::Zero(d, d);
    for (int l = 0; l < d; ++l)
        m(f.addv(l, u.value()), l) = f.gammaPow(f.mulv(l, v.value()));
    return Operator(u.field(), 1, std::move(m));
}

StateVector bellState(const galois::Fe& u, const galois::Fe& v) {
    requireSameField(u.field(), v.field());
    const auto& f = *u.field();
    const int d = f.order();
    Vec amp = Vec::Zero(static_cast<long>(d) * d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int l = 0; l < d; ++l) {
        const long idx = static_cast<long>(l) * d + f.addv(l, u.value());
        amp[idx] = f.gammaPow(f.mulv(l, v.value())) * norm;
    }
    return StateVector(u.field(), 2, std::move(amp));
}

Operator parityProjector(const galois::Fe& l, const galois::DitString& v, Basis basis) {
    requireSameField(l.field(), v.field());
    const auto& f = *v.field();
    const int d = f.order();
    const int n = v.length();
    const long dim = dimPow(d, n);
    if (dim > kMaxDim) throw ConfigError("parity projector dimension exceeds 4096");

    const auto dots = allDots(f, v.digits(), n);
    Mat m = Mat::Zero(dim, dim);
    for (long z = 0; z < dim; ++z)
        if (dots[z] == l.value()) m(z, z) = 1.0;

    if (basis == Basis::X) {
        // conjugate the Z-basis projector into the X basis qudit by qudit
        const Mat g = mubBraMatrix(f);  // rows are <x~|
        Mat u = Mat::Ones(1, 1);
        for (int k = 0; k < n; ++k) {
            Mat next(u.rows() * d, u.cols() * d);
            for (long i = 0; i < u.rows(); ++i)
                for (long j = 0; j < u.cols(); ++j)
                    next.block(i * d, j * d, d, d) = u(i, j) * g;
            u = std::move(next);
        }
        // u maps Z amplitudes to X amplitudes; projector = u^dagger m u
        m = (u.adjoint() * m * u).eval();
    }
    return Operator(v.field(), n, std::move(m));
}

MeasurementChannel parityChannel(const galois::DitString& v, Basis basis) {
    MeasurementChannel ch;
    for (int l = 0; l < v.field()->order(); ++l)
        ch.projectors.push_back(parityProjector(galois::Fe(l, v.field()), v, basis));
    return ch;
}

std::vector<double> measureStats(const MeasurementChannel& channel, const StateVector& state) {
    std::vector<double> p;
    p.reserve(channel.projectors.size());
    for (const auto& proj : channel.projectors) {
        if (proj.dim() != state.dim()) throw ConfigError("channel/state dimension mismatch");
        p.push_back(std::real(state.amplitudes().dot(proj.matrix() * state.amplitudes())));
    }
    return p;
}

std::vector<double> measureStats(const MeasurementChannel& channel, const Ensemble& ensemble) {
    std::vector<double> p(channel.projectors.size(), 0.0);
    for (const auto& [w, state] : ensemble) {
        const auto q = measureStats(channel, state);
        for (size_t i = 0; i < p.size(); ++i) p[i] += w * q[i];
    }
    return p;
}

std::vector<double> measureStatsDensity(const MeasurementChannel& channel, const Mat& rho) {
    std::vector<double> p;
    p.reserve(channel.projectors.size());
    for (const auto& proj : channel.projectors) {
        if (proj.dim() != rho.rows()) throw ConfigError("channel/state dimension mismatch");
        p.push_back(std::real((proj.matrix() * rho).trace()));
    }
    return p;
}

Mat densityMatrix(const Ensemble& ensemble) {
    const long dim = ensemble.at(0).second.dim();
    Mat rho = Mat::Zero(dim, dim);
    for (const auto& [w, state] : ensemble)
        rho += w * (state.amplitudes() * state.amplitudes().adjoint());
    return rho;
}

std::vector<double> zParityStats(const StateVector& state, const galois::DitString& a) {
    requireSameField(state.field(), a.field());
    const auto& f = *a.field();
    if (state.nQudits() != a.length()) throw ConfigError("string length != qudit count");
    const auto dots = allDots(f, a.digits(), a.length());
    std::vector<double> p(f.order(), 0.0);
    for (long z = 0; z < state.dim(); ++z) p[dots[z]] += std::norm(state.amplitudes()[z]);
    return p;
}

std::vector<double> zDiagonalAfterXParity(const StateVector& state, const galois::DitString& b) {
    requireSameField(state.field(), b.field());
    const auto& f = *b.field();
    const int d = f.order();
    const int n = b.length();
    if (state.nQudits() != n) throw ConfigError("string length != qudit count");

    const Mat g = mubBraMatrix(f);
    const Mat gAdj = g.adjoint();
    const Vec mubAmps = applyPerQudit(state.amplitudes(), g, d, n);
    const auto dots = allDots(f, b.digits(), n);

    std::vector<double> diag(state.dim(), 0.0);
    for (int j = 0; j < d; ++j) {
        Vec masked = Vec::Zero(state.dim());
        bool any = false;
        for (long x = 0; x < state.dim(); ++x)
            if (dots[x] == j) {
                masked[x] = mubAmps[x];
                any = true;
            }
        if (!any) continue;
        const Vec back = applyPerQudit(std::move(masked), gAdj, d, n);
        for (long z = 0; z < state.dim(); ++z) diag[z] += std::norm(back[z]);
    }
    return diag;
}

std::vector<double> zParityStatsFromDiagonal(const std::vector<double>& diag,
                                             const galois::DitString& a) {
    const auto& f = *a.field();
    const auto dots = allDots(f, a.digits(), a.length());
    std::vector<double> p(f.order(), 0.0);
    for (size_t z = 0; z < diag.size(); ++z) p[dots[z]] += diag[z];
    return p;
}

double verifyCommuting(const galois::DitString& a, const galois::DitString& b,
                       const StateVector& state) {
    const auto before = zParityStats(state, a);
    const auto diag = zDiagonalAfterXParity(state, b);
    const auto after = zParityStatsFromDiagonal(diag, a);
    double worst = 0.0;
    for (size_t l = 0; l < before.size(); ++l)
        worst = std::max(worst, std::abs(after[l] - before[l]));
    return worst;
}

double verifyLemmaSums(const galois::FieldPtr& field, int nDigits, int variant) {
    const auto& f = *field;
    const int d = f.order();
    const long dim = dimPow(d, nDigits);
    if (dim > kMaxDim) throw ConfigError("lemma enumeration dimension exceeds 4096");

    double worst = 0.0;
    if (variant == 1) {
        // sum over all z of gamma^{z.x}: d^N at x = 0 and 0 otherwise
        for (long xi = 0; xi < dim; ++xi) {
            const auto x = indexToString(xi, d, nDigits);
            const auto dots = allDots(f, x, nDigits);
            Cplx s{0.0, 0.0};
            for (long z = 0; z < dim; ++z) s += f.gammaPow(dots[z]);
            const Cplx expected = (xi == 0) ? Cplx{1.0, 0.0} : Cplx{0.0, 0.0};
            worst = std::max(worst, std::abs(s / static_cast<double>(dim) - expected));
        }
        return worst;
    }
    if (variant != 2 && variant != 3) throw ConfigError("lemma variant must be 1, 2 or 3");

    const double scale = static_cast<double>(dim) / d;  // coset size d^{N-1}
    for (long ai = 1; ai < dim; ++ai) {
        const auto a = indexToString(ai, d, nDigits);
        const auto dotsA = allDots(f, a, nDigits);
        int firstNonzero = 0;
        while (a[firstNonzero] == 0) ++firstNonzero;

        for (long xi = 0; xi < dim; ++xi) {
            const auto x = indexToString(xi, d, nDigits);

            int x0 = -1;  // coefficient with x = x0 * a, when it exists
            if (variant == 2) {
                bool admissible = false;
                for (int k = 0; k < nDigits; ++k)
                    if (a[k] != 0 && x[k] == 0) {
                        admissible = true;
                        break;
                    }
                if (!admissible) continue;
            } else {
                const int cand = f.mulv(x[firstNonzero], f.invv(a[firstNonzero]));
                bool multiple = true;
                for (int k = 0; k < nDigits; ++k)
                    if (x[k] != f.mulv(cand, a[k])) {
                        multiple = false;
                        break;
                    }
                if (multiple) x0 = cand;
            }

            const auto dotsX = allDots(f, x, nDigits);
            std::vector<Cplx> sums(d, Cplx{0.0, 0.0});
            for (long z = 0; z < dim; ++z) sums[dotsA[z]] += f.gammaPow(dotsX[z]);

            for (int l = 0; l < d; ++l) {
                Cplx expected{0.0, 0.0};
                if (variant == 2) {
                    expected = (xi == 0) ? Cplx{1.0, 0.0} : Cplx{0.0, 0.0};
                } else if (x0 >= 0) {
                    expected = f.gammaPow(f.mulv(x0, l));
                }
                worst = std::max(worst, std::abs(sums[l] / scale - expected));
            }
        }
    }
    return worst;
}

StateVector randomState(const galois::FieldPtr& field, int nQudits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const long dim = dimPow(field->order(), nQudits);
    Vec v(dim);
    for (long i = 0; i < dim; ++i) v[i] = Cplx{gauss(rng), gauss(rng)};
    v /= v.norm();
    return StateVector(field, nQudits, std::move(v));
}

}  // namespace pmqkd::qudit
