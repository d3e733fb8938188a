#include "pmqkd/galois.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pmqkd::galois {

namespace {

constexpr int kMaxOrder = 64;

bool isPrime(int p) {
    if (p < 2) return false;
    for (int q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.
std::vector<int> polyTrim(std::vector<int> a) {
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
}

int polyDeg(const std::vector<int>& a) { return static_cast<int>(a.size()) - 1; }

std::vector<int> polyMul(const std::vector<int>& a, const std::vector<int>& b, int p) {
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return polyTrim(std::move(c));
}

// Remainder of a by monic b.
std::vector<int> polyMod(std::vector<int> a, const std::vector<int>& b, int p) {
    a = polyTrim(std::move(a));
    const int db = polyDeg(b);
    while (polyDeg(a) >= db && !(a.size() == 1 && a[0] == 0)) {
        const int shift = polyDeg(a) - db;
        const int coef = a.back();
        for (int i = 0; i <= db; ++i) {
            int& t = a[i + shift];
            t = ((t - coef * b[i]) % p + p) % p;
        }
        a = polyTrim(std::move(a));
    }
    return a;
}

bool polyIsZero(const std::vector<int>& a) { return a.size() == 1 && a[0] == 0; }

std::vector<int> decompose(int value, int p, int r) {
    std::vector<int> digits(r);
    for (int i = 0; i < r; ++i) {
        digits[i] = value % p;
        value /= p;
    }
    return digits;
}

int compose(const std::vector<int>& digits, int p) {
    int value = 0;
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i)
        value = value * p + digits[i];
    return value;
}

// Exhaustive trial division by every monic divisor of degree 1..deg/2.
bool isIrreducible(const std::vector<int>& f, int p) {
    const int deg = polyDeg(f);
    for (int dDiv = 1; 2 * dDiv <= deg; ++dDiv) {
        int count = 1;
        for (int i = 0; i < dDiv; ++i) count *= p;
        for (int c = 0; c < count; ++c) {
            std::vector<int> g = decompose(c, p, dDiv);
            g.push_back(1);  // monic
            if (polyIsZero(polyMod(f, g, p))) return false;
        }
    }
    return true;
}

}  // namespace

FieldSpec::FieldSpec(int p, int r) : p_(p), r_(r), d_(1) {
    if (!isPrime(p)) throw ConfigError("field characteristic must be prime, got " + std::to_string(p));
    if (r < 1) throw ConfigError("field degree must be >= 1");
    for (int i = 0; i < r; ++i) {
        d_ *= p;
        if (d_ > kMaxOrder) throw ConfigError("field order exceeds supported maximum 64");
    }

    if (r_ > 1) {
        // Smallest monic irreducible of degree r, ordered by free coefficients.
        int count = 1;
        for (int i = 0; i < r_; ++i) count *= p_;
        for (int c = 0; c < count; ++c) {
            std::vector<int> f = decompose(c, p_, r_);
            f.push_back(1);
            if (isIrreducible(f, p_)) {
                poly_ = f;
                break;
            }
        }
        if (poly_.empty()) throw ConfigError("no irreducible reduction polynomial found");
    }

    addTable_.resize(d_ * d_);
    mulTable_.resize(d_ * d_);
    negTable_.resize(d_);
    invTable_.assign(d_, -1);
    for (int a = 0; a < d_; ++a) {
        const auto da = decompose(a, p_, r_);
        for (int b = 0; b < d_; ++b) {
            const auto db = decompose(b, p_, r_);
            std::vector<int> sum(r_);
            for (int i = 0; i < r_; ++i) sum[i] = (da[i] + db[i]) % p_;
            addTable_[a * d_ + b] = compose(sum, p_);

            std::vector<int> prod;
            if (r_ == 1) {
                prod = {(a * b) % p_};
            } else {
                prod = polyMod(polyMul(da, db, p_), poly_, p_);
                prod.resize(r_, 0);
            }
            mulTable_[a * d_ + b] = compose(prod, p_);
        }
    }
    for (int a = 0; a < d_; ++a) {
        std::vector<int> da = decompose(a, p_, r_);
        for (int& x : da) x = (p_ - x) % p_;
        negTable_[a] = compose(da, p_);
    }
    for (int a = 1; a < d_; ++a)
        for (int b = 1; b < d_; ++b)
            if (mulTable_[a * d_ + b] == 1) invTable_[a] = b;
    for (int a = 1; a < d_; ++a)
        if (invTable_[a] < 0) throw ConfigError("reduction polynomial is not irreducible");

    roots_.resize(p_);
    for (int k = 0; k < p_; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / p_;
        roots_[k] = {std::cos(ang), std::sin(ang)};
    }
}

std::shared_ptr<const FieldSpec> FieldSpec::make(int p, int r) {
    return std::shared_ptr<const FieldSpec>(new FieldSpec(p, r));
}

std::shared_ptr<const FieldSpec> FieldSpec::fromOrder(int d) {
    if (d < 2) throw ConfigError("field order must be >= 2");
    int p = 2;
    while (d % p != 0) {
        ++p;
        if (p > d) throw ConfigError("not a prime power: " + std::to_string(d));
    }
    int r = 0, m = d;
    while (m % p == 0) {
        m /= p;
        ++r;
    }
    if (m != 1) throw ConfigError("not a prime power: " + std::to_string(d));
    return make(p, r);
}

int FieldSpec::invv(int a) const {
    if (a == 0) throw ConfigError("division by zero in GF(" + std::to_string(d_) + ")");
    return invTable_[a];
}

bool FieldSpec::sameField(const FieldSpec& other) const {
    return p_ == other.p_ && r_ == other.r_ && poly_ == other.poly_;
}

namespace {
void requireSame(const FieldPtr& a, const FieldPtr& b) {
    if (!a->sameField(*b)) throw FieldMismatchError("operands belong to different fields");
}
}  // namespace

Fe::Fe(int value, FieldPtr field) : v_(value), f_(std::move(field)) {
    if (v_ < 0 || v_ >= f_->order())
        throw ConfigError("element value out of range for GF(" + std::to_string(f_->order()) + ")");
}

Fe add(const Fe& a, const Fe& b) {
    requireSame(a.field(), b.field());
    return Fe(a.field()->addv(a.value(), b.value()), a.field());
}

Fe mul(const Fe& a, const Fe& b) {
    requireSame(a.field(), b.field());
    return Fe(a.field()->mulv(a.value(), b.value()), a.field());
}

Fe neg(const Fe& a) { return Fe(a.field()->negv(a.value()), a.field()); }

Fe inv(const Fe& a) { return Fe(a.field()->invv(a.value()), a.field()); }

DitString::DitString(FieldPtr field, std::vector<int> digits)
    : f_(std::move(field)), digits_(std::move(digits)) {
    if (digits_.empty()) throw ConfigError("dit string must have length >= 1");
    for (int v : digits_)
        if (v < 0 || v >= f_->order()) throw ConfigError("dit value out of field range");
}

DitString DitString::zero(FieldPtr field, int length) {
    return DitString(std::move(field), std::vector<int>(length, 0));
}

bool DitString::isZero() const {
    return std::all_of(digits_.begin(), digits_.end(), [](int v) { return v == 0; });
}

Fe dot(const DitString& x, const DitString& y) {
    requireSame(x.field(), y.field());
    if (x.length() != y.length()) throw ConfigError("dot product requires equal lengths");
    const FieldSpec& f = *x.field();
    int acc = 0;
    for (int k = 0; k < x.length(); ++k) acc = f.addv(acc, f.mulv(x.digit(k), y.digit(k)));
    return Fe(acc, x.field());
}

WeightVector weight(const DitString& s) {
    WeightVector w;
    w.counts.assign(s.field()->order(), 0);
    for (int v : s.digits()) ++w.counts[v];
    return w;
}

long WeightVector::total() const {
    long t = 0;
    for (long c : counts) t += c;
    return t;
}

int rank(const std::vector<DitString>& strings) {
    if (strings.empty()) return 0;
    const FieldPtr& fp = strings[0].field();
    const FieldSpec& f = *fp;
    const int n = strings[0].length();
    std::vector<std::vector<int>> rows;
    for (const auto& s : strings) {
        requireSame(fp, s.field());
        if (s.length() != n) throw ConfigError("rank requires equal lengths");
        rows.push_back(s.digits());
    }

    int rk = 0;
    for (int col = 0; col < n && rk < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int i = rk; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rk], rows[pivot]);
        const int scale = f.invv(rows[rk][col]);
        for (int j = 0; j < n; ++j) rows[rk][j] = f.mulv(rows[rk][j], scale);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == rk || rows[i][col] == 0) continue;
            const int factor = rows[i][col];
            for (int j = 0; j < n; ++j)
                rows[i][j] = f.subv(rows[i][j], f.mulv(factor, rows[rk][j]));
        }
        ++rk;
    }
    return rk;
}

}  // namespace pmqkd::galois
