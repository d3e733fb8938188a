#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "pmqkd/errors.hpp"

namespace pmqkd::galois {

/// Finite field GF(p^r) with d = p^r <= 64.
///
/// Elements are the integers {0, ..., d-1}. The base-p digits of an element
/// are its polynomial coefficients, so addition is digit-wise mod-p addition
/// of the base-p decompositions. For r > 1 multiplication is polynomial
/// multiplication reduced by a monic irreducible polynomial over GF(p),
/// found at construction by exhaustive trial division.
///
/// Complex exponentials use the primitive p-th root of unity
/// gamma = exp(2*pi*i/p); gamma^a for a field element a is evaluated with a
/// as an ordinary integer, so only a mod p (the lowest base-p digit) matters.
/// This makes gamma^a * gamma^b == gamma^(a (+) b) hold exactly.
///
/// Immutable after construction; instances are shared via shared_ptr and are
/// safe to use from multiple threads.
class FieldSpec {
public:
    static std::shared_ptr<const FieldSpec> make(int p, int r);
    /// Factors d as p^r; throws ConfigError when d is not a prime power.
    static std::shared_ptr<const FieldSpec> fromOrder(int d);

    int characteristic() const { return p_; }
    int degree() const { return r_; }
    int order() const { return d_; }

    /// Coefficients c[0] + c[1] x + ... + c[r] x^r, monic irreducible.
    /// Empty for r == 1.
    const std::vector<int>& reductionPoly() const { return poly_; }

    // Arithmetic on raw element values (0..d-1).
    int addv(int a, int b) const { return addTable_[a * d_ + b]; }
    int mulv(int a, int b) const { return mulTable_[a * d_ + b]; }
    int subv(int a, int b) const { return addTable_[a * d_ + negTable_[b]]; }
    int negv(int a) const { return negTable_[a]; }
    int invv(int a) const;  // throws ConfigError for a == 0

    std::complex<double> gamma() const { return roots_[1 % p_]; }
    /// gamma()^(e mod p) for an element value e in 0..d-1.
    std::complex<double> gammaPow(int e) const { return roots_[e % p_]; }

    bool sameField(const FieldSpec& other) const;

private:
    FieldSpec(int p, int r);

    int p_, r_, d_;
    std::vector<int> poly_;
    std::vector<int> addTable_, mulTable_, negTable_, invTable_;
    std::vector<std::complex<double>> roots_;  // roots_[k] = exp(2*pi*i*k/p)
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

/// A single GF(d) element bound to its field.
class Fe {
public:
    Fe(int value, FieldPtr field);

    int value() const { return v_; }
    const FieldPtr& field() const { return f_; }

    friend bool operator==(const Fe& a, const Fe& b) {
        return a.v_ == b.v_ && a.f_->sameField(*b.f_);
    }

private:
    int v_;
    FieldPtr f_;
};

Fe add(const Fe& a, const Fe& b);
Fe mul(const Fe& a, const Fe& b);
Fe neg(const Fe& a);
Fe inv(const Fe& a);

/// Ordered tuple of GF(d) elements sharing one field, length N >= 1.
class DitString {
public:
    DitString(FieldPtr field, std::vector<int> digits);
    static DitString zero(FieldPtr field, int length);

    int length() const { return static_cast<int>(digits_.size()); }
    const FieldPtr& field() const { return f_; }
    const std::vector<int>& digits() const { return digits_; }
    int digit(int k) const { return digits_[k]; }
    Fe at(int k) const { return Fe(digits_[k], f_); }
    bool isZero() const;

private:
    FieldPtr f_;
    std::vector<int> digits_;
};

struct WeightVector {
    std::vector<long> counts;  // counts[s] = occurrences of symbol s
    long total() const;
};

/// Dot product sum_k x_k (*) y_k under the field operations.
Fe dot(const DitString& x, const DitString& y);

/// Symbol occurrence counts; counts sum to the string length.
WeightVector weight(const DitString& s);

/// Rank of the set under field-linear combinations (Gaussian elimination).
int rank(const std::vector<DitString>& strings);

}  // namespace pmqkd::galois
