#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>

#include "sumform/error.hpp"

namespace sumform {

using Rational = mpq_class;

// Builds a reduced rational with positive denominator. Throws "zero-denominator".
Rational make_rational_value(const mpz_class& num, const mpz_class& den);

enum class Backend { exact, floating };

inline const char* to_string(Backend b) {
    return b == Backend::exact ? "exact" : "float";
}

// A real number, either an exact element of the quartic field Q(sqrt2, sqrt3)
// stored as rational coordinates on the basis {1, sqrt2, sqrt3, sqrt6}, or a
// plain double. The two backends never mix silently: any binary operation on
// mixed backends throws "backend-mismatch".
//
// Exact values form a field closed under +, -, *, /; the basis multiplication
// table is  r2*r2=2, r3*r3=3, r6*r6=6, r2*r3=r6, r2*r6=2*r3, r3*r6=3*r2.
class Scalar {
public:
    Scalar() : backend_(Backend::exact) {} // exact zero

    static Scalar exact(Rational c0);
    static Scalar exact(Rational c0, Rational c1, Rational c2, Rational c3);
    static Scalar of_double(double v);
    static Scalar of_int(long v) { return exact(Rational(v)); }
    // make_rational: reduced num/den, throws "zero-denominator" when den == 0.
    static Scalar of_rational(long num, long den);

    static Scalar sqrt2() { return exact(0, 1, 0, 0); }
    static Scalar sqrt3() { return exact(0, 0, 1, 0); }
    static Scalar sqrt6() { return exact(0, 0, 0, 1); }
    static Scalar zero(Backend b) { return b == Backend::exact ? Scalar() : of_double(0.0); }
    static Scalar one(Backend b) { return b == Backend::exact ? of_int(1) : of_double(1.0); }

    Backend backend() const { return backend_; }
    bool is_exact() const { return backend_ == Backend::exact; }

    // Exact accessors; calling them on a float Scalar throws "backend-mismatch".
    const std::array<Rational, 4>& coords() const;
    bool is_rational() const;            // exact with zero irrational coordinates
    const Rational& rational_part() const;

    double float_value() const;          // float backend only

    bool is_zero() const;
    bool is_one() const;

    // Exact sign of the real number (-1, 0, +1). Decidable because the basis
    // elements are linearly independent over Q: a nonzero coordinate vector is
    // a nonzero number, so interval refinement of the radicals terminates.
    int sign() const;
    int compare(const Scalar& other) const { return (*this - other).sign(); }

    // Rounds the represented real to double. For exact values the result is
    // within 2^-40 * (1 + |x|) of the true value (interval refinement, then a
    // single rounding).
    double to_double() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;  // field_mul
    Scalar operator/(const Scalar& o) const;  // throws "division-by-zero"
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar inverse() const;
    Scalar pow_int(long e) const;   // integer exponent, negative allowed on nonzero values
    Scalar abs() const { return sign() < 0 ? -*this : *this; }

    // Text form "c0 + c1*r2 + c2*r3 + c3*r6" with rational coefficients in
    // shortest form ("1/2", "r2", "3 - 1/2*r6"). Floats print as shortest
    // round-trip decimals. parse(str(x)) == x bit-exactly.
    std::string str() const;
    static Scalar parse_exact(const std::string& text);
    // Backend-directed parse; the float backend additionally accepts plain
    // decimal literals ("0.5", "1e-3").
    static Scalar parse(const std::string& text, Backend backend);

private:
    Backend backend_;
    std::array<Rational, 4> c_{};   // exact coordinates on {1, r2, r3, r6}
    double f_ = 0.0;                // float payload

    void require_exact() const;
    void require_float() const;
    static void require_same(const Scalar& a, const Scalar& b);
};

inline Scalar make_rational(long num, long den) { return Scalar::of_rational(num, den); }
inline Scalar field_mul(const Scalar& a, const Scalar& b) { return a * b; }
inline int field_sign(const Scalar& a) { return a.sign(); }

} // namespace sumform
