#include "sumform/scalar.hpp"

#include <charconv>
#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace sumform {

namespace {

const char* kRadicalNames[3] = {"r2", "r3", "r6"};
const long kRadicands[3] = {2, 3, 6};

// floor(sqrt(m) * 2^bits) as an integer, via integer square root.
mpz_class radical_floor(long m, unsigned bits) {
    mpz_class scaled = mpz_class(m) << (2 * bits);
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    return root;
}

struct Interval {
    Rational lo, hi;
};

// Encloses c0 + c1*r2 + c2*r3 + c3*r6 using 'bits' of radical precision.
Interval enclose(const std::array<Rational, 4>& c, unsigned bits) {
    Interval iv{c[0], c[0]};
    Rational scale(mpz_class(1), mpz_class(1) << bits);
    for (int i = 0; i < 3; ++i) {
        const Rational& ci = c[i + 1];
        if (ci == 0) continue;
        mpz_class fl = radical_floor(kRadicands[i], bits);
        Rational lo = Rational(fl) * scale;
        Rational hi = Rational(fl + 1) * scale;
        if (ci > 0) {
            iv.lo += ci * lo;
            iv.hi += ci * hi;
        } else {
            iv.lo += ci * hi;
            iv.hi += ci * lo;
        }
    }
    iv.lo.canonicalize();
    iv.hi.canonicalize();
    return iv;
}

Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

std::string rational_str(const Rational& r) {
    return r.get_str();
}

bool parse_mpz(const std::string& s, mpz_class& out) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    out = mpz_class(s, 10);
    return true;
}

} // namespace

Rational make_rational_value(const mpz_class& num, const mpz_class& den) {
    if (den == 0) fail("zero-denominator", "rational denominator must be nonzero");
    Rational r(num, den);
    r.canonicalize();   // reduced, denominator positive
    return r;
}

Scalar Scalar::exact(Rational c0) {
    return exact(std::move(c0), Rational(0), Rational(0), Rational(0));
}

Scalar Scalar::exact(Rational c0, Rational c1, Rational c2, Rational c3) {
    Scalar s;
    s.backend_ = Backend::exact;
    s.c_ = {std::move(c0), std::move(c1), std::move(c2), std::move(c3)};
    return s;
}

Scalar Scalar::of_double(double v) {
    Scalar s;
    s.backend_ = Backend::floating;
    s.f_ = v;
    return s;
}

Scalar Scalar::of_rational(long num, long den) {
    return exact(make_rational_value(mpz_class(num), mpz_class(den)));
}

void Scalar::require_exact() const {
    if (backend_ != Backend::exact)
        fail("backend-mismatch", "operation requires the exact backend");
}

void Scalar::require_float() const {
    if (backend_ != Backend::floating)
        fail("backend-mismatch", "operation requires the float backend");
}

void Scalar::require_same(const Scalar& a, const Scalar& b) {
    if (a.backend_ != b.backend_)
        fail("backend-mismatch", "exact and float scalars cannot mix");
}

const std::array<Rational, 4>& Scalar::coords() const {
    require_exact();
    return c_;
}

bool Scalar::is_rational() const {
    require_exact();
    return c_[1] == 0 && c_[2] == 0 && c_[3] == 0;
}

const Rational& Scalar::rational_part() const {
    require_exact();
    return c_[0];
}

double Scalar::float_value() const {
    require_float();
    return f_;
}

bool Scalar::is_zero() const {
    if (backend_ == Backend::floating) return f_ == 0.0;
    return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0;
}

bool Scalar::is_one() const {
    if (backend_ == Backend::floating) return f_ == 1.0;
    return c_[0] == 1 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0;
}

int Scalar::sign() const {
    if (backend_ == Backend::floating) return f_ > 0 ? 1 : (f_ < 0 ? -1 : 0);
    if (is_zero()) return 0;
    if (is_rational()) return sgn(c_[0]);
    for (unsigned bits = 32;; bits *= 2) {
        Interval iv = enclose(c_, bits);
        if (iv.lo > 0) return 1;
        if (iv.hi < 0) return -1;
    }
}

double Scalar::to_double() const {
    if (backend_ == Backend::floating) return f_;
    if (is_rational()) return c_[0].get_d();
    // Refine until the enclosure is narrow relative to its magnitude, then
    // round the midpoint once.
    for (unsigned bits = 64;; bits *= 2) {
        Interval iv = enclose(c_, bits);
        Rational width = iv.hi - iv.lo;
        Rational bound = (Rational(1) + rat_abs(iv.lo) + rat_abs(iv.hi)) /
                         Rational(mpz_class(1) << 48);
        if (width <= bound) {
            Rational mid = (iv.lo + iv.hi) / 2;
            mid.canonicalize();
            return mid.get_d();
        }
    }
}

Scalar Scalar::operator-() const {
    if (backend_ == Backend::floating) return of_double(-f_);
    return exact(-c_[0], -c_[1], -c_[2], -c_[3]);
}

Scalar Scalar::operator+(const Scalar& o) const {
    require_same(*this, o);
    if (backend_ == Backend::floating) return of_double(f_ + o.f_);
    return exact(c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2], c_[3] + o.c_[3]);
}

Scalar Scalar::operator-(const Scalar& o) const {
    return *this + (-o);
}

Scalar Scalar::operator*(const Scalar& o) const {
    require_same(*this, o);
    if (backend_ == Backend::floating) return of_double(f_ * o.f_);
    const auto& a = c_;
    const auto& b = o.c_;
    Rational c0 = a[0] * b[0] + 2 * (a[1] * b[1]) + 3 * (a[2] * b[2]) + 6 * (a[3] * b[3]);
    Rational c1 = a[0] * b[1] + a[1] * b[0] + 3 * (a[2] * b[3] + a[3] * b[2]);
    Rational c2 = a[0] * b[2] + a[2] * b[0] + 2 * (a[1] * b[3] + a[3] * b[1]);
    Rational c3 = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1];
    return exact(std::move(c0), std::move(c1), std::move(c2), std::move(c3));
}

Scalar Scalar::inverse() const {
    if (backend_ == Backend::floating) {
        if (f_ == 0.0) fail("division-by-zero", "cannot invert zero");
        return of_double(1.0 / f_);
    }
    if (is_zero()) fail("division-by-zero", "cannot invert zero");
    // Multiply the three nontrivial Galois conjugates; the full product with
    // *this is the rational field norm.
    Scalar s1 = exact(c_[0], -c_[1], c_[2], -c_[3]);
    Scalar s2 = exact(c_[0], c_[1], -c_[2], -c_[3]);
    Scalar s3 = exact(c_[0], -c_[1], -c_[2], c_[3]);
    Scalar adj = s1 * s2 * s3;
    Scalar norm = *this * adj;
    const Rational& n = norm.rational_part(); // irrational parts cancel exactly
    Rational inv_n = Rational(n.get_den(), n.get_num());
    inv_n.canonicalize();
    const auto& a = adj.coords();
    return exact(a[0] * inv_n, a[1] * inv_n, a[2] * inv_n, a[3] * inv_n);
}

Scalar Scalar::operator/(const Scalar& o) const {
    require_same(*this, o);
    if (backend_ == Backend::floating) {
        if (o.f_ == 0.0) fail("division-by-zero", "division by zero");
        return of_double(f_ / o.f_);
    }
    return *this * o.inverse();
}

Scalar Scalar::pow_int(long e) const {
    if (e < 0) return inverse().pow_int(-e);
    Scalar result = one(backend_);
    Scalar base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

bool Scalar::operator==(const Scalar& o) const {
    require_same(*this, o);
    if (backend_ == Backend::floating) return f_ == o.f_;
    return c_[0] == o.c_[0] && c_[1] == o.c_[1] && c_[2] == o.c_[2] && c_[3] == o.c_[3];
}

std::string Scalar::str() const {
    if (backend_ == Backend::floating) {
        char buf[40];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, f_);
        (void)ec;
        return std::string(buf, end);
    }
    std::string out;
    auto append_term = [&](const Rational& coeff, const char* radical) {
        if (coeff == 0) return;
        Rational mag = rat_abs(coeff);
        if (out.empty()) {
            if (coeff < 0) out += "-";
        } else {
            out += coeff < 0 ? " - " : " + ";
        }
        if (radical == nullptr) {
            out += rational_str(mag);
        } else if (mag == 1) {
            out += radical;
        } else {
            out += rational_str(mag);
            out += "*";
            out += radical;
        }
    };
    append_term(c_[0], nullptr);
    for (int i = 0; i < 3; ++i) append_term(c_[i + 1], kRadicalNames[i]);
    return out.empty() ? "0" : out;
}

Scalar Scalar::parse_exact(const std::string& text) {
    std::array<Rational, 4> coords{Rational(0), Rational(0), Rational(0), Rational(0)};
    size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    auto parse_error = [&]() -> void {
        fail("scalar-parse", "cannot parse scalar text: \"" + text + "\"");
    };

    skip_ws();
    if (pos == text.size()) parse_error();
    bool first = true;
    while (pos < text.size()) {
        int sign = 1;
        skip_ws();
        if (!first) {
            if (text[pos] == '+') { ++pos; }
            else if (text[pos] == '-') { sign = -1; ++pos; }
            else parse_error();
            skip_ws();
        } else if (text[pos] == '-') {
            sign = -1; ++pos;
            skip_ws();
        }
        first = false;

        int slot = 0;
        Rational coeff;
        bool expect_radical = false;
        if (pos < text.size() && text[pos] == 'r') {
            coeff = 1;
        } else {
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) parse_error();
            mpz_class num, den(1);
            if (!parse_mpz(text.substr(start, pos - start), num)) parse_error();
            if (pos < text.size() && text[pos] == '/') {
                ++pos;
                size_t dstart = pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                if (pos == dstart || !parse_mpz(text.substr(dstart, pos - dstart), den)) parse_error();
            }
            coeff = make_rational_value(num, den);
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                expect_radical = true;
            }
        }
        if (expect_radical && (pos >= text.size() || text[pos] != 'r')) parse_error();
        if (pos < text.size() && text[pos] == 'r') {
            ++pos;
            if (pos >= text.size()) parse_error();
            char which = text[pos++];
            if (which == '2') slot = 1;
            else if (which == '3') slot = 2;
            else if (which == '6') slot = 3;
            else parse_error();
        }
        if (sign < 0) coeff = -coeff;
        coords[slot] += coeff;
        skip_ws();
    }
    return exact(coords[0], coords[1], coords[2], coords[3]);
}

Scalar Scalar::parse(const std::string& text, Backend backend) {
    if (backend == Backend::exact) return parse_exact(text);
    // Float backend: plain decimal first, exact grammar as a fallback.
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin) {
        const char* p = end;
        while (*p != '\0' && std::isspace(static_cast<unsigned char>(*p))) ++p;
        if (*p == '\0') return of_double(v);
    }
    return of_double(parse_exact(text).to_double());
}

} // namespace sumform
