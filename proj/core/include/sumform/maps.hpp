#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sumform/scalar.hpp"

namespace sumform {

// A Q-linear map on the scalar field, determined by the rational values it
// assigns to the basis elements {1, r2, r3, r6}. This is the desk-scale
// analogue of a Hamel-basis additive function: additivity holds by
// construction, and a nonzero tail (t1, t2, t3) makes the map non-measurable
// in spirit while staying finitely representable.
class AdditiveMap {
public:
    AdditiveMap() : t_{Rational(0), Rational(0), Rational(0), Rational(0)} {}
    AdditiveMap(Rational t0, Rational t1, Rational t2, Rational t3)
        : t_{std::move(t0), std::move(t1), std::move(t2), std::move(t3)} {}

    static AdditiveMap linear(Rational slope) {
        return AdditiveMap(std::move(slope), 0, 0, 0);
    }

    const std::array<Rational, 4>& basis_values() const { return t_; }
    const Rational& at_one() const { return t_[0]; }
    bool is_linear() const { return t_[1] == 0 && t_[2] == 0 && t_[3] == 0; }
    bool is_zero() const { return t_[0] == 0 && is_linear(); }

    // t0*c0 + t1*c1 + t2*c2 + t3*c3; rational-valued on exact scalars.
    // Float inputs are accepted only for linear maps
    // (throws "nonlinear-additive-needs-exact").
    Scalar eval(const Scalar& x) const;

    AdditiveMap operator+(const AdditiveMap& o) const;
    AdditiveMap operator-(const AdditiveMap& o) const;
    AdditiveMap operator-() const;
    AdditiveMap scaled(const Rational& factor) const;

    bool operator==(const AdditiveMap& o) const { return t_ == o.t_; }

private:
    std::array<Rational, 4> t_;
};

// A multiplicative function on [0,1]: M(0)=0, M(1)=1, M(pq)=M(p)M(q).
// Three kinds: the power law p^alpha (with 0^alpha := 0), the support
// indicator (1 on (0,1]), and the map that is 1 only at 1.
class MultiplicativeMap {
public:
    enum class Kind { power, support_indicator, one_at_one };

    // Integer exponent keeps the exact backend; throws "nonpositive-exponent".
    static MultiplicativeMap power(long alpha);
    // Real exponent forces the float backend; throws "nonpositive-exponent".
    static MultiplicativeMap power_real(double alpha);
    static MultiplicativeMap support_indicator();
    static MultiplicativeMap one_at_one();

    Kind kind() const { return kind_; }
    bool has_integer_exponent() const { return integer_exponent_; }
    long exponent_int() const { return alpha_int_; }
    double exponent() const { return integer_exponent_ ? static_cast<double>(alpha_int_) : alpha_real_; }

    // Throws "out-of-interval" outside [0,1]; a real exponent on an exact
    // scalar throws "backend-mismatch".
    Scalar eval(const Scalar& x) const;

private:
    Kind kind_ = Kind::power;
    bool integer_exponent_ = true;
    long alpha_int_ = 1;
    double alpha_real_ = 1.0;
};

// An evaluable function on [0,1] with a declared symbolic form, so that
// verification reports are reproducible from their JSON serialization.
//
// Forms:
//   affine_additive  a(x) + const
//   mult_combo       scale * (M(x) - B(x)) + const
//   transformed      (inner(x) - x) / lambda
//   lifted           x + lambda * inner(x)        (inverse of transformed)
//   table            lookup at listed abscissae only
class IntervalFunction {
public:
    struct Affine {
        AdditiveMap map;
        Scalar constant;
    };
    struct MultCombo {
        Scalar scale;
        MultiplicativeMap mult;
        AdditiveMap sub;
        Scalar constant;
    };
    struct Transformed {
        std::shared_ptr<const IntervalFunction> inner;
        Scalar lambda;
    };
    struct Lifted {
        std::shared_ptr<const IntervalFunction> inner;
        Scalar lambda;
    };
    struct Table {
        std::vector<std::pair<Scalar, Scalar>> points;
    };
    using Form = std::variant<Affine, MultCombo, Transformed, Lifted, Table>;

    IntervalFunction() : form_(Affine{AdditiveMap(), Scalar()}) {}

    static IntervalFunction affine(AdditiveMap map, Scalar constant);
    static IntervalFunction mult_combo(Scalar scale, MultiplicativeMap mult,
                                       AdditiveMap sub, Scalar constant);
    // Throws "lambda-zero".
    static IntervalFunction transformed(IntervalFunction inner, Scalar lambda);
    static IntervalFunction lifted(IntervalFunction inner, Scalar lambda);
    // Throws "duplicate-abscissa" on repeated x values.
    static IntervalFunction table(std::vector<std::pair<Scalar, Scalar>> points);

    static IntervalFunction zero() { return affine(AdditiveMap(), Scalar()); }
    static IntervalFunction constant(Scalar c) { return affine(AdditiveMap(), std::move(c)); }
    static IntervalFunction power(long alpha);         // x^alpha as a mult_combo
    static IntervalFunction linear(Rational slope);    // slope * x on rationals

    const Form& form() const { return form_; }

    // Backend of the embedded scalars (empty tables count as exact).
    Backend backend() const;

    // Throws "table-miss" for unlisted table abscissae and propagates the
    // backend rules of the parts.
    Scalar eval(const Scalar& x) const;

    // Adds a constant to the function value (used by perturbation controls).
    IntervalFunction plus_constant(const Scalar& c) const;

    // Explicit backend conversion; exact -> float rounds every embedded
    // scalar and requires linear additive parts.
    IntervalFunction to_backend(Backend target) const;

    // JSON function-spec schema (stable field order, scalar text forms).
    std::string to_json() const;
    static IntervalFunction from_json(const std::string& text);

private:
    explicit IntervalFunction(Form f) : form_(std::move(f)) {}
    Form form_;
};

} // namespace sumform
