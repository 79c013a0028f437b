#include "sumform/entropy.hpp"

#include <cmath>

namespace sumform {

namespace {

Rational two_pow(long e) {
    if (e >= 0) return Rational(mpz_class(1) << e);
    Rational r(mpz_class(1), mpz_class(1) << (-e));
    r.canonicalize();
    return r;
}

} // namespace

Scalar entropy_alpha(const Distribution& P, const Alpha& alpha) {
    if (P.backend() == Backend::exact && alpha.is_integer()) {
        long a = alpha.integer();
        Scalar power_sum = Scalar();
        for (const Scalar& p : P.components())
            if (!p.is_zero()) power_sum += p.pow_int(a); // 0^alpha := 0
        Scalar normalizer = Scalar::exact(Rational(1) - two_pow(1 - a));
        return (Scalar::of_int(1) - power_sum) / normalizer;
    }
    double a = alpha.value();
    double power_sum = 0.0;
    for (const Scalar& p : P.components()) {
        double v = p.to_double();
        if (v != 0.0) power_sum += std::pow(v, a);
    }
    double normalizer = 1.0 - std::pow(2.0, 1.0 - a);
    return Scalar::of_double((1.0 - power_sum) / normalizer);
}

Scalar lambda_of_alpha(const Alpha& alpha) {
    if (alpha.is_integer())
        return Scalar::exact(two_pow(1 - alpha.integer()) - Rational(1));
    return Scalar::of_double(std::pow(2.0, 1.0 - alpha.value()) - 1.0);
}

Scalar entropy_from_solution(const Distribution& P, const IntervalFunction& h) {
    Scalar sum = Scalar::zero(P.backend());
    for (const Scalar& p : P.components()) sum += h.eval(p);
    return sum;
}

double shannon_bits(const Distribution& P) {
    double H = 0.0;
    for (const Scalar& p : P.components()) {
        double v = p.to_double();
        if (v > 0.0) H -= v * std::log2(v);
    }
    return H;
}

} // namespace sumform
