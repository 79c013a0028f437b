#pragma once

#include "sumform/maps.hpp"
#include "sumform/scalar.hpp"
#include "sumform/simplex.hpp"

namespace sumform {

// Degree parameter of the non-Shannon entropy; 1 is excluded because the
// normalizer 1 - 2^(1-alpha) vanishes there.
class Alpha {
public:
    explicit Alpha(double value) : value_(value) {
        if (value == 1.0) fail("alpha-is-one", "degree alpha must differ from 1");
    }
    double value() const { return value_; }
    bool is_integer() const {
        return value_ == static_cast<double>(static_cast<long>(value_));
    }
    long integer() const { return static_cast<long>(value_); }

private:
    double value_;
};

// H(P) = (1 - 2^(1-alpha))^-1 * (1 - sum_i p_i^alpha) with 0^alpha := 0.
// Exact when P is exact and alpha is an integer; float otherwise.
Scalar entropy_alpha(const Distribution& P, const Alpha& alpha);

// lambda = 2^(1-alpha) - 1; exact (dyadic) for integer alpha.
Scalar lambda_of_alpha(const Alpha& alpha);

// sum_i h(p_i): reads an entropy value out of a solution's lead function.
Scalar entropy_from_solution(const Distribution& P, const IntervalFunction& h);

// sum_i -p_i log2 p_i with 0*log(0) := 0; float-only diagnostic used to
// anchor the alpha -> 1 limit.
double shannon_bits(const Distribution& P);

} // namespace sumform
