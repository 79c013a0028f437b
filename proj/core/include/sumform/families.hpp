#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sumform/equation.hpp"
#include "sumform/maps.hpp"
#include "sumform/scalar.hpp"

namespace sumform {

// Stable labels for the solution families. Each label names one branch of a
// characterization: which equation the bundle solves and which structural
// form its functions take (pure additive, affine-additive, or multiplicative
// combination), plus the two single-distribution representation results.
enum class FamilyTag {
    f31i,   // equation 1.11, affine-additive, general case
    f31ii,  // equation 1.11, affine-additive, unit-sum case
    f33,    // equation 1.11, multiplicative minus additive
    f41,    // equation 1.10, additive lead with arbitrary partners
    f42,    // equation 1.10, affine-additive pair
    f44,    // equation 1.10, multiplicative pair
    f51,    // equation 1.8, transform of f41
    f52,    // equation 1.8, transform of f42
    f54,    // equation 1.8, transform of f44
    r1,     // equation 2.1, constant-sum representation
    r2,     // equation 2.3, zero-sum representation
    none,
};

std::string to_string(FamilyTag tag);
FamilyTag family_from_string(const std::string& label);
EquationId equation_of(FamilyTag tag);

// A fully constructed solution: the equation it solves, the family label,
// the arity, and the function set laid out per equation:
//   1.10 -> { f, g_1..g_m }     1.8 -> { h, k_1..k_m }
//   1.11 -> { phi }             2.1 -> { psi }     2.3 -> { psi_1..psi_m }
struct SolutionBundle {
    EquationId equation = EquationId::eq110;
    FamilyTag family = FamilyTag::none;
    int n = 3;
    int m = 3;
    std::optional<Scalar> lambda;     // equations 1.5/1.8 only
    std::optional<Scalar> constant;   // equation 2.1 only
    std::vector<IntervalFunction> functions;
    std::string params_json = "{}";   // raw constructor parameters, for reports

    const IntervalFunction& lead() const { return functions.front(); }
    // Partner functions (g_j or k_j); empty for single-function equations.
    std::vector<IntervalFunction> partners() const {
        return {functions.begin() + 1, functions.end()};
    }

    Backend backend() const;
    SolutionBundle to_backend(Backend target) const;

    std::string to_json() const;
    static SolutionBundle from_json(const std::string& text);
};

// --- single-distribution representations ------------------------------------

// psi(p) = B(p) - B(1)/k + c/k, the unique shape with sum_i psi(p_i) = c on
// the whole closed simplex. Throws "k-too-small" (k >= 3).
IntervalFunction result1_construct(const AdditiveMap& B, int k, const Scalar& c);
SolutionBundle result1_bundle(const AdditiveMap& B, int k, const Scalar& c);

// psi_j(p) = A(p) + c_j with A(1) + sum_j c_j = 0 enforced
// (throws "constraint-2.5-violated"); m >= 3.
std::vector<IntervalFunction> result2_construct(const AdditiveMap& A,
                                                const std::vector<Scalar>& c);
SolutionBundle result2_bundle(const AdditiveMap& A, const std::vector<Scalar>& c);

// --- equation 1.11 -----------------------------------------------------------

// phi(p) = a(p) + phi0 with a(1) = -n*m*phi0; valid when the case condition
// phi(1) + (n-1)*phi0 != 1 holds (throws "case-condition-violated").
SolutionBundle construct_affine_general(int n, int m, const Rational& phi0,
                                        const std::array<Rational, 3>& tail);

// phi(p) = a(p) + phi0 with a(1) = 1 - n*phi0; the unit-sum case holds by
// construction.
SolutionBundle construct_affine_unit(int n, int m, const Rational& phi0,
                                     const std::array<Rational, 3>& tail);

// phi(p) = M(p) - B(p) with B(1) = 0 (throws "B1-nonzero").
SolutionBundle construct_multiplicative(int n, int m, const MultiplicativeMap& M,
                                        const AdditiveMap& B);

// --- equation 1.10 -----------------------------------------------------------

// f = b with b(1) = 0 (throws "b1-nonzero"); the partner functions are
// arbitrary and supplied by the caller.
SolutionBundle construct_additive_lead(int n, int m, const AdditiveMap& b,
                                       std::vector<IntervalFunction> g);

// f(p) = c*a(p) + f0 and g_j(p) = a(p) + A*(p) + g0_j, where c = f1 + (n-1)*f0
// must be nonzero (throws "c-zero") and a(1), A*(1) are pinned by the family.
// f0, f1 and the sum of the g0_j must be rational in the exact backend
// (throws "needs-rational-parameter").
SolutionBundle construct_affine_pair(int n, int m, const Scalar& f0, const Scalar& f1,
                                     const std::array<Rational, 3>& tail_a,
                                     const std::array<Rational, 3>& tail_astar,
                                     const std::vector<Scalar>& g0);

// f = f1*(M - B), g_j = M - B + A* + g0_j with f1 != 0 ("f1-zero"),
// B(1) = 0 ("b1-nonzero") and A*(1) = -sum_j g0_j ("A*-constraint-violated").
SolutionBundle construct_multiplicative_pair(int n, int m, const Scalar& f1,
                                             const MultiplicativeMap& M,
                                             const AdditiveMap& B,
                                             const AdditiveMap& A_star,
                                             const std::vector<Scalar>& g0);

// --- equation 1.8 (built through the lambda-transform) -----------------------

// h(p) = (b(p) - p)/lambda with b(1) = 0; k_j arbitrary.
SolutionBundle construct_additive_lead_transformed(int n, int m, const Scalar& lambda,
                                                   const AdditiveMap& b,
                                                   std::vector<IntervalFunction> k);

// Transform of the affine pair: requires lambda, h0, h1 rational and
// lambda*(h1 + (n-1)*h0) + 1 != 0 ("c-zero").
SolutionBundle construct_affine_pair_transformed(int n, int m, const Scalar& lambda,
                                                 const Scalar& h0, const Scalar& h1,
                                                 const std::array<Rational, 3>& tail_a,
                                                 const std::array<Rational, 3>& tail_astar,
                                                 const std::vector<Scalar>& k0);

// Transform of the multiplicative pair: requires lambda*h1 + 1 != 0
// ("f1-zero") and A*(1) = -lambda * sum_j k0_j ("A*-constraint-violated").
SolutionBundle construct_multiplicative_pair_transformed(int n, int m, const Scalar& lambda,
                                                         const Scalar& h1,
                                                         const MultiplicativeMap& M,
                                                         const AdditiveMap& B,
                                                         const AdditiveMap& A_star,
                                                         const std::vector<Scalar>& k0);

// --- the lambda-transform between equations 1.8 and 1.10 ---------------------

// f(x) = x + lambda*h(x). Throws "lambda-zero".
IntervalFunction transform_h_to_f(const IntervalFunction& h, const Scalar& lambda);
// h(x) = (f(x) - x)/lambda. Throws "lambda-zero".
IntervalFunction transform_f_to_h(const IntervalFunction& f, const Scalar& lambda);

// Applies the transform to a whole bundle, producing the counterpart bundle
// for the other equation (1.8 <-> 1.10). The family label is mapped along.
SolutionBundle bundle_to_eq110(const SolutionBundle& bundle18);
SolutionBundle bundle_to_eq18(const SolutionBundle& bundle110, const Scalar& lambda);

} // namespace sumform
