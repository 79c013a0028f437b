#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sumform/equation.hpp"
#include "sumform/families.hpp"
#include "sumform/maps.hpp"
#include "sumform/simplex.hpp"

namespace sumform {

// Which equation to check and at which arity. lambda is required for the
// equations that carry it (1.5, 1.7, 1.8).
struct EquationSpec {
    EquationId id = EquationId::eq110;
    int n = 3;
    int m = 3;
    std::optional<Scalar> lambda;

    static EquationSpec of_bundle(const SolutionBundle& bundle);
    // Throws "k-too-small" / "lambda-zero" on malformed specs.
    void validate() const;
};

// Outcome of a grid sweep. The sign convention is LHS - RHS with the double
// sum on the left, across every equation. The witness is the first pair (in
// enumeration order) attaining the maximum |residual|.
struct ResidualReport {
    EquationSpec spec;
    int d = 6;
    bool exact = true;
    Scalar max_abs_residual;
    std::optional<Distribution> witness_p;
    std::optional<Distribution> witness_q;
    long evaluations = 0;

    // Pass/fail bookkeeping: exact sweeps demand a literal zero, float sweeps
    // allow 1e-9 * (1 + largest |side value| seen).
    bool pass = false;
    double tolerance = 0.0;
    double max_abs_side = 0.0;

    std::string to_json() const;
};

// Pointwise residuals (LHS - RHS). All throw "arity-mismatch" on shape
// errors and "backend-mismatch" on mixed backends.
Scalar residual_eq110(const IntervalFunction& f, const std::vector<IntervalFunction>& g,
                      const Distribution& p, const Distribution& q);
Scalar residual_eq111(const IntervalFunction& phi, const Distribution& p,
                      const Distribution& q);
Scalar residual_eq18(const IntervalFunction& h, const std::vector<IntervalFunction>& k,
                     const Scalar& lambda, const Distribution& p, const Distribution& q);
// Equation 1.5 is the k_j == h special case of 1.8.
Scalar residual_eq15(const IntervalFunction& f, const Scalar& lambda,
                     const Distribution& p, const Distribution& q);
Scalar residual_eq17(const std::vector<std::vector<IntervalFunction>>& f,
                     const std::vector<IntervalFunction>& h,
                     const std::vector<IntervalFunction>& k, const Scalar& lambda,
                     const Distribution& p, const Distribution& q);
// Equations 2.1 (sum psi = c) and 2.3 (sum psi_j = 0).
Scalar residual_constant_sum(const IntervalFunction& psi, const Scalar& c,
                             const Distribution& P);
Scalar residual_zero_sum(const std::vector<IntervalFunction>& psi, const Distribution& P);

struct VerifyOptions {
    bool include_irrationals = true; // append the fixed irrational fixtures
    int random_pairs = 0;            // extra boundary-stratified random pairs
    std::uint64_t seed = 0;
};

// Evaluates the bundle's residual over the full d-grid (both sides for
// two-distribution equations), in deterministic enumeration order.
ResidualReport verify_over_grid(const EquationSpec& spec, const SolutionBundle& bundle,
                                int d, const VerifyOptions& options = {});

// Equation 1.7 has no solution-family bundles; its sweep takes the function
// shapes directly.
ResidualReport verify_eq17_over_grid(const std::vector<std::vector<IntervalFunction>>& f,
                                     const std::vector<IntervalFunction>& h,
                                     const std::vector<IntervalFunction>& k,
                                     const Scalar& lambda, int n, int m, int d,
                                     const VerifyOptions& options = {});

} // namespace sumform
