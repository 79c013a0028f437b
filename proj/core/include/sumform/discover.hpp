#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sumform/families.hpp"
#include "sumform/residual.hpp"

namespace sumform {

// A list of (x, y) samples with distinct abscissae.
struct SampleSet {
    std::vector<std::pair<Scalar, Scalar>> points;

    // Throws "duplicate-abscissa".
    void validate() const;

    static SampleSet from_function(const IntervalFunction& f, const std::vector<Scalar>& xs);
    // Samples at the rational grid abscissae k/d, k = 0..d; table-form
    // functions yield their own points instead.
    static SampleSet on_grid(const IntervalFunction& f, int d);

    // CSV with an "x,y" header row, scalar text forms.
    std::string to_csv() const;
    static SampleSet parse_csv(const std::string& text, Backend backend);
};

struct FitResult {
    FamilyTag family = FamilyTag::none;
    std::optional<double> slope;
    std::optional<double> intercept;
    std::optional<double> alpha;
    std::optional<double> scale;
    double rms = 0.0;
    bool converged = true;

    std::string to_json() const;
};

// Least-squares line y = slope*x + intercept, closed-form normal equations.
// Needs >= 3 points; throws "degenerate-abscissae" when all x coincide.
FitResult fit_affine_family(const SampleSet& samples);

// Nonlinear least squares for y = scale*x^alpha + slope*x over alpha in
// (0, 8], deterministic multi-start Gauss-Newton (starts 0.5/1.5/2/3/5,
// 200 iterations, step < 1e-12). Needs >= 4 points with >= 3 strictly inside
// (0, 1); throws "insufficient-interior-points" / "no-convergence".
FitResult fit_power_family(const SampleSet& samples);

struct ClassifyReport {
    FamilyTag family = FamilyTag::none;
    bool residual_pass = false;
    ResidualReport residual;
    std::vector<FitResult> fits; // lead first, partners after
    std::string diagnostic;

    std::string to_json() const;
};

// Residual gate first (grid sweep at resolution d); any failure classifies as
// "none". Otherwise each function is fitted against the affine and power
// templates, affine preferred on ties, and the matching family is returned.
FamilyTag classify_solution(const SolutionBundle& bundle, const EquationSpec& spec, int d);
ClassifyReport classify_solution_detailed(const SolutionBundle& bundle,
                                          const EquationSpec& spec, int d);

struct GridSolveResult {
    SampleSet table;          // exact abscissae, float values
    double residual_norm = 0; // ||A x|| over the pair equations alone
    int nullspace_dimension = 0;
    long rows = 0;
};

// Treats the product-argument equation as linear in the unknown lead function
// for fixed partners g: one equation per grid pair, unknowns the lead values
// on V = { (a/d)*(b/d) }, solved by least squares with the value at 1 pinned
// to 1. Throws "system-too-large" past the cap.
GridSolveResult grid_solve_eq110(const std::vector<IntervalFunction>& g, int n, int m,
                                 int d, int cap = 5000);

// Residual norm of a candidate table in the same linear system (substitution
// check). Throws "table-miss" when the table does not cover V.
double grid_table_residual(const std::vector<IntervalFunction>& g, int n, int m, int d,
                           const SampleSet& table);

} // namespace sumform
