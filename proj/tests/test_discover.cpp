#include <doctest.h>

#include <cmath>
#include <functional>

#include "sumform/discover.hpp"
#include "test_support.hpp"

using namespace sumform;

namespace {

std::string error_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

SampleSet sampled(const IntervalFunction& f, int d) { return SampleSet::on_grid(f, d); }

std::vector<IntervalFunction> copies(const IntervalFunction& f, int m) {
    return std::vector<IntervalFunction>(static_cast<size_t>(m), f);
}

} // namespace

TEST_CASE("affine fits recover exact linear data") {
    IntervalFunction phi =
        IntervalFunction::affine(AdditiveMap::linear(-1), Scalar::of_rational(1, 9));
    FitResult fit = fit_affine_family(sampled(phi, 6));
    CHECK(*fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(*fit.intercept == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(fit.rms == doctest::Approx(0.0));

    FitResult zero = fit_affine_family(sampled(IntervalFunction::zero(), 6));
    CHECK(*zero.slope == doctest::Approx(0.0));
    CHECK(*zero.intercept == doctest::Approx(0.0));

    // A parabola is visibly not affine.
    FitResult square = fit_affine_family(sampled(IntervalFunction::power(2), 6));
    CHECK(square.rms > 0.01);

    CHECK(error_code([] {
              SampleSet s;
              s.points.emplace_back(Scalar(), Scalar());
              s.points.emplace_back(Scalar::of_int(1), Scalar::of_int(1));
              fit_affine_family(s);
          }) == "too-few-samples");

    SampleSet degenerate;
    degenerate.points.emplace_back(Scalar::of_double(0.5), Scalar::of_double(0.0));
    degenerate.points.emplace_back(Scalar::of_double(0.5), Scalar::of_double(1.0));
    degenerate.points.emplace_back(Scalar::of_double(0.5), Scalar::of_double(2.0));
    // Distinct-abscissae validation happens upstream; feed the fitter directly.
    CHECK(error_code([&] { fit_affine_family(degenerate); }) == "degenerate-abscissae");
}

TEST_CASE("power fits recover exponents from clean samples") {
    FitResult fit = fit_power_family(sampled(IntervalFunction::power(2), 12));
    CHECK(std::abs(*fit.alpha - 2.0) < 1e-9);
    CHECK(std::abs(*fit.scale - 1.0) < 1e-9);
    CHECK(fit.rms < 1e-10);

    FitResult cube = fit_power_family(sampled(IntervalFunction::power(3), 12));
    CHECK(std::abs(*cube.alpha - 3.0) < 1e-9);

    // The identity is both affine and a power law; any representation with
    // near-zero rms is acceptable.
    FitResult ident = fit_power_family(sampled(IntervalFunction::linear(1), 12));
    CHECK(ident.rms < 1e-9);
    double reconstructed = *ident.scale * std::pow(0.5, *ident.alpha) + *ident.slope * 0.5;
    CHECK(reconstructed == doctest::Approx(0.5).epsilon(1e-9));

    // A discontinuous multiplicative map is not a power law: either no start
    // converges or the converged fit keeps a visible residual.
    IntervalFunction support = IntervalFunction::mult_combo(
        Scalar::of_int(1), MultiplicativeMap::support_indicator(), AdditiveMap(), Scalar());
    try {
        FitResult bad = fit_power_family(sampled(support, 12));
        CHECK(bad.rms > 1e-3);
    } catch (const Error& e) {
        CHECK(std::string(e.code()) == "no-convergence");
    }

    SampleSet few;
    few.points.emplace_back(Scalar(), Scalar());
    few.points.emplace_back(Scalar::of_int(1), Scalar::of_int(1));
    few.points.emplace_back(Scalar::of_rational(1, 2), Scalar::of_rational(1, 4));
    CHECK(error_code([&] { fit_power_family(few); }) == "insufficient-interior-points");
}

TEST_CASE("classification recovers the constructing family") {
    std::vector<Scalar> zeros3 = {Scalar(), Scalar(), Scalar()};

    SolutionBundle squares = construct_multiplicative_pair(
        3, 3, Scalar::of_int(2), MultiplicativeMap::power(2), AdditiveMap(), AdditiveMap(),
        zeros3);
    CHECK(classify_solution(squares, EquationSpec::of_bundle(squares), 4) == FamilyTag::f44);

    SolutionBundle additive = construct_additive_lead(
        3, 3, AdditiveMap(), copies(IntervalFunction::power(3), 3));
    CHECK(classify_solution(additive, EquationSpec::of_bundle(additive), 4) ==
          FamilyTag::f41);

    SolutionBundle affine = construct_affine_pair(
        3, 3, Scalar::of_rational(1, 4), Scalar::of_int(1), {0, 0, 0}, {0, 0, 0},
        {Scalar::of_rational(1, 2), Scalar::of_int(-1), Scalar::of_rational(1, 2)});
    CHECK(classify_solution(affine, EquationSpec::of_bundle(affine), 4) == FamilyTag::f42);

    // The identity solves the equation both ways; affine wins the tie.
    SolutionBundle identity =
        construct_affine_pair(3, 3, Scalar(), Scalar::of_int(1), {0, 0, 0}, {0, 0, 0}, zeros3);
    CHECK(classify_solution(identity, EquationSpec::of_bundle(identity), 4) ==
          FamilyTag::f42);

    // Mismatched shapes fail the residual gate and classify as none.
    SolutionBundle wrong = squares;
    wrong.functions[1] = IntervalFunction::linear(1);
    wrong.functions[2] = IntervalFunction::linear(1);
    wrong.functions[3] = IntervalFunction::linear(1);
    CHECK(classify_solution(wrong, EquationSpec::of_bundle(wrong), 4) == FamilyTag::none);
}

TEST_CASE("classification across the other equations") {
    SolutionBundle phi_affine = construct_affine_general(3, 3, make_rational_value(1, 9),
                                                         {0, 0, 0});
    CHECK(classify_solution(phi_affine, EquationSpec::of_bundle(phi_affine), 4) ==
          FamilyTag::f31i);

    SolutionBundle phi_unit = construct_affine_unit(3, 3, Rational(0), {0, 0, 0});
    CHECK(classify_solution(phi_unit, EquationSpec::of_bundle(phi_unit), 4) ==
          FamilyTag::f31ii);

    SolutionBundle phi_mult = construct_multiplicative(3, 3, MultiplicativeMap::power(2),
                                                       AdditiveMap());
    CHECK(classify_solution(phi_mult, EquationSpec::of_bundle(phi_mult), 4) ==
          FamilyTag::f33);

    SolutionBundle trans = construct_multiplicative_pair_transformed(
        3, 3, Scalar::of_rational(-1, 2), Scalar::of_int(-2), MultiplicativeMap::power(2),
        AdditiveMap(), AdditiveMap(), {Scalar(), Scalar(), Scalar()});
    CHECK(classify_solution(trans, EquationSpec::of_bundle(trans), 4) == FamilyTag::f54);

    SolutionBundle r1 = result1_bundle(AdditiveMap::linear(2), 3, Scalar::of_int(5));
    CHECK(classify_solution(r1, EquationSpec::of_bundle(r1), 6) == FamilyTag::r1);

    SolutionBundle r2 = result2_bundle(
        AdditiveMap::linear(1),
        {Scalar::of_rational(-1, 3), Scalar::of_rational(-1, 3), Scalar::of_rational(-1, 3)});
    CHECK(classify_solution(r2, EquationSpec::of_bundle(r2), 6) == FamilyTag::r2);
}

TEST_CASE("classification never reports a family past the residual gate") {
    SolutionBundle squares = construct_multiplicative_pair(
        3, 3, Scalar::of_int(1), MultiplicativeMap::power(2), AdditiveMap(), AdditiveMap(),
        {Scalar(), Scalar(), Scalar()});
    SolutionBundle broken = squares;
    broken.functions[0] = broken.functions[0].plus_constant(Scalar::of_rational(1, 10));
    ClassifyReport report =
        classify_solution_detailed(broken, EquationSpec::of_bundle(broken), 4);
    CHECK_FALSE(report.residual_pass);
    CHECK(report.family == FamilyTag::none);
}

TEST_CASE("discontinuous multiplicative solutions classify as none with a diagnostic") {
    SolutionBundle support = construct_multiplicative(3, 3,
                                                      MultiplicativeMap::support_indicator(),
                                                      AdditiveMap());
    ClassifyReport report =
        classify_solution_detailed(support, EquationSpec::of_bundle(support), 4);
    CHECK(report.residual_pass);
    CHECK(report.family == FamilyTag::none);
    CHECK_FALSE(report.diagnostic.empty());
}

TEST_CASE("grid solver reproduces known solution tables") {
    // Partners fixed to the identity: the identity table zeroes the system.
    std::vector<IntervalFunction> ident = copies(IntervalFunction::linear(1), 3);
    SampleSet identity_table;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) {
            Scalar v = Scalar::of_rational(a, 4) * Scalar::of_rational(b, 4);
            bool seen = false;
            for (const auto& [x, y] : identity_table.points) seen |= (x == v);
            if (!seen) identity_table.points.emplace_back(v, v);
        }
    CHECK(grid_table_residual(ident, 3, 3, 4, identity_table) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // Zero partners force a table annihilated by the double sum; zero works.
    std::vector<IntervalFunction> zeros = copies(IntervalFunction::zero(), 3);
    SampleSet zero_table = identity_table;
    for (auto& [x, y] : zero_table.points) y = Scalar();
    CHECK(grid_table_residual(zeros, 3, 3, 4, zero_table) == doctest::Approx(0.0));

    // Identity partners: the pinned solution is the identity table and the
    // solution space is the predicted one-parameter family.
    GridSolveResult ident_solved = grid_solve_eq110(ident, 3, 3, 4);
    CHECK(ident_solved.nullspace_dimension == 1);
    for (const auto& [x, y] : ident_solved.table.points)
        CHECK(std::abs(y.to_double() - x.to_double()) < 1e-9);

    // Square partners: the pinned least-squares solution lies on the
    // predicted family, scale*v^2 up to an additive direction vanishing at 1.
    std::vector<IntervalFunction> squares = copies(IntervalFunction::power(2), 3);
    GridSolveResult solved = grid_solve_eq110(squares, 3, 3, 4);
    CHECK(solved.residual_norm < 1e-9);
    CHECK(solved.nullspace_dimension == 1);
    double num = 0, den = 0;
    for (const auto& [x, y] : solved.table.points) {
        double v = x.to_double();
        num += y.to_double() * v * v;
        den += v * v * v * v;
    }
    double scale = num / den;
    double sq = 0;
    for (const auto& [x, y] : solved.table.points) {
        double v = x.to_double();
        double r = y.to_double() - scale * v * v;
        sq += r * r;
    }
    CHECK(std::sqrt(sq / static_cast<double>(solved.table.points.size())) < 1e-9);

    CHECK(error_code([&] { grid_solve_eq110(squares, 3, 3, 12, 10); }) ==
          "system-too-large");
}

TEST_CASE("solver tables substitute back into the system") {
    // Tables sampled from constructed solutions have zero residual norm,
    // whichever family shape produced them.
    auto lead_table = [](const SolutionBundle& bundle, int d) {
        SampleSet table;
        for (int a = 0; a <= d; ++a)
            for (int b = 0; b <= d; ++b) {
                Scalar v = Scalar::of_rational(a, d) * Scalar::of_rational(b, d);
                bool seen = false;
                for (const auto& [x, y] : table.points) seen |= (x == v);
                if (!seen) table.points.emplace_back(v, bundle.lead().eval(v));
            }
        return table;
    };

    std::vector<SolutionBundle> bundles = {
        construct_multiplicative_pair(3, 3, Scalar::of_int(1), MultiplicativeMap::power(2),
                                      AdditiveMap(), AdditiveMap(),
                                      {Scalar(), Scalar(), Scalar()}),
        construct_affine_pair(3, 3, Scalar::of_rational(-1, 3), Scalar::of_int(2),
                              {0, 0, 0}, {0, 0, 0},
                              {Scalar::of_int(1), Scalar::of_int(1), Scalar::of_int(-2)}),
        construct_additive_lead(3, 3, AdditiveMap(),
                                copies(IntervalFunction::power(3), 3)),
    };
    for (const SolutionBundle& bundle : bundles)
        CHECK(grid_table_residual(bundle.partners(), 3, 3, 4, lead_table(bundle, 4)) <
              1e-10);

    std::vector<IntervalFunction> squares = copies(IntervalFunction::power(2), 3);
    SampleSet partial;
    partial.points.emplace_back(Scalar::of_int(1), Scalar::of_int(1));
    CHECK(error_code([&] { grid_table_residual(squares, 3, 3, 4, partial); }) ==
          "table-miss");
}

TEST_CASE("sample sets round-trip through CSV") {
    SampleSet s = sampled(IntervalFunction::power(2), 4);
    std::string csv = s.to_csv();
    CHECK(csv.substr(0, 4) == "x,y\n");
    SampleSet parsed = SampleSet::parse_csv(csv, Backend::exact);
    REQUIRE(parsed.points.size() == s.points.size());
    for (size_t i = 0; i < s.points.size(); ++i) {
        CHECK(parsed.points[i].first == s.points[i].first);
        CHECK(parsed.points[i].second == s.points[i].second);
    }

    CHECK(error_code([] {
              SampleSet dup;
              dup.points.emplace_back(Scalar(), Scalar());
              dup.points.emplace_back(Scalar(), Scalar::of_int(1));
              dup.validate();
          }) == "duplicate-abscissa");
}

TEST_CASE("fit results serialize with their parameters") {
    FitResult fit = fit_power_family(sampled(IntervalFunction::power(2), 12));
    fit.family = FamilyTag::f44;
    std::string json = fit.to_json();
    CHECK(json.find("\"family\":\"4.4\"") != std::string::npos);
    CHECK(json.find("\"alpha\":") != std::string::npos);
    CHECK(json.find("\"rms\":") != std::string::npos);
}
