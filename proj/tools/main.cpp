// sumform: construct, verify, and classify solutions of the sum-form
// functional equations on the closed probability simplex.
//
// Subcommands: verify | construct | entropy | classify | solve-grid.
// Outputs are deterministic for a fixed command line and seed; errors leave
// a single-line JSON object on stderr. Exit codes: 0 success, 1 verification
// failure, 2 usage or validation error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumform/discover.hpp"
#include "sumform/entropy.hpp"
#include "sumform/families.hpp"
#include "sumform/residual.hpp"

using namespace sumform;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string equation;
    std::string family;
    std::string input_path;
    std::string function_path;
    std::string samples_path;
    std::string out_path = "-";
    std::string backend = "exact";
    int n = 3;
    int m = 3;
    int d = 6;
    int k = 3;
    int cap = 5000;
    std::optional<double> alpha;
    std::string lambda_text;
    std::string perturb_text;
    bool no_irrationals = false;
    int random_pairs = 0;
    std::uint64_t seed = 0;

    // family parameters ("" = not provided; family defaults apply)
    std::string phi0;
    std::string f0;
    std::string f1;
    std::string h0;
    std::string h1;
    std::string c_text;
    std::string mult = "power:2";
    std::string map_text;
    std::string astar_text = "0,0,0,0";
    std::string tail_text = "0,0,0";
    std::string astar_tail_text = "0,0,0";
    std::string g0_text;
    std::string k0_text;
    std::string partner_text = "power:3";
    std::string dist_text;
    std::string g_text = "power:2";

    Backend backend_enum() const {
        if (backend == "exact") return Backend::exact;
        if (backend == "float") return Backend::floating;
        fail("usage", "--backend must be exact or float");
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io-error", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& out_path, const std::string& payload) {
    if (out_path == "-" || out_path.empty()) {
        std::cout << payload << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) fail("io-error", "cannot write " + out_path);
    out << payload << "\n";
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> cells;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, sep)) cells.push_back(cell);
    return cells;
}

Rational parse_rational(const std::string& text, const char* what) {
    Scalar s = Scalar::parse_exact(text);
    if (!s.is_rational())
        fail("needs-rational-parameter", std::string(what) + " must be rational");
    return s.rational_part();
}

std::array<Rational, 3> parse_tail(const std::string& text) {
    auto cells = split(text, ',');
    if (cells.size() != 3) fail("usage", "tails take three comma-separated rationals");
    return {parse_rational(cells[0], "tail"), parse_rational(cells[1], "tail"),
            parse_rational(cells[2], "tail")};
}

AdditiveMap parse_map(const std::string& text) {
    auto cells = split(text, ',');
    if (cells.size() != 4)
        fail("usage", "additive maps take four comma-separated rationals");
    return AdditiveMap(parse_rational(cells[0], "map"), parse_rational(cells[1], "map"),
                       parse_rational(cells[2], "map"), parse_rational(cells[3], "map"));
}

std::vector<Scalar> parse_scalars(const std::string& text, int expected, const char* what) {
    std::vector<Scalar> out;
    if (!text.empty())
        for (const std::string& cell : split(text, ',')) out.push_back(Scalar::parse_exact(cell));
    if (out.empty()) out.assign(static_cast<size_t>(expected), Scalar());
    if (static_cast<int>(out.size()) != expected)
        fail("usage", std::string(what) + " needs " + std::to_string(expected) + " entries");
    return out;
}

MultiplicativeMap parse_mult(const std::string& text, std::optional<double> alpha) {
    if (alpha) {
        if (*alpha == static_cast<double>(static_cast<long>(*alpha)))
            return MultiplicativeMap::power(static_cast<long>(*alpha));
        return MultiplicativeMap::power_real(*alpha);
    }
    if (text == "support") return MultiplicativeMap::support_indicator();
    if (text == "one-at-one") return MultiplicativeMap::one_at_one();
    if (text.rfind("power:", 0) == 0) {
        std::string arg = text.substr(6);
        double v = std::stod(arg);
        if (v == static_cast<double>(static_cast<long>(v)))
            return MultiplicativeMap::power(static_cast<long>(v));
        return MultiplicativeMap::power_real(v);
    }
    fail("usage", "--mult takes power:<alpha>, support, or one-at-one");
}

IntervalFunction parse_partner(const std::string& text) {
    if (text == "identity") return IntervalFunction::linear(1);
    if (text == "zero") return IntervalFunction::zero();
    if (text == "support")
        return IntervalFunction::mult_combo(Scalar::of_int(1),
                                            MultiplicativeMap::support_indicator(),
                                            AdditiveMap(), Scalar());
    if (text == "one-at-one")
        return IntervalFunction::mult_combo(Scalar::of_int(1),
                                            MultiplicativeMap::one_at_one(), AdditiveMap(),
                                            Scalar());
    if (text.rfind("power:", 0) == 0)
        return IntervalFunction::power(std::stol(text.substr(6)));
    if (!text.empty() && text.front() == '{') return IntervalFunction::from_json(text);
    return IntervalFunction::from_json(slurp(text));
}

Scalar effective_lambda(const Options& opt) {
    if (!opt.lambda_text.empty()) {
        Scalar l = Scalar::parse_exact(opt.lambda_text);
        if (l.is_zero()) fail("lambda-zero", "lambda must be nonzero");
        return l;
    }
    if (opt.alpha) return lambda_of_alpha(Alpha(*opt.alpha));
    return Scalar::of_rational(-1, 2); // alpha = 2 default
}

SolutionBundle construct_from_flags(const Options& opt) {
    FamilyTag tag = family_from_string(opt.family);
    int n = opt.n;
    int m = opt.m;
    switch (tag) {
    case FamilyTag::f31i:
        return construct_affine_general(
            n, m, parse_rational(opt.phi0.empty() ? "1/9" : opt.phi0, "--phi0"),
            parse_tail(opt.tail_text));
    case FamilyTag::f31ii:
        return construct_affine_unit(
            n, m, parse_rational(opt.phi0.empty() ? "0" : opt.phi0, "--phi0"),
            parse_tail(opt.tail_text));
    case FamilyTag::f33:
        return construct_multiplicative(
            n, m, parse_mult(opt.mult, opt.alpha),
            opt.map_text.empty() ? AdditiveMap() : parse_map(opt.map_text));
    case FamilyTag::f41: {
        AdditiveMap b = opt.map_text.empty() ? AdditiveMap(0, 7, 0, 0)
                                             : parse_map(opt.map_text);
        std::vector<IntervalFunction> g(static_cast<size_t>(m),
                                        parse_partner(opt.partner_text));
        return construct_additive_lead(n, m, b, std::move(g));
    }
    case FamilyTag::f42:
        return construct_affine_pair(
            n, m, Scalar::parse_exact(opt.f0.empty() ? "0" : opt.f0),
            Scalar::parse_exact(opt.f1.empty() ? "1" : opt.f1), parse_tail(opt.tail_text),
            parse_tail(opt.astar_tail_text), parse_scalars(opt.g0_text, m, "--g0"));
    case FamilyTag::f44:
        return construct_multiplicative_pair(
            n, m, Scalar::parse_exact(opt.f1.empty() ? "1" : opt.f1),
            parse_mult(opt.mult, opt.alpha),
            opt.map_text.empty() ? AdditiveMap() : parse_map(opt.map_text),
            parse_map(opt.astar_text), parse_scalars(opt.g0_text, m, "--g0"));
    case FamilyTag::f51: {
        AdditiveMap b = opt.map_text.empty() ? AdditiveMap(0, 7, 0, 0)
                                             : parse_map(opt.map_text);
        std::vector<IntervalFunction> k(static_cast<size_t>(m),
                                        parse_partner(opt.partner_text));
        return construct_additive_lead_transformed(n, m, effective_lambda(opt), b,
                                                   std::move(k));
    }
    case FamilyTag::f52:
        return construct_affine_pair_transformed(
            n, m, effective_lambda(opt), Scalar::parse_exact(opt.h0.empty() ? "0" : opt.h0),
            Scalar::parse_exact(opt.h1.empty() ? "0" : opt.h1), parse_tail(opt.tail_text),
            parse_tail(opt.astar_tail_text), parse_scalars(opt.k0_text, m, "--k0"));
    case FamilyTag::f54: {
        return construct_multiplicative_pair_transformed(
            n, m, effective_lambda(opt), Scalar::parse_exact(opt.h1.empty() ? "-2" : opt.h1),
            parse_mult(opt.mult, opt.alpha),
            opt.map_text.empty() ? AdditiveMap() : parse_map(opt.map_text),
            parse_map(opt.astar_text), parse_scalars(opt.k0_text, m, "--k0"));
    }
    case FamilyTag::r1: {
        AdditiveMap B = opt.map_text.empty() ? AdditiveMap::linear(2)
                                             : parse_map(opt.map_text);
        Scalar c = opt.c_text.empty() ? Scalar::of_int(5) : Scalar::parse_exact(opt.c_text);
        return result1_bundle(B, opt.k, c);
    }
    case FamilyTag::r2: {
        AdditiveMap A = opt.map_text.empty() ? AdditiveMap::linear(1)
                                             : parse_map(opt.map_text);
        std::vector<Scalar> c;
        if (opt.c_text.empty())
            c.assign(static_cast<size_t>(opt.m),
                     Scalar::exact(Rational(-A.at_one() / opt.m)));
        else
            for (const std::string& cell : split(opt.c_text, ','))
                c.push_back(Scalar::parse_exact(cell));
        return result2_bundle(A, c);
    }
    case FamilyTag::none:
        break;
    }
    fail("unknown-family", "no constructor for family \"" + opt.family + "\"");
}

SolutionBundle load_or_construct_bundle(const Options& opt) {
    SolutionBundle bundle;
    if (!opt.input_path.empty()) {
        bundle = SolutionBundle::from_json(slurp(opt.input_path));
    } else if (!opt.function_path.empty()) {
        if (opt.equation.empty())
            fail("usage", "--function needs --equation");
        bundle.equation = equation_from_string(opt.equation);
        bundle.family = FamilyTag::none;
        bundle.n = single_distribution(bundle.equation) ? opt.k : opt.n;
        bundle.m = opt.m;
        IntervalFunction fn = IntervalFunction::from_json(slurp(opt.function_path));
        bundle.functions.push_back(fn);
        if (bundle.equation == EquationId::eq110 || bundle.equation == EquationId::eq18)
            for (int j = 0; j < opt.m; ++j) bundle.functions.push_back(fn);
        if (needs_lambda(bundle.equation)) bundle.lambda = effective_lambda(opt);
        if (bundle.equation == EquationId::eq21)
            bundle.constant = opt.c_text.empty() ? Scalar::of_int(1)
                                                 : Scalar::parse_exact(opt.c_text);
        if (bundle.equation == EquationId::eq23)
            bundle.functions.assign(static_cast<size_t>(bundle.n), fn);
    } else if (!opt.family.empty()) {
        bundle = construct_from_flags(opt);
    } else {
        fail("usage", "verify needs --input, --function, or --family");
    }
    if (!opt.equation.empty() &&
        equation_from_string(opt.equation) != bundle.equation)
        fail("usage", "--equation disagrees with the bundle");
    if (!opt.perturb_text.empty())
        bundle.functions[0] =
            bundle.functions[0].plus_constant(Scalar::parse_exact(opt.perturb_text));
    if (opt.backend_enum() == Backend::floating)
        bundle = bundle.to_backend(Backend::floating);
    return bundle;
}

int run_verify(const Options& opt) {
    if (!opt.equation.empty() && equation_from_string(opt.equation) == EquationId::eq17) {
        // No bundle form exists for the doubly-indexed equation; read shapes.
        if (opt.input_path.empty()) fail("usage", "equation 1.7 needs --input");
        ordered_json j = ordered_json::parse(slurp(opt.input_path), nullptr, false);
        if (j.is_discarded()) fail("schema-violation", ": not valid JSON");
        if (!j.contains("f") || !j.contains("h") || !j.contains("k"))
            fail("schema-violation", ": equation 1.7 input needs f, h, k");
        std::vector<std::vector<IntervalFunction>> f;
        std::vector<IntervalFunction> h, k;
        for (const auto& row : j["f"]) {
            std::vector<IntervalFunction> cells;
            for (const auto& cell : row)
                cells.push_back(IntervalFunction::from_json(cell.dump()));
            f.push_back(std::move(cells));
        }
        for (const auto& cell : j["h"])
            h.push_back(IntervalFunction::from_json(cell.dump()));
        for (const auto& cell : j["k"])
            k.push_back(IntervalFunction::from_json(cell.dump()));
        VerifyOptions vo;
        vo.include_irrationals = !opt.no_irrationals;
        ResidualReport report = verify_eq17_over_grid(f, h, k, effective_lambda(opt),
                                                      opt.n, opt.m, opt.d, vo);
        emit(opt.out_path, report.to_json());
        return report.pass ? 0 : 1;
    }

    SolutionBundle bundle = load_or_construct_bundle(opt);
    EquationSpec spec = EquationSpec::of_bundle(bundle);
    if (needs_lambda(spec.id) && !spec.lambda) spec.lambda = effective_lambda(opt);
    VerifyOptions vo;
    vo.include_irrationals = !opt.no_irrationals;
    vo.random_pairs = opt.random_pairs;
    vo.seed = opt.seed;
    ResidualReport report = verify_over_grid(spec, bundle, opt.d, vo);
    emit(opt.out_path, report.to_json());
    return report.pass ? 0 : 1;
}

int run_construct(const Options& opt) {
    if (opt.family.empty()) fail("usage", "construct needs --family");
    SolutionBundle bundle = construct_from_flags(opt);
    if (!opt.equation.empty() &&
        equation_from_string(opt.equation) != bundle.equation)
        fail("usage", "--equation disagrees with --family");
    if (opt.backend_enum() == Backend::floating)
        bundle = bundle.to_backend(Backend::floating);
    emit(opt.out_path, bundle.to_json());
    return 0;
}

int run_entropy(const Options& opt) {
    if (!opt.alpha) fail("usage", "entropy needs --alpha");
    if (opt.dist_text.empty()) fail("usage", "entropy needs --dist");
    Distribution P = Distribution::parse_csv(opt.dist_text, opt.backend_enum());
    Scalar H = entropy_alpha(P, Alpha(*opt.alpha));
    ordered_json j;
    j["alpha"] = *opt.alpha;
    ordered_json comps = ordered_json::array();
    for (const Scalar& c : P.components()) comps.push_back(c.str());
    j["distribution"] = comps;
    j["H"] = H.is_exact() ? H.to_double() : H.float_value();
    emit(opt.out_path, j.dump());
    return 0;
}

int run_classify(const Options& opt) {
    SolutionBundle bundle;
    if (!opt.samples_path.empty()) {
        if (opt.equation.empty()) fail("usage", "--samples needs --equation");
        SampleSet samples = SampleSet::parse_csv(slurp(opt.samples_path), opt.backend_enum());
        IntervalFunction fn = IntervalFunction::table(samples.points);
        bundle.equation = equation_from_string(opt.equation);
        bundle.n = single_distribution(bundle.equation) ? opt.k : opt.n;
        bundle.m = opt.m;
        bundle.functions.push_back(fn);
        if (bundle.equation == EquationId::eq110 || bundle.equation == EquationId::eq18)
            for (int j = 0; j < opt.m; ++j) bundle.functions.push_back(fn);
        if (bundle.equation == EquationId::eq23)
            bundle.functions.assign(static_cast<size_t>(bundle.n), fn);
        if (needs_lambda(bundle.equation)) bundle.lambda = effective_lambda(opt);
        if (bundle.equation == EquationId::eq21)
            bundle.constant = opt.c_text.empty() ? Scalar::of_int(1)
                                                 : Scalar::parse_exact(opt.c_text);
    } else if (!opt.input_path.empty()) {
        bundle = SolutionBundle::from_json(slurp(opt.input_path));
    } else {
        fail("usage", "classify needs --input or --samples");
    }
    EquationSpec spec = EquationSpec::of_bundle(bundle);
    ClassifyReport report = classify_solution_detailed(bundle, spec, opt.d);
    emit(opt.out_path, report.to_json());
    return 0;
}

int run_solve_grid(const Options& opt) {
    std::vector<IntervalFunction> g(static_cast<size_t>(opt.m), parse_partner(opt.g_text));
    GridSolveResult result = grid_solve_eq110(g, opt.n, opt.m, opt.d, opt.cap);
    std::string csv = result.table.to_csv();
    if (!csv.empty() && csv.back() == '\n') csv.pop_back();
    emit(opt.out_path, csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sum-form functional equation workbench"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out_path, "output path (default stdout)");
        cmd->add_option("--backend", opt.backend)->check(CLI::IsMember({"exact", "float"}));
        cmd->add_option("--n", opt.n);
        cmd->add_option("--m", opt.m);
        cmd->add_option("--d", opt.d);
        cmd->add_option("--alpha", opt.alpha);
        cmd->add_option("--lambda", opt.lambda_text);
    };
    auto add_family_params = [&](CLI::App* cmd) {
        cmd->add_option("--family", opt.family);
        cmd->add_option("--phi0", opt.phi0);
        cmd->add_option("--f0", opt.f0);
        cmd->add_option("--f1", opt.f1);
        cmd->add_option("--h0", opt.h0);
        cmd->add_option("--h1", opt.h1);
        cmd->add_option("--c", opt.c_text);
        cmd->add_option("--k", opt.k);
        cmd->add_option("--mult", opt.mult);
        cmd->add_option("--map", opt.map_text);
        cmd->add_option("--astar", opt.astar_text);
        cmd->add_option("--tail", opt.tail_text);
        cmd->add_option("--astar-tail", opt.astar_tail_text);
        cmd->add_option("--g0", opt.g0_text);
        cmd->add_option("--k0", opt.k0_text);
        cmd->add_option("--partner", opt.partner_text);
    };

    CLI::App* verify = app.add_subcommand("verify", "sweep a solution over the grid");
    add_common(verify);
    add_family_params(verify);
    verify->add_option("--equation", opt.equation);
    verify->add_option("--input", opt.input_path);
    verify->add_option("--function", opt.function_path);
    verify->add_option("--perturb", opt.perturb_text);
    verify->add_flag("--no-irrationals", opt.no_irrationals);
    CLI::Option* random_opt = verify->add_option("--random-pairs", opt.random_pairs);
    CLI::Option* seed_opt = verify->add_option("--seed", opt.seed);
    random_opt->needs(seed_opt); // sampled sweeps demand an explicit seed

    CLI::App* construct = app.add_subcommand("construct", "build a solution bundle");
    add_common(construct);
    add_family_params(construct);
    construct->add_option("--equation", opt.equation);

    CLI::App* entropy = app.add_subcommand("entropy", "degree-alpha entropy of a distribution");
    add_common(entropy);
    entropy->add_option("--dist", opt.dist_text);

    CLI::App* classify = app.add_subcommand("classify", "match a solution to a family");
    add_common(classify);
    classify->add_option("--equation", opt.equation);
    classify->add_option("--input", opt.input_path);
    classify->add_option("--samples", opt.samples_path);
    classify->add_option("--c", opt.c_text);
    classify->add_option("--k", opt.k);

    CLI::App* solve = app.add_subcommand("solve-grid", "solve for a lead-function table");
    add_common(solve);
    solve->add_option("--g", opt.g_text, "partner spec (power:A, identity, zero, or JSON)");
    solve->add_option("--cap", opt.cap);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::ostringstream quiet;
        app.exit(e, quiet, quiet);
        ordered_json err{{"error", "usage"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }

    try {
        if (verify->parsed()) return run_verify(opt);
        if (construct->parsed()) return run_construct(opt);
        if (entropy->parsed()) return run_entropy(opt);
        if (classify->parsed()) return run_classify(opt);
        if (solve->parsed()) return run_solve_grid(opt);
    } catch (const Error& e) {
        ordered_json err{{"error", e.code()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        ordered_json err{{"error", "internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 2;
}
