#include "sumform/families.hpp"

#include "json_internal.hpp"

namespace sumform {

using ordered_json = nlohmann::ordered_json;

std::string to_string(FamilyTag tag) {
    switch (tag) {
    case FamilyTag::f31i: return "3.1i";
    case FamilyTag::f31ii: return "3.1ii";
    case FamilyTag::f33: return "3.3";
    case FamilyTag::f41: return "4.1";
    case FamilyTag::f42: return "4.2";
    case FamilyTag::f44: return "4.4";
    case FamilyTag::f51: return "5.1";
    case FamilyTag::f52: return "5.2";
    case FamilyTag::f54: return "5.4";
    case FamilyTag::r1: return "R1";
    case FamilyTag::r2: return "R2";
    case FamilyTag::none: return "none";
    }
    return "none";
}

FamilyTag family_from_string(const std::string& label) {
    if (label == "3.1i") return FamilyTag::f31i;
    if (label == "3.1ii") return FamilyTag::f31ii;
    if (label == "3.3") return FamilyTag::f33;
    if (label == "4.1") return FamilyTag::f41;
    if (label == "4.2") return FamilyTag::f42;
    if (label == "4.4") return FamilyTag::f44;
    if (label == "5.1") return FamilyTag::f51;
    if (label == "5.2") return FamilyTag::f52;
    if (label == "5.4") return FamilyTag::f54;
    if (label == "R1") return FamilyTag::r1;
    if (label == "R2") return FamilyTag::r2;
    if (label == "none") return FamilyTag::none;
    fail("unknown-family", "unknown family label \"" + label + "\"");
}

EquationId equation_of(FamilyTag tag) {
    switch (tag) {
    case FamilyTag::f31i:
    case FamilyTag::f31ii:
    case FamilyTag::f33: return EquationId::eq111;
    case FamilyTag::f41:
    case FamilyTag::f42:
    case FamilyTag::f44: return EquationId::eq110;
    case FamilyTag::f51:
    case FamilyTag::f52:
    case FamilyTag::f54: return EquationId::eq18;
    case FamilyTag::r1: return EquationId::eq21;
    case FamilyTag::r2: return EquationId::eq23;
    case FamilyTag::none: break;
    }
    fail("unknown-family", "family has no equation");
}

namespace {

void require_arity(int n, int m) {
    if (n < 3 || m < 3)
        fail("k-too-small", "two-distribution equations need n >= 3 and m >= 3");
}

Rational require_rational(const Scalar& s, const char* what) {
    if (!s.is_exact() || !s.is_rational())
        fail("needs-rational-parameter",
             std::string(what) + " must be rational in the exact backend");
    return s.rational_part();
}

ordered_json tail_json(const std::array<Rational, 3>& tail) {
    return ordered_json::array({tail[0].get_str(), tail[1].get_str(), tail[2].get_str()});
}

ordered_json map_json(const AdditiveMap& a) {
    ordered_json arr = ordered_json::array();
    for (const Rational& t : a.basis_values()) arr.push_back(t.get_str());
    return arr;
}

ordered_json scalars_json(const std::vector<Scalar>& xs) {
    ordered_json arr = ordered_json::array();
    for (const Scalar& x : xs) arr.push_back(x.str());
    return arr;
}

ordered_json mult_json(const MultiplicativeMap& m) {
    switch (m.kind()) {
    case MultiplicativeMap::Kind::support_indicator: return "support";
    case MultiplicativeMap::Kind::one_at_one: return "one-at-one";
    case MultiplicativeMap::Kind::power:
        if (m.has_integer_exponent()) return m.exponent_int();
        return m.exponent();
    }
    return nullptr;
}

} // namespace

// ------------------------------------------------- single-distribution shapes

IntervalFunction result1_construct(const AdditiveMap& B, int k, const Scalar& c) {
    if (k < 3) fail("k-too-small", "the constant-sum representation needs k >= 3");
    Scalar offset = (c - Scalar::exact(B.at_one())) / Scalar::of_int(k);
    return IntervalFunction::affine(B, offset);
}

SolutionBundle result1_bundle(const AdditiveMap& B, int k, const Scalar& c) {
    SolutionBundle bundle;
    bundle.equation = EquationId::eq21;
    bundle.family = FamilyTag::r1;
    bundle.n = k;
    bundle.m = 0;
    bundle.constant = c;
    bundle.functions = {result1_construct(B, k, c)};
    bundle.params_json =
        ordered_json{{"B", map_json(B)}, {"k", k}, {"c", c.str()}}.dump();
    return bundle;
}

std::vector<IntervalFunction> result2_construct(const AdditiveMap& A,
                                                const std::vector<Scalar>& c) {
    if (c.size() < 3) fail("k-too-small", "the zero-sum representation needs m >= 3");
    Scalar total = Scalar::exact(A.at_one());
    for (const Scalar& cj : c) total += cj;
    if (!total.is_zero())
        fail("constraint-2.5-violated",
             "A(1) + sum of constants must vanish, got " + total.str());
    std::vector<IntervalFunction> out;
    out.reserve(c.size());
    for (const Scalar& cj : c) out.push_back(IntervalFunction::affine(A, cj));
    return out;
}

SolutionBundle result2_bundle(const AdditiveMap& A, const std::vector<Scalar>& c) {
    SolutionBundle bundle;
    bundle.equation = EquationId::eq23;
    bundle.family = FamilyTag::r2;
    bundle.n = static_cast<int>(c.size());
    bundle.m = 0;
    bundle.functions = result2_construct(A, c);
    bundle.params_json = ordered_json{{"A", map_json(A)}, {"c", scalars_json(c)}}.dump();
    return bundle;
}

// ----------------------------------------------------------- equation 1.11

SolutionBundle construct_affine_general(int n, int m, const Rational& phi0,
                                        const std::array<Rational, 3>& tail) {
    require_arity(n, m);
    // Case condition phi(1) + (n-1)*phi0 != 1 collapses to n*phi0*(1-m) != 1.
    Rational cond = Rational(n) * phi0 * Rational(1 - m);
    if (cond == 1)
        fail("case-condition-violated",
             "these parameters belong to the unit-sum case");
    AdditiveMap a(Rational(-n * m) * phi0, tail[0], tail[1], tail[2]);
    SolutionBundle bundle;
    bundle.equation = EquationId::eq111;
    bundle.family = FamilyTag::f31i;
    bundle.n = n;
    bundle.m = m;
    bundle.functions = {IntervalFunction::affine(a, Scalar::exact(phi0))};
    bundle.params_json =
        ordered_json{{"phi0", phi0.get_str()}, {"tail", tail_json(tail)}}.dump();
    return bundle;
}

SolutionBundle construct_affine_unit(int n, int m, const Rational& phi0,
                                     const std::array<Rational, 3>& tail) {
    require_arity(n, m);
    AdditiveMap a(Rational(1) - Rational(n) * phi0, tail[0], tail[1], tail[2]);
    SolutionBundle bundle;
    bundle.equation = EquationId::eq111;
    bundle.family = FamilyTag::f31ii;
    bundle.n = n;
    bundle.m = m;
    bundle.functions = {IntervalFunction::affine(a, Scalar::exact(phi0))};
    bundle.params_json =
        ordered_json{{"phi0", phi0.get_str()}, {"tail", tail_json(tail)}}.dump();
    return bundle;
}

SolutionBundle construct_multiplicative(int n, int m, const MultiplicativeMap& M,
                                        const AdditiveMap& B) {
    require_arity(n, m);
    if (B.at_one() != 0)
        fail("B1-nonzero", "the subtracted additive map must vanish at 1");
    SolutionBundle bundle;
    bundle.equation = EquationId::eq111;
    bundle.family = FamilyTag::f33;
    bundle.n = n;
    bundle.m = m;
    bundle.functions = {
        IntervalFunction::mult_combo(Scalar::of_int(1), M, B, Scalar())};
    bundle.params_json = ordered_json{{"alpha", mult_json(M)}, {"B", map_json(B)}}.dump();
    return bundle;
}

// ----------------------------------------------------------- equation 1.10

SolutionBundle construct_additive_lead(int n, int m, const AdditiveMap& b,
                                       std::vector<IntervalFunction> g) {
    require_arity(n, m);
    if (b.at_one() != 0)
        fail("b1-nonzero", "the additive lead must vanish at 1");
    if (static_cast<int>(g.size()) != m)
        fail("arity-mismatch", "expected m partner functions");
    SolutionBundle bundle;
    bundle.equation = EquationId::eq110;
    bundle.family = FamilyTag::f41;
    bundle.n = n;
    bundle.m = m;
    bundle.functions.push_back(IntervalFunction::affine(b, Scalar()));
    for (auto& gj : g) bundle.functions.push_back(std::move(gj));
    bundle.params_json = ordered_json{{"b", map_json(b)}}.dump();
    return bundle;
}

SolutionBundle construct_affine_pair(int n, int m, const Scalar& f0, const Scalar& f1,
                                     const std::array<Rational, 3>& tail_a,
                                     const std::array<Rational, 3>& tail_astar,
                                     const std::vector<Scalar>& g0) {
    require_arity(n, m);
    if (static_cast<int>(g0.size()) != m)
        fail("arity-mismatch", "expected m partner constants");
    Rational rf0 = require_rational(f0, "f(0)");
    Rational rf1 = require_rational(f1, "f(1)");
    Rational c = rf1 + Rational(n - 1) * rf0;
    if (c == 0) fail("c-zero", "f(1) + (n-1)*f(0) must be nonzero");

    Scalar g0_sum = Scalar();
    for (const Scalar& s : g0) g0_sum += s;
    Rational rg0_sum = require_rational(g0_sum, "the sum of the partner constants");

    AdditiveMap a(Rational(1) - Rational(n) * rf0 / c, tail_a[0], tail_a[1], tail_a[2]);
    AdditiveMap a_star(-rg0_sum + Rational(n * m) * rf0 / c,
                       tail_astar[0], tail_astar[1], tail_astar[2]);

    SolutionBundle bundle;
    bundle.equation = EquationId::eq110;
    bundle.family = FamilyTag::f42;
    bundle.n = n;
    bundle.m = m;
    bundle.functions.push_back(IntervalFunction::affine(a.scaled(c), f0));
    AdditiveMap partner_map = a + a_star;
    for (const Scalar& g0j : g0)
        bundle.functions.push_back(IntervalFunction::affine(partner_map, g0j));
    bundle.params_json = ordered_json{{"f0", f0.str()},
                                      {"f1", f1.str()},
                                      {"tail_a", tail_json(tail_a)},
                                      {"tail_astar", tail_json(tail_astar)},
                                      {"g0", scalars_json(g0)}}.dump();
    return bundle;
}

SolutionBundle construct_multiplicative_pair(int n, int m, const Scalar& f1,
                                             const MultiplicativeMap& M,
                                             const AdditiveMap& B,
                                             const AdditiveMap& A_star,
                                             const std::vector<Scalar>& g0) {
    require_arity(n, m);
    if (static_cast<int>(g0.size()) != m)
        fail("arity-mismatch", "expected m partner constants");
    if (f1.is_zero()) fail("f1-zero", "f(1) must be nonzero");
    if (B.at_one() != 0)
        fail("b1-nonzero", "the subtracted additive map must vanish at 1");
    Scalar g0_sum = Scalar();
    for (const Scalar& s : g0) g0_sum += s;
    Rational rg0_sum = require_rational(g0_sum, "the sum of the partner constants");
    if (A_star.at_one() != -rg0_sum)
        fail("A*-constraint-violated",
             "A*(1) must equal the negated sum of the partner constants");

    SolutionBundle bundle;
    bundle.equation = EquationId::eq110;
    bundle.family = FamilyTag::f44;
    bundle.n = n;
    bundle.m = m;
    bundle.functions.push_back(IntervalFunction::mult_combo(f1, M, B, Scalar()));
    AdditiveMap partner_sub = B - A_star;
    for (const Scalar& g0j : g0)
        bundle.functions.push_back(
            IntervalFunction::mult_combo(Scalar::of_int(1), M, partner_sub, g0j));
    bundle.params_json = ordered_json{{"f1", f1.str()},
                                      {"alpha", mult_json(M)},
                                      {"B", map_json(B)},
                                      {"Astar", map_json(A_star)},
                                      {"g0", scalars_json(g0)}}.dump();
    return bundle;
}

// ------------------------------------------------------------ equation 1.8

namespace {

void require_lambda(const Scalar& lambda) {
    if (lambda.is_zero()) fail("lambda-zero", "lambda must be nonzero");
}

FamilyTag transformed_family(FamilyTag tag, bool to_eq18) {
    if (to_eq18) {
        if (tag == FamilyTag::f41) return FamilyTag::f51;
        if (tag == FamilyTag::f42) return FamilyTag::f52;
        if (tag == FamilyTag::f44) return FamilyTag::f54;
    } else {
        if (tag == FamilyTag::f51) return FamilyTag::f41;
        if (tag == FamilyTag::f52) return FamilyTag::f42;
        if (tag == FamilyTag::f54) return FamilyTag::f44;
    }
    return FamilyTag::none;
}

} // namespace

SolutionBundle construct_additive_lead_transformed(int n, int m, const Scalar& lambda,
                                                   const AdditiveMap& b,
                                                   std::vector<IntervalFunction> k) {
    require_arity(n, m);
    require_lambda(lambda);
    if (b.at_one() != 0)
        fail("b1-nonzero", "the additive lead must vanish at 1");
    if (static_cast<int>(k.size()) != m)
        fail("arity-mismatch", "expected m partner functions");
    SolutionBundle bundle;
    bundle.equation = EquationId::eq18;
    bundle.family = FamilyTag::f51;
    bundle.n = n;
    bundle.m = m;
    bundle.lambda = lambda;
    bundle.functions.push_back(IntervalFunction::transformed(
        IntervalFunction::affine(b, Scalar()), lambda));
    for (auto& kj : k) bundle.functions.push_back(std::move(kj));
    bundle.params_json = ordered_json{{"b", map_json(b)}}.dump();
    return bundle;
}

SolutionBundle construct_affine_pair_transformed(int n, int m, const Scalar& lambda,
                                                 const Scalar& h0, const Scalar& h1,
                                                 const std::array<Rational, 3>& tail_a,
                                                 const std::array<Rational, 3>& tail_astar,
                                                 const std::vector<Scalar>& k0) {
    require_lambda(lambda);
    Rational rl = require_rational(lambda, "lambda (affine transformed family)");
    Rational rh0 = require_rational(h0, "h(0)");
    Rational rh1 = require_rational(h1, "h(1)");
    Scalar f0 = Scalar::exact(rl * rh0);
    Scalar f1 = Scalar::exact(Rational(1) + rl * rh1);
    std::vector<Scalar> g0;
    g0.reserve(k0.size());
    for (const Scalar& k0j : k0) g0.push_back(lambda * k0j);
    SolutionBundle base = construct_affine_pair(n, m, f0, f1, tail_a, tail_astar, g0);
    SolutionBundle bundle = bundle_to_eq18(base, lambda);
    bundle.params_json = ordered_json{{"h0", h0.str()},
                                      {"h1", h1.str()},
                                      {"tail_a", tail_json(tail_a)},
                                      {"tail_astar", tail_json(tail_astar)},
                                      {"k0", scalars_json(k0)}}.dump();
    return bundle;
}

SolutionBundle construct_multiplicative_pair_transformed(int n, int m, const Scalar& lambda,
                                                         const Scalar& h1,
                                                         const MultiplicativeMap& M,
                                                         const AdditiveMap& B,
                                                         const AdditiveMap& A_star,
                                                         const std::vector<Scalar>& k0) {
    require_lambda(lambda);
    Scalar f1 = Scalar::of_int(1) + lambda * h1;
    if (f1.is_zero()) fail("f1-zero", "lambda*h(1) + 1 must be nonzero");
    std::vector<Scalar> g0;
    g0.reserve(k0.size());
    for (const Scalar& k0j : k0) g0.push_back(lambda * k0j);
    SolutionBundle base = construct_multiplicative_pair(n, m, f1, M, B, A_star, g0);
    SolutionBundle bundle = bundle_to_eq18(base, lambda);
    bundle.params_json = ordered_json{{"h1", h1.str()},
                                      {"alpha", mult_json(M)},
                                      {"B", map_json(B)},
                                      {"Astar", map_json(A_star)},
                                      {"k0", scalars_json(k0)}}.dump();
    return bundle;
}

// -------------------------------------------------------------- transforms

IntervalFunction transform_h_to_f(const IntervalFunction& h, const Scalar& lambda) {
    require_lambda(lambda);
    if (const auto* t = std::get_if<IntervalFunction::Transformed>(&h.form()))
        if (t->lambda == lambda) return *t->inner;
    return IntervalFunction::lifted(h, lambda);
}

IntervalFunction transform_f_to_h(const IntervalFunction& f, const Scalar& lambda) {
    require_lambda(lambda);
    if (const auto* l = std::get_if<IntervalFunction::Lifted>(&f.form()))
        if (l->lambda == lambda) return *l->inner;
    return IntervalFunction::transformed(f, lambda);
}

SolutionBundle bundle_to_eq110(const SolutionBundle& bundle18) {
    if (bundle18.equation != EquationId::eq18 || !bundle18.lambda)
        fail("arity-mismatch", "transform expects a bundle for equation 1.8");
    SolutionBundle out = bundle18;
    out.equation = EquationId::eq110;
    out.family = transformed_family(bundle18.family, /*to_eq18=*/false);
    out.lambda.reset();
    out.functions.clear();
    for (const IntervalFunction& fn : bundle18.functions)
        out.functions.push_back(transform_h_to_f(fn, *bundle18.lambda));
    return out;
}

SolutionBundle bundle_to_eq18(const SolutionBundle& bundle110, const Scalar& lambda) {
    if (bundle110.equation != EquationId::eq110)
        fail("arity-mismatch", "transform expects a bundle for equation 1.10");
    require_lambda(lambda);
    SolutionBundle out = bundle110;
    out.equation = EquationId::eq18;
    out.family = transformed_family(bundle110.family, /*to_eq18=*/true);
    out.lambda = lambda;
    out.functions.clear();
    for (const IntervalFunction& fn : bundle110.functions)
        out.functions.push_back(transform_f_to_h(fn, lambda));
    return out;
}

// ----------------------------------------------------------- bundle plumbing

Backend SolutionBundle::backend() const {
    if (lambda) return lambda->backend();
    return functions.empty() ? Backend::exact : functions.front().backend();
}

SolutionBundle SolutionBundle::to_backend(Backend target) const {
    SolutionBundle out = *this;
    out.functions.clear();
    for (const IntervalFunction& fn : functions)
        out.functions.push_back(fn.to_backend(target));
    if (lambda) {
        Scalar l = *lambda;
        out.lambda = target == Backend::floating && l.is_exact()
                         ? Scalar::of_double(l.to_double())
                         : l;
    }
    if (constant) {
        Scalar c = *constant;
        out.constant = target == Backend::floating && c.is_exact()
                           ? Scalar::of_double(c.to_double())
                           : c;
    }
    return out;
}

std::string SolutionBundle::to_json() const {
    ordered_json j;
    j["equation"] = std::string(sumform::to_string(equation));
    j["family"] = sumform::to_string(family);
    j["n"] = n;
    if (!single_distribution(equation)) j["m"] = m;
    if (lambda) j["lambda"] = lambda->is_exact()
                                  ? ordered_json(lambda->str())
                                  : ordered_json(lambda->float_value());
    if (constant) j["c"] = constant->is_exact()
                               ? ordered_json(constant->str())
                               : ordered_json(constant->float_value());
    j["params"] = ordered_json::parse(params_json);

    ordered_json fns;
    switch (equation) {
    case EquationId::eq111:
        fns["phi"] = function_to_json_node(functions.at(0));
        break;
    case EquationId::eq21:
        fns["psi"] = function_to_json_node(functions.at(0));
        break;
    case EquationId::eq23: {
        ordered_json arr = ordered_json::array();
        for (const auto& fn : functions) arr.push_back(function_to_json_node(fn));
        fns["psi"] = arr;
        break;
    }
    case EquationId::eq18:
    case EquationId::eq15: {
        fns["h"] = function_to_json_node(functions.at(0));
        ordered_json arr = ordered_json::array();
        for (size_t i = 1; i < functions.size(); ++i)
            arr.push_back(function_to_json_node(functions[i]));
        fns["k"] = arr;
        break;
    }
    case EquationId::eq110:
    default: {
        fns["f"] = function_to_json_node(functions.at(0));
        ordered_json arr = ordered_json::array();
        for (size_t i = 1; i < functions.size(); ++i)
            arr.push_back(function_to_json_node(functions[i]));
        fns["g"] = arr;
        break;
    }
    }
    j["functions"] = fns;
    return j.dump();
}

SolutionBundle SolutionBundle::from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("schema-violation", ": not valid JSON");
    if (!j.is_object() || !j.contains("equation") || !j["equation"].is_string())
        fail("schema-violation", "/equation: expected an equation id string");
    SolutionBundle bundle;
    bundle.equation = equation_from_string(j["equation"].get<std::string>());
    bundle.family = j.contains("family") && j["family"].is_string()
                        ? family_from_string(j["family"].get<std::string>())
                        : FamilyTag::none;
    if (j.contains("n")) bundle.n = j["n"].get<int>();
    if (j.contains("m")) bundle.m = j["m"].get<int>();
    auto scalar_field = [&](const char* name) -> std::optional<Scalar> {
        if (!j.contains(name)) return std::nullopt;
        const auto& v = j[name];
        if (v.is_string()) return Scalar::parse_exact(v.get<std::string>());
        if (v.is_number()) return Scalar::of_double(v.get<double>());
        fail("schema-violation", std::string("/") + name + ": expected a scalar");
    };
    bundle.lambda = scalar_field("lambda");
    bundle.constant = scalar_field("c");
    bundle.params_json = j.contains("params") ? j["params"].dump() : "{}";

    if (!j.contains("functions") || !j["functions"].is_object())
        fail("schema-violation", "/functions: expected an object");
    const auto& fns = j["functions"];
    auto take_single = [&](const char* name) {
        if (!fns.contains(name))
            fail("schema-violation", std::string("/functions: missing \"") + name + "\"");
        bundle.functions.push_back(
            function_from_json_node(fns[name], std::string("/functions/") + name));
    };
    auto take_list = [&](const char* name) {
        if (!fns.contains(name) || !fns[name].is_array())
            fail("schema-violation",
                 std::string("/functions: missing function list \"") + name + "\"");
        size_t i = 0;
        for (const auto& cell : fns[name])
            bundle.functions.push_back(function_from_json_node(
                cell, std::string("/functions/") + name + "/" + std::to_string(i++)));
    };
    switch (bundle.equation) {
    case EquationId::eq111: take_single("phi"); break;
    case EquationId::eq21: take_single("psi"); break;
    case EquationId::eq23: take_list("psi"); break;
    case EquationId::eq18:
    case EquationId::eq15: take_single("h"); take_list("k"); break;
    default: take_single("f"); take_list("g"); break;
    }
    return bundle;
}

} // namespace sumform
