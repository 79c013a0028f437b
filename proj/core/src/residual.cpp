#include "sumform/residual.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace sumform {

using ordered_json = nlohmann::ordered_json;

EquationSpec EquationSpec::of_bundle(const SolutionBundle& bundle) {
    EquationSpec spec;
    spec.id = bundle.equation;
    spec.n = bundle.n;
    spec.m = bundle.m;
    spec.lambda = bundle.lambda;
    return spec;
}

void EquationSpec::validate() const {
    if (single_distribution(id)) {
        if (n < 3) fail("k-too-small", "single-distribution equations need k >= 3");
    } else {
        if (n < 3 || m < 3) fail("k-too-small", "two-distribution equations need n, m >= 3");
    }
    if (needs_lambda(id)) {
        if (!lambda) fail("lambda-zero", "this equation requires a nonzero lambda");
        if (lambda->is_zero()) fail("lambda-zero", "lambda must be nonzero");
    }
}

namespace {

struct Sides {
    Scalar lhs;
    Scalar rhs;
};

Scalar int_scalar(long v, Backend b) {
    return b == Backend::exact ? Scalar::of_int(v) : Scalar::of_double(static_cast<double>(v));
}

Sides sides_eq110(const IntervalFunction& f, const std::vector<IntervalFunction>& g,
                  const Distribution& p, const Distribution& q) {
    if (static_cast<int>(g.size()) != q.size())
        fail("arity-mismatch", "need one partner function per component of q");
    Backend b = p.backend();
    Scalar lhs = Scalar::zero(b);
    for (int i = 0; i < p.size(); ++i)
        for (int j = 0; j < q.size(); ++j)
            lhs += f.eval(p[i] * q[j]);
    Scalar sum_f = Scalar::zero(b);
    for (int i = 0; i < p.size(); ++i) sum_f += f.eval(p[i]);
    Scalar sum_g = Scalar::zero(b);
    for (int j = 0; j < q.size(); ++j) sum_g += g[static_cast<size_t>(j)].eval(q[j]);
    return {lhs, sum_f * sum_g};
}

Sides sides_eq111(const IntervalFunction& phi, const Distribution& p, const Distribution& q) {
    Backend b = p.backend();
    int n = p.size();
    int m = q.size();
    Scalar lhs = Scalar::zero(b);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            lhs += phi.eval(p[i] * q[j]);
    Scalar sum_p = Scalar::zero(b);
    for (int i = 0; i < n; ++i) sum_p += phi.eval(p[i]);
    Scalar sum_q = Scalar::zero(b);
    for (int j = 0; j < m; ++j) sum_q += phi.eval(q[j]);
    Scalar phi0 = phi.eval(Scalar::zero(b));
    Scalar rhs = sum_p * sum_q + int_scalar(static_cast<long>(m) * (n - 1), b) * phi0 * sum_p;
    return {lhs, rhs};
}

Sides sides_eq18(const IntervalFunction& h, const std::vector<IntervalFunction>& k,
                 const Scalar& lambda, const Distribution& p, const Distribution& q) {
    if (lambda.is_zero()) fail("lambda-zero", "lambda must be nonzero");
    if (static_cast<int>(k.size()) != q.size())
        fail("arity-mismatch", "need one partner function per component of q");
    Backend b = p.backend();
    Scalar lhs = Scalar::zero(b);
    for (int i = 0; i < p.size(); ++i)
        for (int j = 0; j < q.size(); ++j)
            lhs += h.eval(p[i] * q[j]);
    Scalar sum_h = Scalar::zero(b);
    for (int i = 0; i < p.size(); ++i) sum_h += h.eval(p[i]);
    Scalar sum_k = Scalar::zero(b);
    for (int j = 0; j < q.size(); ++j) sum_k += k[static_cast<size_t>(j)].eval(q[j]);
    return {lhs, sum_h + sum_k + lambda * sum_h * sum_k};
}

Sides sides_eq17(const std::vector<std::vector<IntervalFunction>>& f,
                 const std::vector<IntervalFunction>& h,
                 const std::vector<IntervalFunction>& k, const Scalar& lambda,
                 const Distribution& p, const Distribution& q) {
    if (lambda.is_zero()) fail("lambda-zero", "lambda must be nonzero");
    int n = p.size();
    int m = q.size();
    if (static_cast<int>(f.size()) != n || static_cast<int>(h.size()) != n ||
        static_cast<int>(k.size()) != m)
        fail("arity-mismatch", "function shapes must match (n, m)");
    for (const auto& row : f)
        if (static_cast<int>(row.size()) != m)
            fail("arity-mismatch", "function shapes must match (n, m)");
    Backend b = p.backend();
    Scalar lhs = Scalar::zero(b);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            lhs += f[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(p[i] * q[j]);
    Scalar sum_h = Scalar::zero(b);
    for (int i = 0; i < n; ++i) sum_h += h[static_cast<size_t>(i)].eval(p[i]);
    Scalar sum_k = Scalar::zero(b);
    for (int j = 0; j < m; ++j) sum_k += k[static_cast<size_t>(j)].eval(q[j]);
    return {lhs, sum_h + sum_k + lambda * sum_h * sum_k};
}

Sides sides_constant_sum(const IntervalFunction& psi, const Scalar& c, const Distribution& P) {
    Scalar lhs = Scalar::zero(P.backend());
    for (const Scalar& p : P.components()) lhs += psi.eval(p);
    return {lhs, c};
}

Sides sides_zero_sum(const std::vector<IntervalFunction>& psi, const Distribution& P) {
    if (static_cast<int>(psi.size()) != P.size())
        fail("arity-mismatch", "need one map per component");
    Scalar lhs = Scalar::zero(P.backend());
    for (int j = 0; j < P.size(); ++j) lhs += psi[static_cast<size_t>(j)].eval(P[j]);
    return {lhs, Scalar::zero(P.backend())};
}

} // namespace

Scalar residual_eq110(const IntervalFunction& f, const std::vector<IntervalFunction>& g,
                      const Distribution& p, const Distribution& q) {
    Sides s = sides_eq110(f, g, p, q);
    return s.lhs - s.rhs;
}

Scalar residual_eq111(const IntervalFunction& phi, const Distribution& p, const Distribution& q) {
    Sides s = sides_eq111(phi, p, q);
    return s.lhs - s.rhs;
}

Scalar residual_eq18(const IntervalFunction& h, const std::vector<IntervalFunction>& k,
                     const Scalar& lambda, const Distribution& p, const Distribution& q) {
    Sides s = sides_eq18(h, k, lambda, p, q);
    return s.lhs - s.rhs;
}

Scalar residual_eq15(const IntervalFunction& f, const Scalar& lambda,
                     const Distribution& p, const Distribution& q) {
    std::vector<IntervalFunction> k(static_cast<size_t>(q.size()), f);
    return residual_eq18(f, k, lambda, p, q);
}

Scalar residual_eq17(const std::vector<std::vector<IntervalFunction>>& f,
                     const std::vector<IntervalFunction>& h,
                     const std::vector<IntervalFunction>& k, const Scalar& lambda,
                     const Distribution& p, const Distribution& q) {
    Sides s = sides_eq17(f, h, k, lambda, p, q);
    return s.lhs - s.rhs;
}

Scalar residual_constant_sum(const IntervalFunction& psi, const Scalar& c,
                             const Distribution& P) {
    Sides s = sides_constant_sum(psi, c, P);
    return s.lhs - s.rhs;
}

Scalar residual_zero_sum(const std::vector<IntervalFunction>& psi, const Distribution& P) {
    Sides s = sides_zero_sum(psi, P);
    return s.lhs - s.rhs;
}

// ----------------------------------------------------------------- sweeps

namespace {

struct SweepState {
    Scalar max_abs;
    std::optional<Distribution> witness_p;
    std::optional<Distribution> witness_q;
    long evaluations = 0;
    double max_side = 0.0;

    explicit SweepState(Backend b) : max_abs(Scalar::zero(b)) {}

    void feed(const Sides& sides, const Distribution& p, const Distribution* q) {
        ++evaluations;
        max_side = std::max({max_side, std::abs(sides.lhs.to_double()),
                             std::abs(sides.rhs.to_double())});
        Scalar abs_r = (sides.lhs - sides.rhs).abs();
        bool better = !witness_p.has_value() || abs_r.compare(max_abs) > 0;
        if (better) {
            max_abs = abs_r;
            witness_p = p;
            if (q) witness_q = *q;
        }
    }
};

std::vector<Distribution> sweep_points(int arity, int d, Backend b, bool irrationals) {
    std::vector<Distribution> pts = enumerate_grid(arity, d);
    if (irrationals)
        for (Distribution& extra : irrational_distributions(arity))
            pts.push_back(std::move(extra));
    if (b == Backend::floating) {
        std::vector<Distribution> lowered;
        lowered.reserve(pts.size());
        for (const Distribution& p : pts) lowered.push_back(p.to_float());
        return lowered;
    }
    return pts;
}

ResidualReport finish_report(const EquationSpec& spec, int d, Backend b, SweepState&& state) {
    ResidualReport report;
    report.spec = spec;
    report.d = d;
    report.exact = (b == Backend::exact);
    report.max_abs_residual = state.max_abs;
    report.witness_p = std::move(state.witness_p);
    report.witness_q = std::move(state.witness_q);
    report.evaluations = state.evaluations;
    report.max_abs_side = state.max_side;
    if (report.exact) {
        report.tolerance = 0.0;
        report.pass = report.max_abs_residual.is_zero();
    } else {
        report.tolerance = 1e-9 * (1.0 + state.max_side);
        report.pass = report.max_abs_residual.float_value() <= report.tolerance;
    }
    return report;
}

} // namespace

ResidualReport verify_over_grid(const EquationSpec& spec, const SolutionBundle& bundle,
                                int d, const VerifyOptions& options) {
    spec.validate();
    if (spec.id != bundle.equation)
        fail("arity-mismatch", "bundle does not match the equation spec");
    if (bundle.n != spec.n || (!single_distribution(spec.id) && bundle.m != spec.m))
        fail("arity-mismatch", "bundle arity does not match the equation spec");
    if (d < 1) fail("invalid-grid-resolution", "grid needs d >= 1");

    Backend b = bundle.backend();
    Scalar lambda = Scalar::zero(b);
    if (needs_lambda(spec.id)) {
        Scalar raw = bundle.lambda ? *bundle.lambda : *spec.lambda;
        lambda = (b == Backend::floating && raw.is_exact())
                     ? Scalar::of_double(raw.to_double())
                     : raw;
    }

    bool irr = options.include_irrationals && b == Backend::exact;
    auto eval_pair = [&](const Distribution& p, const Distribution& q) -> Sides {
        switch (spec.id) {
        case EquationId::eq110:
            return sides_eq110(bundle.lead(), bundle.partners(), p, q);
        case EquationId::eq111:
            return sides_eq111(bundle.lead(), p, q);
        case EquationId::eq18:
            return sides_eq18(bundle.lead(), bundle.partners(), lambda, p, q);
        case EquationId::eq15: {
            std::vector<IntervalFunction> k(static_cast<size_t>(q.size()), bundle.lead());
            return sides_eq18(bundle.lead(), k, lambda, p, q);
        }
        default:
            fail("arity-mismatch", "not a two-distribution equation");
        }
    };

    SweepState state(b);
    if (single_distribution(spec.id)) {
        std::vector<Distribution> pts = sweep_points(spec.n, d, b, irr);
        for (int i = 0; i < options.random_pairs; ++i) {
            Distribution extra =
                sample_random(spec.n, options.seed + static_cast<std::uint64_t>(i),
                              i % std::min(3, spec.n));
            pts.push_back(b == Backend::floating ? extra.to_float() : extra);
        }
        if (spec.id == EquationId::eq21 && !bundle.constant)
            fail("missing-constant", "a constant-sum bundle needs its constant c");
        for (const Distribution& P : pts) {
            Sides sides = spec.id == EquationId::eq21
                              ? sides_constant_sum(bundle.lead(), *bundle.constant, P)
                              : sides_zero_sum(bundle.functions, P);
            state.feed(sides, P, nullptr);
        }
        return finish_report(spec, d, b, std::move(state));
    }

    std::vector<Distribution> ps = sweep_points(spec.n, d, b, irr);
    std::vector<Distribution> qs = sweep_points(spec.m, d, b, irr);
    for (const Distribution& p : ps)
        for (const Distribution& q : qs)
            state.feed(eval_pair(p, q), p, &q);
    for (int i = 0; i < options.random_pairs; ++i) {
        Distribution p = sample_random(spec.n, options.seed + 2 * static_cast<std::uint64_t>(i),
                                       i % std::min(3, spec.n));
        Distribution q = sample_random(spec.m, options.seed + 2 * static_cast<std::uint64_t>(i) + 1,
                                       (i + 1) % std::min(3, spec.m));
        if (b == Backend::floating) {
            p = p.to_float();
            q = q.to_float();
        }
        state.feed(eval_pair(p, q), p, &q);
    }
    return finish_report(spec, d, b, std::move(state));
}

ResidualReport verify_eq17_over_grid(const std::vector<std::vector<IntervalFunction>>& f,
                                     const std::vector<IntervalFunction>& h,
                                     const std::vector<IntervalFunction>& k,
                                     const Scalar& lambda, int n, int m, int d,
                                     const VerifyOptions& options) {
    EquationSpec spec;
    spec.id = EquationId::eq17;
    spec.n = n;
    spec.m = m;
    spec.lambda = lambda;
    spec.validate();

    Backend b = lambda.backend();
    bool irr = options.include_irrationals && b == Backend::exact;
    SweepState state(b);
    std::vector<Distribution> ps = sweep_points(n, d, b, irr);
    std::vector<Distribution> qs = sweep_points(m, d, b, irr);
    for (const Distribution& p : ps)
        for (const Distribution& q : qs)
            state.feed(sides_eq17(f, h, k, lambda, p, q), p, &q);
    return finish_report(spec, d, b, std::move(state));
}

// ---------------------------------------------------------------- reporting

std::string ResidualReport::to_json() const {
    ordered_json j;
    j["equation"] = std::string(to_string(spec.id));
    j["n"] = spec.n;
    if (!single_distribution(spec.id)) j["m"] = spec.m;
    j["d"] = d;
    j["exact"] = exact;
    if (exact)
        j["max_abs_residual"] = max_abs_residual.str();
    else
        j["max_abs_residual"] = max_abs_residual.float_value();
    ordered_json witness;
    auto dist_json = [](const Distribution& dist) {
        ordered_json arr = ordered_json::array();
        for (const Scalar& c : dist.components()) arr.push_back(c.str());
        return arr;
    };
    if (witness_p) witness["p"] = dist_json(*witness_p);
    if (witness_q) witness["q"] = dist_json(*witness_q);
    j["witness"] = witness;
    j["evaluations"] = evaluations;
    return j.dump();
}

} // namespace sumform
