#include "sumform/discover.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

namespace sumform {

using ordered_json = nlohmann::ordered_json;

// ------------------------------------------------------------------ samples

void SampleSet::validate() const {
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                fail("duplicate-abscissa", "sample abscissae must be distinct");
}

SampleSet SampleSet::from_function(const IntervalFunction& f, const std::vector<Scalar>& xs) {
    SampleSet s;
    s.points.reserve(xs.size());
    for (const Scalar& x : xs) s.points.emplace_back(x, f.eval(x));
    s.validate();
    return s;
}

SampleSet SampleSet::on_grid(const IntervalFunction& f, int d) {
    if (const auto* tb = std::get_if<IntervalFunction::Table>(&f.form())) {
        SampleSet s;
        s.points = tb->points;
        return s;
    }
    std::vector<Scalar> xs;
    xs.reserve(static_cast<size_t>(d) + 1);
    Backend b = f.backend();
    for (int k = 0; k <= d; ++k) {
        Scalar x = Scalar::of_rational(k, d);
        xs.push_back(b == Backend::floating ? Scalar::of_double(x.to_double()) : x);
    }
    return from_function(f, xs);
}

std::string SampleSet::to_csv() const {
    std::string out = "x,y\n";
    for (const auto& [x, y] : points) {
        out += x.str();
        out += ",";
        out += y.str();
        out += "\n";
    }
    return out;
}

SampleSet SampleSet::parse_csv(const std::string& text, Backend backend) {
    SampleSet s;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "x,y") continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            fail("schema-violation", "sample rows must be \"x,y\"");
        s.points.emplace_back(Scalar::parse(line.substr(0, comma), backend),
                              Scalar::parse(line.substr(comma + 1), backend));
    }
    s.validate();
    return s;
}

// --------------------------------------------------------------------- fits

namespace {

struct XY {
    std::vector<double> x;
    std::vector<double> y;
};

XY to_doubles(const SampleSet& s) {
    XY xy;
    xy.x.reserve(s.points.size());
    xy.y.reserve(s.points.size());
    for (const auto& [px, py] : s.points) {
        xy.x.push_back(px.to_double());
        xy.y.push_back(py.to_double());
    }
    return xy;
}

double rms_of(const std::vector<double>& r) {
    double sum = 0;
    for (double v : r) sum += v * v;
    return std::sqrt(sum / static_cast<double>(r.size()));
}

// Solves the damped 3x3 normal equations (JtJ + mu*I) delta = Jtr in place.
bool solve3(double a[3][3], double b[3], double out[3]) {
    int piv[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[piv[r]][col]) > std::abs(a[piv[best]][col])) best = r;
        std::swap(piv[col], piv[best]);
        double p = a[piv[col]][col];
        if (p == 0.0) return false;
        for (int r = col + 1; r < 3; ++r) {
            double factor = a[piv[r]][col] / p;
            for (int c = col; c < 3; ++c) a[piv[r]][c] -= factor * a[piv[col]][c];
            b[piv[r]] -= factor * b[piv[col]];
        }
    }
    for (int row = 2; row >= 0; --row) {
        double acc = b[piv[row]];
        for (int c = row + 1; c < 3; ++c) acc -= a[piv[row]][c] * out[c];
        double p = a[piv[row]][row];
        if (p == 0.0) return false;
        out[row] = acc / p;
    }
    return true;
}

constexpr double kAlphaMin = 1e-6;
constexpr double kAlphaMax = 8.0;

struct PowerParams {
    double scale = 0;
    double alpha = 1;
    double slope = 0;
};

double power_model(const PowerParams& t, double x) {
    double p = x == 0.0 ? 0.0 : std::pow(x, t.alpha);
    return t.scale * p + t.slope * x;
}

// Linear least squares for (scale, slope) at fixed alpha; the 2x2 normal
// equations initialize each Gauss-Newton start.
PowerParams init_at_alpha(const XY& xy, double alpha) {
    double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
    for (size_t i = 0; i < xy.x.size(); ++i) {
        double xa = xy.x[i] == 0.0 ? 0.0 : std::pow(xy.x[i], alpha);
        a00 += xa * xa;
        a01 += xa * xy.x[i];
        a11 += xy.x[i] * xy.x[i];
        b0 += xa * xy.y[i];
        b1 += xy.x[i] * xy.y[i];
    }
    PowerParams t;
    t.alpha = alpha;
    double det = a00 * a11 - a01 * a01;
    if (std::abs(det) > 1e-300) {
        t.scale = (b0 * a11 - b1 * a01) / det;
        t.slope = (a00 * b1 - a01 * b0) / det;
    } else if (a00 > 0) {
        t.scale = b0 / a00;
    }
    return t;
}

} // namespace

FitResult fit_affine_family(const SampleSet& samples) {
    if (samples.points.size() < 3)
        fail("too-few-samples", "affine fits need at least 3 samples");
    XY xy = to_doubles(samples);
    size_t n = xy.x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xy.x[i];
        sy += xy.y[i];
        sxx += xy.x[i] * xy.x[i];
        sxy += xy.x[i] * xy.y[i];
    }
    double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom == 0.0)
        fail("degenerate-abscissae", "all sample abscissae coincide");
    FitResult fit;
    fit.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    fit.intercept = (sy - *fit.slope * sx) / static_cast<double>(n);
    std::vector<double> r(n);
    for (size_t i = 0; i < n; ++i)
        r[i] = xy.y[i] - (*fit.slope * xy.x[i] + *fit.intercept);
    fit.rms = rms_of(r);
    return fit;
}

FitResult fit_power_family(const SampleSet& samples) {
    if (samples.points.size() < 4)
        fail("insufficient-interior-points", "power fits need at least 4 samples");
    XY xy = to_doubles(samples);
    int interior = 0;
    for (double x : xy.x)
        if (x > 0.0 && x < 1.0) ++interior;
    if (interior < 3)
        fail("insufficient-interior-points",
             "power fits need at least 3 samples strictly inside (0,1)");

    const double starts[] = {0.5, 1.5, 2.0, 3.0, 5.0};
    bool any_converged = false;
    PowerParams best;
    double best_rms = 0;

    for (double alpha0 : starts) {
        PowerParams t = init_at_alpha(xy, alpha0);
        bool converged = false;
        for (int iter = 0; iter < 200; ++iter) {
            double jtj[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
            double jtr[3] = {0, 0, 0};
            for (size_t i = 0; i < xy.x.size(); ++i) {
                double x = xy.x[i];
                double xa = x == 0.0 ? 0.0 : std::pow(x, t.alpha);
                double r = xy.y[i] - (t.scale * xa + t.slope * x);
                double j[3] = {xa, x > 0.0 ? t.scale * xa * std::log(x) : 0.0, x};
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
                    jtr[a] += j[a] * r;
                }
            }
            double mu = 1e-12 * std::max({jtj[0][0], jtj[1][1], jtj[2][2], 1.0});
            for (int a = 0; a < 3; ++a) jtj[a][a] += mu;
            double delta[3] = {0, 0, 0};
            if (!solve3(jtj, jtr, delta)) break;
            t.scale += delta[0];
            t.alpha = std::clamp(t.alpha + delta[1], kAlphaMin, kAlphaMax);
            t.slope += delta[2];
            double step = std::max({std::abs(delta[0]), std::abs(delta[1]), std::abs(delta[2])});
            if (step < 1e-12) {
                converged = true;
                break;
            }
        }
        if (!converged) continue;
        std::vector<double> r(xy.x.size());
        for (size_t i = 0; i < xy.x.size(); ++i) r[i] = xy.y[i] - power_model(t, xy.x[i]);
        double rms = rms_of(r);
        if (!any_converged || rms < best_rms) {
            any_converged = true;
            best = t;
            best_rms = rms;
        }
    }
    if (!any_converged)
        fail("no-convergence", "no Gauss-Newton start converged on these samples");
    FitResult fit;
    fit.scale = best.scale;
    fit.alpha = best.alpha;
    fit.slope = best.slope;
    fit.rms = best_rms;
    return fit;
}

std::string FitResult::to_json() const {
    ordered_json j;
    j["family"] = to_string(family);
    if (alpha) j["alpha"] = *alpha;
    if (scale) j["scale"] = *scale;
    if (slope) j["slope"] = *slope;
    if (intercept) j["const"] = *intercept;
    j["rms"] = rms;
    return j.dump();
}

// ------------------------------------------------------------ classification

namespace {

constexpr int kFitGrid = 12; // sampling resolution for shape fits

enum class ShapeKind { zero, affine, power, unknown };

struct Shape {
    ShapeKind kind = ShapeKind::unknown;
    FitResult fit;
    double y0 = 0; // sample at x = 0 (power template has no intercept)
};

double fit_tolerance(const SampleSet& s) {
    double scale = 0;
    for (const auto& [x, y] : s.points) scale = std::max(scale, std::abs(y.to_double()));
    return 1e-9 * (1.0 + scale);
}

Shape shape_of(const IntervalFunction& fn) {
    SampleSet samples = SampleSet::on_grid(fn, kFitGrid);
    double tol = fit_tolerance(samples);
    Shape shape;
    for (const auto& [x, y] : samples.points)
        if (x.is_zero()) shape.y0 = y.to_double();

    try {
        FitResult affine = fit_affine_family(samples);
        if (affine.rms <= tol) {
            shape.fit = affine;
            shape.kind = (std::abs(*affine.slope) <= tol && std::abs(*affine.intercept) <= tol)
                             ? ShapeKind::zero
                             : ShapeKind::affine;
            return shape;
        }
    } catch (const Error&) {
        // fall through to the power template
    }
    try {
        // Subtract the sample at 0; the power template scale*x^alpha + slope*x
        // has no intercept of its own.
        SampleSet shifted = samples;
        for (auto& [x, y] : shifted.points)
            y = Scalar::of_double(y.to_double() - shape.y0);
        FitResult power = fit_power_family(shifted);
        if (power.rms <= tol) {
            shape.fit = power;
            shape.fit.intercept = shape.y0;
            shape.kind = ShapeKind::power;
            return shape;
        }
        shape.fit = power;
    } catch (const Error&) {
        // neither template fits
    }
    shape.kind = ShapeKind::unknown;
    return shape;
}

bool near(double a, double b, double tol = 1e-7) { return std::abs(a - b) <= tol; }

FamilyTag classify_eq110_shapes(const Shape& lead, const std::vector<Shape>& partners, int n) {
    if (lead.kind == ShapeKind::zero) return FamilyTag::f41;
    if (lead.kind == ShapeKind::affine) {
        double c = *lead.fit.slope + static_cast<double>(n) * *lead.fit.intercept;
        if (near(c, 0.0)) return FamilyTag::none;
        for (const Shape& g : partners) {
            if (g.kind != ShapeKind::affine && g.kind != ShapeKind::zero)
                return FamilyTag::none;
            if (!near(*g.fit.slope, *partners.front().fit.slope))
                return FamilyTag::none;
        }
        return FamilyTag::f42;
    }
    if (lead.kind == ShapeKind::power) {
        if (near(*lead.fit.scale, 0.0)) return FamilyTag::none;
        for (const Shape& g : partners) {
            if (g.kind != ShapeKind::power) return FamilyTag::none;
            if (!near(*g.fit.alpha, *lead.fit.alpha, 1e-6)) return FamilyTag::none;
            if (!near(*g.fit.scale, 1.0, 1e-6)) return FamilyTag::none;
        }
        return FamilyTag::f44;
    }
    return FamilyTag::none;
}

FamilyTag classify_eq111_shapes(const Shape& lead, int n) {
    if (lead.kind == ShapeKind::zero) return FamilyTag::f31i;
    if (lead.kind == ShapeKind::affine) {
        double cond = (*lead.fit.slope + *lead.fit.intercept) +
                      static_cast<double>(n - 1) * *lead.fit.intercept;
        return near(cond, 1.0) ? FamilyTag::f31ii : FamilyTag::f31i;
    }
    if (lead.kind == ShapeKind::power) {
        if (near(*lead.fit.scale, 1.0, 1e-6) && near(*lead.fit.slope, 0.0, 1e-6) &&
            near(lead.y0, 0.0))
            return FamilyTag::f33;
    }
    return FamilyTag::none;
}

} // namespace

ClassifyReport classify_solution_detailed(const SolutionBundle& bundle,
                                          const EquationSpec& spec, int d) {
    ClassifyReport out;
    // Tables are only defined at their listed abscissae, so the residual gate
    // stays on the rational grid for them.
    VerifyOptions vo;
    for (const IntervalFunction& fn : bundle.functions)
        if (std::holds_alternative<IntervalFunction::Table>(fn.form()))
            vo.include_irrationals = false;
    out.residual = verify_over_grid(spec, bundle, d, vo);
    out.residual_pass = out.residual.pass;
    if (!out.residual_pass) {
        out.family = FamilyTag::none;
        out.diagnostic = "residual exceeds tolerance";
        return out;
    }

    // The transform reduces equation 1.8 to 1.10; classify there and map back.
    if (spec.id == EquationId::eq18) {
        SolutionBundle reduced = bundle_to_eq110(bundle);
        EquationSpec reduced_spec = EquationSpec::of_bundle(reduced);
        ClassifyReport inner = classify_solution_detailed(reduced, reduced_spec, d);
        out.fits = inner.fits;
        out.diagnostic = inner.diagnostic;
        if (inner.family == FamilyTag::f41) out.family = FamilyTag::f51;
        else if (inner.family == FamilyTag::f42) out.family = FamilyTag::f52;
        else if (inner.family == FamilyTag::f44) out.family = FamilyTag::f54;
        else out.family = FamilyTag::none;
        for (FitResult& fit : out.fits) fit.family = out.family;
        return out;
    }

    std::vector<Shape> shapes;
    shapes.reserve(bundle.functions.size());
    for (const IntervalFunction& fn : bundle.functions) shapes.push_back(shape_of(fn));
    for (const Shape& s : shapes) out.fits.push_back(s.fit);

    switch (spec.id) {
    case EquationId::eq110:
        out.family = classify_eq110_shapes(shapes.front(),
                                           {shapes.begin() + 1, shapes.end()}, spec.n);
        break;
    case EquationId::eq111:
        out.family = classify_eq111_shapes(shapes.front(), spec.n);
        break;
    case EquationId::eq21:
        out.family = (shapes.front().kind == ShapeKind::affine ||
                      shapes.front().kind == ShapeKind::zero)
                         ? FamilyTag::r1
                         : FamilyTag::none;
        break;
    case EquationId::eq23: {
        bool ok = true;
        for (const Shape& s : shapes)
            if (s.kind != ShapeKind::affine && s.kind != ShapeKind::zero) ok = false;
        if (ok)
            for (const Shape& s : shapes)
                if (!near(*s.fit.slope, *shapes.front().fit.slope)) ok = false;
        out.family = ok ? FamilyTag::r2 : FamilyTag::none;
        break;
    }
    default:
        out.family = FamilyTag::none;
        out.diagnostic = "no classifier for this equation";
        break;
    }
    if (out.family == FamilyTag::none && out.diagnostic.empty())
        out.diagnostic = "no declared family matches the fitted shapes";
    for (FitResult& fit : out.fits) fit.family = out.family;
    return out;
}

FamilyTag classify_solution(const SolutionBundle& bundle, const EquationSpec& spec, int d) {
    return classify_solution_detailed(bundle, spec, d).family;
}

std::string ClassifyReport::to_json() const {
    ordered_json j;
    j["family"] = to_string(family);
    j["residual_pass"] = residual_pass;
    if (residual.exact)
        j["max_abs_residual"] = residual.max_abs_residual.str();
    else
        j["max_abs_residual"] = residual.max_abs_residual.float_value();
    ordered_json fits_json = ordered_json::array();
    for (const FitResult& f : fits) fits_json.push_back(ordered_json::parse(f.to_json()));
    j["fits"] = fits_json;
    if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
    return j.dump();
}

// ------------------------------------------------------------- grid solver

namespace {

struct GridSystem {
    std::vector<Rational> values;            // sorted unknown abscissae
    std::map<Rational, int> index;
    Eigen::MatrixXd rows;                    // pair equations, rhs 0
};

GridSystem assemble(const std::vector<IntervalFunction>& g, int n, int m, int d, int cap) {
    GridSystem sys;
    long dd = static_cast<long>(d) * d;
    for (int a = 0; a <= d; ++a)
        for (int b = 0; b <= d; ++b) {
            Rational v = make_rational_value(static_cast<long>(a) * b, dd);
            if (!sys.index.contains(v)) {
                sys.index.emplace(v, 0);
            }
        }
    if (static_cast<int>(sys.index.size()) > cap)
        fail("system-too-large", "unknown table exceeds the configured cap");
    for (auto& [v, idx] : sys.index) {
        idx = static_cast<int>(sys.values.size());
        sys.values.push_back(v);
    }

    std::vector<Distribution> ps = enumerate_grid(n, d);
    std::vector<Distribution> qs = enumerate_grid(m, d);
    sys.rows.resize(static_cast<long>(ps.size()) * static_cast<long>(qs.size()),
                    static_cast<long>(sys.values.size()));
    sys.rows.setZero();
    long row = 0;
    for (const Distribution& p : ps) {
        for (const Distribution& q : qs) {
            double G = 0;
            for (int j = 0; j < q.size(); ++j)
                G += g[static_cast<size_t>(j)].eval(q[j]).to_double();
            for (int i = 0; i < p.size(); ++i) {
                for (int j = 0; j < q.size(); ++j) {
                    Rational v = (p[i] * q[j]).rational_part();
                    sys.rows(row, sys.index.at(v)) += 1.0;
                }
                sys.rows(row, sys.index.at(p[i].rational_part())) -= G;
            }
            ++row;
        }
    }
    return sys;
}

} // namespace

GridSolveResult grid_solve_eq110(const std::vector<IntervalFunction>& g, int n, int m,
                                 int d, int cap) {
    if (n < 3 || m < 3) fail("k-too-small", "the grid solver needs n, m >= 3");
    if (static_cast<int>(g.size()) != m)
        fail("arity-mismatch", "expected m partner functions");
    GridSystem sys = assemble(g, n, m, d, cap);
    long cols = static_cast<long>(sys.values.size());

    Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    double smax = sigma.size() > 0 ? sigma(0) : 0.0;
    int null_dim = 0;
    for (long i = 0; i < sigma.size(); ++i)
        if (sigma(i) <= 1e-10 * std::max(smax, 1.0)) ++null_dim;
    null_dim += static_cast<int>(cols - sigma.size());

    // Pin the value at 1 to 1 so least squares picks a nonzero representative
    // of the solution space.
    Eigen::MatrixXd stacked(sys.rows.rows() + 1, cols);
    stacked.topRows(sys.rows.rows()) = sys.rows;
    stacked.bottomRows(1).setZero();
    stacked(sys.rows.rows(), sys.index.at(Rational(1))) = 1.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(stacked.rows());
    rhs(sys.rows.rows()) = 1.0;
    Eigen::VectorXd x =
        stacked.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);

    GridSolveResult out;
    out.rows = sys.rows.rows();
    out.nullspace_dimension = null_dim;
    out.residual_norm = (sys.rows * x).norm();
    out.table.points.reserve(static_cast<size_t>(cols));
    for (long i = 0; i < cols; ++i)
        out.table.points.emplace_back(Scalar::exact(sys.values[static_cast<size_t>(i)]),
                                      Scalar::of_double(x(i)));
    return out;
}

double grid_table_residual(const std::vector<IntervalFunction>& g, int n, int m, int d,
                           const SampleSet& table) {
    if (static_cast<int>(g.size()) != m)
        fail("arity-mismatch", "expected m partner functions");
    GridSystem sys = assemble(g, n, m, d, std::max(5000, 1 << 20));
    Eigen::VectorXd x(static_cast<long>(sys.values.size()));
    x.setZero();
    std::vector<bool> seen(sys.values.size(), false);
    for (const auto& [sx, sy] : table.points) {
        if (!sx.is_exact() || !sx.is_rational()) continue;
        auto it = sys.index.find(sx.rational_part());
        if (it == sys.index.end()) continue;
        x(it->second) = sy.to_double();
        seen[static_cast<size_t>(it->second)] = true;
    }
    for (size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            fail("table-miss", "table lacks a value at " + sys.values[i].get_str());
    return (sys.rows * x).norm();
}

} // namespace sumform
