#include "sumform/maps.hpp"

#include <cmath>

#include <json.hpp>

namespace sumform {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- AdditiveMap

Scalar AdditiveMap::eval(const Scalar& x) const {
    if (x.backend() == Backend::floating) {
        if (!is_linear())
            fail("nonlinear-additive-needs-exact",
                 "a non-linear additive map cannot act on float scalars");
        return Scalar::of_double(t_[0].get_d() * x.float_value());
    }
    const auto& c = x.coords();
    Rational v = t_[0] * c[0] + t_[1] * c[1] + t_[2] * c[2] + t_[3] * c[3];
    return Scalar::exact(std::move(v));
}

AdditiveMap AdditiveMap::operator+(const AdditiveMap& o) const {
    return AdditiveMap(t_[0] + o.t_[0], t_[1] + o.t_[1], t_[2] + o.t_[2], t_[3] + o.t_[3]);
}

AdditiveMap AdditiveMap::operator-(const AdditiveMap& o) const {
    return *this + (-o);
}

AdditiveMap AdditiveMap::operator-() const {
    return AdditiveMap(-t_[0], -t_[1], -t_[2], -t_[3]);
}

AdditiveMap AdditiveMap::scaled(const Rational& factor) const {
    return AdditiveMap(t_[0] * factor, t_[1] * factor, t_[2] * factor, t_[3] * factor);
}

// ---------------------------------------------------------- MultiplicativeMap

MultiplicativeMap MultiplicativeMap::power(long alpha) {
    if (alpha <= 0) fail("nonpositive-exponent", "power map needs alpha > 0");
    MultiplicativeMap m;
    m.kind_ = Kind::power;
    m.integer_exponent_ = true;
    m.alpha_int_ = alpha;
    return m;
}

MultiplicativeMap MultiplicativeMap::power_real(double alpha) {
    if (!(alpha > 0)) fail("nonpositive-exponent", "power map needs alpha > 0");
    MultiplicativeMap m;
    m.kind_ = Kind::power;
    m.integer_exponent_ = false;
    m.alpha_real_ = alpha;
    return m;
}

MultiplicativeMap MultiplicativeMap::support_indicator() {
    MultiplicativeMap m;
    m.kind_ = Kind::support_indicator;
    return m;
}

MultiplicativeMap MultiplicativeMap::one_at_one() {
    MultiplicativeMap m;
    m.kind_ = Kind::one_at_one;
    return m;
}

Scalar MultiplicativeMap::eval(const Scalar& x) const {
    Backend b = x.backend();
    if (x.sign() < 0 || (Scalar::one(b) - x).sign() < 0)
        fail("out-of-interval", "multiplicative maps are defined on [0,1]");
    switch (kind_) {
    case Kind::support_indicator:
        return x.is_zero() ? Scalar::zero(b) : Scalar::one(b);
    case Kind::one_at_one:
        return x.is_one() ? Scalar::one(b) : Scalar::zero(b);
    case Kind::power:
        if (x.is_zero()) return Scalar::zero(b); // 0^alpha := 0
        if (integer_exponent_) return x.pow_int(alpha_int_);
        if (b == Backend::exact)
            fail("backend-mismatch", "a real exponent forces the float backend");
        return Scalar::of_double(std::pow(x.float_value(), alpha_real_));
    }
    fail("unknown-form", "unreachable multiplicative kind");
}

// ------------------------------------------------------------ IntervalFunction

namespace {

Backend scalar_pair_backend(const Scalar& a, const Scalar& b) {
    if (a.backend() != b.backend())
        fail("backend-mismatch", "function parts mix exact and float scalars");
    return a.backend();
}

} // namespace

IntervalFunction IntervalFunction::affine(AdditiveMap map, Scalar constant) {
    return IntervalFunction(Affine{std::move(map), std::move(constant)});
}

IntervalFunction IntervalFunction::mult_combo(Scalar scale, MultiplicativeMap mult,
                                              AdditiveMap sub, Scalar constant) {
    scalar_pair_backend(scale, constant);
    return IntervalFunction(MultCombo{std::move(scale), mult, std::move(sub), std::move(constant)});
}

IntervalFunction IntervalFunction::transformed(IntervalFunction inner, Scalar lambda) {
    if (lambda.is_zero()) fail("lambda-zero", "transform needs lambda != 0");
    return IntervalFunction(Transformed{
        std::make_shared<const IntervalFunction>(std::move(inner)), std::move(lambda)});
}

IntervalFunction IntervalFunction::lifted(IntervalFunction inner, Scalar lambda) {
    if (lambda.is_zero()) fail("lambda-zero", "transform needs lambda != 0");
    return IntervalFunction(Lifted{
        std::make_shared<const IntervalFunction>(std::move(inner)), std::move(lambda)});
}

IntervalFunction IntervalFunction::table(std::vector<std::pair<Scalar, Scalar>> points) {
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                fail("duplicate-abscissa", "table abscissae must be distinct");
    return IntervalFunction(Table{std::move(points)});
}

IntervalFunction IntervalFunction::power(long alpha) {
    return mult_combo(Scalar::of_int(1), MultiplicativeMap::power(alpha),
                      AdditiveMap(), Scalar());
}

IntervalFunction IntervalFunction::linear(Rational slope) {
    return affine(AdditiveMap::linear(std::move(slope)), Scalar());
}

Backend IntervalFunction::backend() const {
    if (const auto* a = std::get_if<Affine>(&form_)) return a->constant.backend();
    if (const auto* m = std::get_if<MultCombo>(&form_)) return m->scale.backend();
    if (const auto* t = std::get_if<Transformed>(&form_)) return t->lambda.backend();
    if (const auto* l = std::get_if<Lifted>(&form_)) return l->lambda.backend();
    const auto& tb = std::get<Table>(form_);
    return tb.points.empty() ? Backend::exact : tb.points.front().first.backend();
}

Scalar IntervalFunction::eval(const Scalar& x) const {
    if (const auto* a = std::get_if<Affine>(&form_))
        return a->map.eval(x) + a->constant;
    if (const auto* m = std::get_if<MultCombo>(&form_))
        return m->scale * (m->mult.eval(x) - m->sub.eval(x)) + m->constant;
    if (const auto* t = std::get_if<Transformed>(&form_))
        return (t->inner->eval(x) - x) / t->lambda;
    if (const auto* l = std::get_if<Lifted>(&form_))
        return x + l->lambda * l->inner->eval(x);
    const auto& tb = std::get<Table>(form_);
    for (const auto& [px, py] : tb.points)
        if (px == x) return py;
    fail("table-miss", "no table entry at x = " + x.str());
}

IntervalFunction IntervalFunction::plus_constant(const Scalar& c) const {
    if (const auto* a = std::get_if<Affine>(&form_))
        return affine(a->map, a->constant + c);
    if (const auto* m = std::get_if<MultCombo>(&form_))
        return mult_combo(m->scale, m->mult, m->sub, m->constant + c);
    if (const auto* t = std::get_if<Transformed>(&form_))
        return transformed(t->inner->plus_constant(t->lambda * c), t->lambda);
    if (const auto* l = std::get_if<Lifted>(&form_))
        return lifted(l->inner->plus_constant(c / l->lambda), l->lambda);
    Table shifted = std::get<Table>(form_);
    for (auto& [px, py] : shifted.points) py = py + c;
    return IntervalFunction(std::move(shifted));
}

namespace {

Scalar convert_scalar(const Scalar& s, Backend target) {
    if (s.backend() == target) return s;
    if (target == Backend::floating) return Scalar::of_double(s.to_double());
    fail("backend-mismatch", "float scalars cannot be promoted to exact");
}

} // namespace

IntervalFunction IntervalFunction::to_backend(Backend target) const {
    if (const auto* a = std::get_if<Affine>(&form_)) {
        if (target == Backend::floating && !a->map.is_linear())
            fail("nonlinear-additive-needs-exact",
                 "cannot lower a non-linear additive map to floats");
        return affine(a->map, convert_scalar(a->constant, target));
    }
    if (const auto* m = std::get_if<MultCombo>(&form_)) {
        if (target == Backend::floating && !m->sub.is_linear())
            fail("nonlinear-additive-needs-exact",
                 "cannot lower a non-linear additive map to floats");
        return mult_combo(convert_scalar(m->scale, target), m->mult, m->sub,
                          convert_scalar(m->constant, target));
    }
    if (const auto* t = std::get_if<Transformed>(&form_))
        return transformed(t->inner->to_backend(target), convert_scalar(t->lambda, target));
    if (const auto* l = std::get_if<Lifted>(&form_))
        return lifted(l->inner->to_backend(target), convert_scalar(l->lambda, target));
    const auto& tb = std::get<Table>(form_);
    std::vector<std::pair<Scalar, Scalar>> pts;
    pts.reserve(tb.points.size());
    for (const auto& [px, py] : tb.points)
        pts.emplace_back(convert_scalar(px, target), convert_scalar(py, target));
    return table(std::move(pts));
}

// ------------------------------------------------------------- JSON schema

namespace {

ordered_json scalar_to_json(const Scalar& s) {
    if (s.is_exact()) return s.str();
    return s.float_value();
}

Scalar scalar_from_json(const ordered_json& j, const std::string& path) {
    if (j.is_string()) {
        try {
            return Scalar::parse_exact(j.get<std::string>());
        } catch (const Error& e) {
            fail("schema-violation", path + ": " + e.what());
        }
    }
    if (j.is_number()) return Scalar::of_double(j.get<double>());
    fail("schema-violation", path + ": expected a scalar (string or number)");
}

ordered_json additive_to_json(const AdditiveMap& a) {
    ordered_json arr = ordered_json::array();
    for (const Rational& t : a.basis_values()) arr.push_back(t.get_str());
    return arr;
}

AdditiveMap additive_from_json(const ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4)
        fail("schema-violation", path + ": expected 4 rational basis values");
    std::array<Rational, 4> t;
    for (size_t i = 0; i < 4; ++i) {
        const auto& cell = j[i];
        std::string spath = path + "/" + std::to_string(i);
        if (!cell.is_string()) fail("schema-violation", spath + ": expected a rational string");
        Scalar s = scalar_from_json(cell, spath);
        if (!s.is_exact() || !s.is_rational())
            fail("schema-violation", spath + ": basis values must be rational");
        t[i] = s.rational_part();
    }
    return AdditiveMap(t[0], t[1], t[2], t[3]);
}

ordered_json mult_kind_to_json(const MultiplicativeMap& m) {
    switch (m.kind()) {
    case MultiplicativeMap::Kind::support_indicator: return "support";
    case MultiplicativeMap::Kind::one_at_one: return "one-at-one";
    case MultiplicativeMap::Kind::power:
        if (m.has_integer_exponent()) return m.exponent_int();
        return m.exponent();
    }
    fail("unknown-form", "unreachable multiplicative kind");
}

MultiplicativeMap mult_kind_from_json(const ordered_json& j, const std::string& path) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "support") return MultiplicativeMap::support_indicator();
        if (s == "one-at-one") return MultiplicativeMap::one_at_one();
        fail("schema-violation", path + ": unknown multiplicative kind \"" + s + "\"");
    }
    if (j.is_number_integer()) return MultiplicativeMap::power(j.get<long>());
    if (j.is_number()) return MultiplicativeMap::power_real(j.get<double>());
    fail("schema-violation", path + ": expected an exponent or a kind name");
}

ordered_json function_to_json_obj(const IntervalFunction& f) {
    ordered_json out;
    if (const auto* a = std::get_if<IntervalFunction::Affine>(&f.form())) {
        out["form"] = "affine_additive";
        out["t"] = additive_to_json(a->map);
        out["const"] = scalar_to_json(a->constant);
        return out;
    }
    if (const auto* m = std::get_if<IntervalFunction::MultCombo>(&f.form())) {
        out["form"] = "mult_combo";
        out["scale"] = scalar_to_json(m->scale);
        out["alpha"] = mult_kind_to_json(m->mult);
        out["B"] = additive_to_json(m->sub);
        out["const"] = scalar_to_json(m->constant);
        return out;
    }
    if (const auto* t = std::get_if<IntervalFunction::Transformed>(&f.form())) {
        out["form"] = "transformed";
        out["lambda"] = scalar_to_json(t->lambda);
        out["inner"] = function_to_json_obj(*t->inner);
        return out;
    }
    if (const auto* l = std::get_if<IntervalFunction::Lifted>(&f.form())) {
        out["form"] = "lifted";
        out["lambda"] = scalar_to_json(l->lambda);
        out["inner"] = function_to_json_obj(*l->inner);
        return out;
    }
    const auto& tb = std::get<IntervalFunction::Table>(f.form());
    out["form"] = "table";
    ordered_json pts = ordered_json::array();
    for (const auto& [px, py] : tb.points)
        pts.push_back(ordered_json::array({scalar_to_json(px), scalar_to_json(py)}));
    out["points"] = pts;
    return out;
}

const ordered_json& require_field(const ordered_json& j, const char* name,
                                  const std::string& path) {
    auto it = j.find(name);
    if (it == j.end())
        fail("schema-violation", path + ": missing field \"" + std::string(name) + "\"");
    return *it;
}

IntervalFunction function_from_json_obj(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) fail("schema-violation", path + ": expected an object");
    const auto& form = require_field(j, "form", path);
    if (!form.is_string()) fail("schema-violation", path + "/form: expected a string");
    std::string name = form.get<std::string>();
    if (name == "affine_additive") {
        AdditiveMap map = additive_from_json(require_field(j, "t", path), path + "/t");
        Scalar c = scalar_from_json(require_field(j, "const", path), path + "/const");
        return IntervalFunction::affine(std::move(map), std::move(c));
    }
    if (name == "mult_combo") {
        Scalar scale = scalar_from_json(require_field(j, "scale", path), path + "/scale");
        MultiplicativeMap mult = mult_kind_from_json(require_field(j, "alpha", path), path + "/alpha");
        AdditiveMap sub = additive_from_json(require_field(j, "B", path), path + "/B");
        Scalar c = scalar_from_json(require_field(j, "const", path), path + "/const");
        return IntervalFunction::mult_combo(std::move(scale), mult, std::move(sub), std::move(c));
    }
    if (name == "transformed" || name == "lifted") {
        Scalar lambda = scalar_from_json(require_field(j, "lambda", path), path + "/lambda");
        IntervalFunction inner =
            function_from_json_obj(require_field(j, "inner", path), path + "/inner");
        return name == "transformed"
                   ? IntervalFunction::transformed(std::move(inner), std::move(lambda))
                   : IntervalFunction::lifted(std::move(inner), std::move(lambda));
    }
    if (name == "table") {
        const auto& pts = require_field(j, "points", path);
        if (!pts.is_array()) fail("schema-violation", path + "/points: expected an array");
        std::vector<std::pair<Scalar, Scalar>> points;
        for (size_t i = 0; i < pts.size(); ++i) {
            std::string ppath = path + "/points/" + std::to_string(i);
            const auto& cell = pts[i];
            if (!cell.is_array() || cell.size() != 2)
                fail("schema-violation", ppath + ": expected an [x, y] pair");
            points.emplace_back(scalar_from_json(cell[0], ppath + "/0"),
                                scalar_from_json(cell[1], ppath + "/1"));
        }
        return IntervalFunction::table(std::move(points));
    }
    fail("unknown-form", path + ": unknown function form \"" + name + "\"");
}

} // namespace

std::string IntervalFunction::to_json() const {
    return function_to_json_obj(*this).dump();
}

IntervalFunction IntervalFunction::from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("schema-violation", ": not valid JSON");
    return function_from_json_obj(j, "");
}

// Internal hook for other modules that already hold parsed JSON.
IntervalFunction function_from_json_node(const ordered_json& j, const std::string& path) {
    return function_from_json_obj(j, path);
}

ordered_json function_to_json_node(const IntervalFunction& f) {
    return function_to_json_obj(f);
}

} // namespace sumform
