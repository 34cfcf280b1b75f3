#include "orlicz/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "orlicz/errors.hpp"

namespace orlicz::config {

namespace {

[[noreturn]] void fail(const std::string& what, const std::string& msg) { throw UsageError("--" + what + ": " + msg); }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
        if (!ok) fail(what, "unknown field '" + it.key() + "'");
    }
}

double as_number(const json& v, const std::string& field, const std::string& what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s == "inf" || s == "+inf") return kInfinity;
        if (s == "-inf") return -kInfinity;
    }
    fail(what, "field '" + field + "' must be a number");
}

double num(const json& j, const char* key, const std::string& what) {
    if (!j.contains(key)) fail(what, std::string("field '") + key + "' is required");
    return as_number(j.at(key), key, what);
}

double num_or(const json& j, const char* key, double fallback, const std::string& what) {
    return j.contains(key) ? as_number(j.at(key), key, what) : fallback;
}

int integer(const json& j, const char* key, const std::string& what) {
    double v = num(j, key, what);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(what, std::string("field '") + key + "' must be an integer");
    return static_cast<int>(v);
}

std::vector<double> numbers(const json& v, const std::string& field, const std::string& what) {
    if (!v.is_array()) fail(what, "field '" + field + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_number(e, field, what));
    return out;
}

const json& object(const json& j, const std::string& what) {
    if (!j.is_object()) fail(what, "expected a JSON object");
    return j;
}

std::string kind_of(const json& j, const std::string& what) {
    if (!j.contains("kind") || !j.at("kind").is_string()) fail(what, "field 'kind' is required");
    return j.at("kind").get<std::string>();
}

double parse_number(const std::string& s, const std::string& what) {
    if (s == "inf" || s == "+inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(what, "'" + s + "' is not a number");
    }
    if (used != s.size()) fail(what, "'" + s + "' is not a number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

} // namespace

json load(const std::string& text, const std::string& what) {
    if (text.empty()) fail(what, "empty value");
    try {
        if (text[0] == '@') {
            std::ifstream in(text.substr(1));
            if (!in) fail(what, "cannot read file '" + text.substr(1) + "'");
            return json::parse(in);
        }
        if (text[0] == '{' || text[0] == '[') return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(what, std::string("invalid JSON: ") + e.what());
    }
    // kind:key=value,key=value
    json j = json::object();
    auto colon = text.find(':');
    j["kind"] = text.substr(0, colon);
    if (colon != std::string::npos) {
        for (const auto& kv : split(text.substr(colon + 1), ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) fail(what, "shorthand entries look like key=value, got '" + kv + "'");
            j[kv.substr(0, eq)] = parse_number(kv.substr(eq + 1), what);
        }
    }
    return j;
}

YoungFunction young_from_json(const json& jin, const std::string& what) {
    const json& j = object(jin, what);
    const std::string kind = kind_of(j, what);
    YoungFunction out = YoungFunction::power(1.0);
    if (kind == "power") {
        check_keys(j, {"kind", "q", "cap"}, what);
        double q = num(j, "q", what);
        if (!(q > 0.0) || !std::isfinite(q)) fail(what, "field 'q' must be positive");
        out = YoungFunction::power(q);
    } else if (kind == "appendix-exp") {
        check_keys(j, {"kind", "n", "cap"}, what);
        int n = integer(j, "n", what);
        if (n < 1) fail(what, "field 'n' must be >= 1");
        out = YoungFunction::appendix_exp(n);
    } else if (kind == "flat") {
        check_keys(j, {"kind", "knee", "cap"}, what);
        double knee = num(j, "knee", what);
        if (!(knee >= 0.0) || !std::isfinite(knee)) fail(what, "field 'knee' must be finite and >= 0");
        out = YoungFunction::flat_then_linear(knee);
    } else if (kind == "piecewise") {
        check_keys(j, {"kind", "pieces", "label", "cap"}, what);
        if (!j.contains("pieces") || !j.at("pieces").is_array()) fail(what, "field 'pieces' must be an array");
        std::vector<YoungPiece> pieces;
        for (const auto& p : j.at("pieces")) {
            object(p, what);
            check_keys(p, {"from", "form", "coeffs"}, what);
            YoungPiece piece;
            piece.from = num(p, "from", what);
            std::string form = p.value("form", std::string("polynomial"));
            if (form == "polynomial") piece.form = YoungPiece::Form::polynomial;
            else if (form == "monomial") piece.form = YoungPiece::Form::monomial;
            else if (form == "exp_reciprocal") piece.form = YoungPiece::Form::exp_reciprocal;
            else fail(what, "field 'form' must be polynomial, monomial or exp_reciprocal");
            if (!p.contains("coeffs")) fail(what, "field 'coeffs' is required");
            piece.coeffs = numbers(p.at("coeffs"), "coeffs", what);
            pieces.push_back(std::move(piece));
        }
        try {
            out = YoungFunction::piecewise(std::move(pieces), j.value("label", std::string("piecewise")));
        } catch (const UsageError& e) {
            fail(what, e.what());
        }
    } else {
        fail(what, "unknown kind '" + kind + "'");
    }
    if (j.contains("cap")) out = out.with_domain_cap(num(j, "cap", what));
    return out;
}

GrowthFunction phi_from_json(const json& jin, const std::string& what) {
    const json& j = object(jin, what);
    const std::string kind = kind_of(j, what);
    if (kind == "power") {
        if (j.contains("p")) {
            check_keys(j, {"kind", "p", "n"}, what);
            double p = num(j, "p", what);
            if (!(p > 0.0) || !std::isfinite(p)) fail(what, "field 'p' must be positive");
            int n = integer(j, "n", what);
            if (n < 1) fail(what, "field 'n' must be >= 1");
            return GrowthFunction::morrey(p, n);
        }
        check_keys(j, {"kind", "exponent", "scale"}, what);
        double scale = num_or(j, "scale", 1.0, what);
        if (!(scale > 0.0) || !std::isfinite(scale)) fail(what, "field 'scale' must be positive");
        return GrowthFunction::power(num(j, "exponent", what), scale);
    }
    if (kind == "constant") {
        check_keys(j, {"kind", "c"}, what);
        double c = num(j, "c", what);
        if (!(c > 0.0) || !std::isfinite(c)) fail(what, "field 'c' must be positive");
        return GrowthFunction::constant(c);
    }
    if (kind == "oscillating") {
        check_keys(j, {"kind", "exponent"}, what);
        return GrowthFunction::oscillating(num_or(j, "exponent", 0.0, what));
    }
    if (kind == "log-power") {
        check_keys(j, {"kind", "exponent"}, what);
        return GrowthFunction::log_power(num_or(j, "exponent", 0.0, what));
    }
    if (kind == "piecewise") {
        check_keys(j, {"kind", "pieces", "label"}, what);
        if (!j.contains("pieces") || !j.at("pieces").is_array()) fail(what, "field 'pieces' must be an array");
        std::vector<PowerPiece> pieces;
        for (const auto& p : j.at("pieces")) {
            object(p, what);
            check_keys(p, {"from", "scale", "exponent"}, what);
            pieces.push_back(PowerPiece{num(p, "from", what), num_or(p, "scale", 1.0, what), num(p, "exponent", what)});
        }
        try {
            return GrowthFunction::piecewise(std::move(pieces), j.value("label", std::string("piecewise")));
        } catch (const UsageError& e) {
            fail(what, e.what());
        }
    }
    fail(what, "unknown kind '" + kind + "'");
}

SimpleFunction function_from_json(const json& j, const std::string& what) {
    const json* cells = &j;
    std::size_t n = 0;
    if (j.is_object()) {
        check_keys(j, {"n", "cells"}, what);
        if (j.contains("n")) {
            int v = integer(j, "n", what);
            if (v < 1) fail(what, "field 'n' must be >= 1");
            n = static_cast<std::size_t>(v);
        }
        if (!j.contains("cells")) fail(what, "field 'cells' is required");
        cells = &j.at("cells");
    }
    if (!cells->is_array()) fail(what, "expected a list of cells");
    std::vector<Cell> out;
    for (const auto& c : *cells) {
        object(c, what);
        check_keys(c, {"box", "value"}, what);
        if (!c.contains("box") || !c.at("box").is_array()) fail(what, "field 'box' must be a list of [lo, hi] pairs");
        std::vector<Interval> sides;
        for (const auto& s : c.at("box")) {
            if (!s.is_array() || s.size() != 2) fail(what, "field 'box' must be a list of [lo, hi] pairs");
            double lo = as_number(s[0], "box", what), hi = as_number(s[1], "box", what);
            if (std::isnan(lo) || std::isnan(hi) || lo > hi) fail(what, "box sides need lo <= hi");
            sides.push_back({lo, hi});
        }
        if (sides.empty()) fail(what, "field 'box' must not be empty");
        if (n == 0) n = sides.size();
        if (sides.size() != n) fail(what, "all boxes must have the same dimension");
        double v = c.contains("value") ? as_number(c.at("value"), "value", what) : 1.0;
        if (!(v >= 0.0) || !std::isfinite(v)) fail(what, "field 'value' must be finite and >= 0");
        out.push_back({Box(std::move(sides)), v});
    }
    if (n == 0) fail(what, "an empty cell list needs an explicit 'n'");
    try {
        return SimpleFunction(n, std::move(out));
    } catch (const std::invalid_argument& e) {
        fail(what, e.what());
    } catch (const std::domain_error& e) {
        fail(what, e.what());
    }
}

SearchSpec search_from_json(const json& jin, const std::string& what) {
    const json& j = object(jin, what);
    check_keys(j,
               {"geometry", "j_min", "j_max", "refine_depth", "max_axis_coords", "max_centers", "max_radii", "refine_top",
                "pairwise_radii", "extra_centers", "extra_radii"},
               what);
    SearchSpec s;
    if (j.contains("geometry")) {
        std::string g = j.at("geometry").is_string() ? j.at("geometry").get<std::string>() : "";
        if (g == "ball") s.geometry = Geometry::ball;
        else if (g == "cube") s.geometry = Geometry::cube;
        else fail(what, "field 'geometry' must be \"ball\" or \"cube\"");
    }
    auto count = [&](const char* key, std::size_t& dst) {
        if (!j.contains(key)) return;
        int v = integer(j, key, what);
        if (v < 0) fail(what, std::string("field '") + key + "' must be >= 0");
        dst = static_cast<std::size_t>(v);
    };
    if (j.contains("j_min")) s.j_min = integer(j, "j_min", what);
    if (j.contains("j_max")) s.j_max = integer(j, "j_max", what);
    if (s.j_min > s.j_max) fail(what, "j_min must not exceed j_max");
    if (j.contains("refine_depth")) {
        s.refine_depth = integer(j, "refine_depth", what);
        if (s.refine_depth < 0) fail(what, "field 'refine_depth' must be >= 0");
    }
    count("max_axis_coords", s.max_axis_coords);
    count("max_centers", s.max_centers);
    count("max_radii", s.max_radii);
    count("refine_top", s.refine_top);
    if (j.contains("pairwise_radii")) {
        if (!j.at("pairwise_radii").is_boolean()) fail(what, "field 'pairwise_radii' must be a boolean");
        s.pairwise_radii = j.at("pairwise_radii").get<bool>();
    }
    if (j.contains("extra_centers")) {
        if (!j.at("extra_centers").is_array()) fail(what, "field 'extra_centers' must be a list of points");
        for (const auto& c : j.at("extra_centers")) s.extra_centers.push_back(numbers(c, "extra_centers", what));
    }
    if (j.contains("extra_radii")) s.extra_radii = numbers(j.at("extra_radii"), "extra_radii", what);
    return s;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) fail(what, "matrix must be a non-empty list of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : j) {
        rows.push_back(numbers(r, "matrix", what));
        if (rows.back().size() != j.size()) fail(what, "matrix must be square");
    }
    for (const auto& r : rows)
        for (double v : r)
            if (!std::isfinite(v)) fail(what, "matrix entries must be finite");
    return Matrix::from_rows(rows);
}

AffineMap map_from_json(const json& jin, const std::string& what) {
    const json& j = object(jin, what);
    const std::string kind = kind_of(j, what);
    AffineMap m;
    try {
        if (kind == "diag") {
            check_keys(j, {"kind", "d", "b"}, what);
            if (!j.contains("d")) fail(what, "field 'd' is required");
            auto d = numbers(j.at("d"), "d", what);
            if (d.empty()) fail(what, "field 'd' must not be empty");
            m = AffineMap::diagonal(d);
        } else if (kind == "perm") {
            check_keys(j, {"kind", "perm", "signs", "b"}, what);
            if (!j.contains("perm")) fail(what, "field 'perm' is required");
            std::vector<std::size_t> perm;
            for (double v : numbers(j.at("perm"), "perm", what)) {
                if (v < 0 || v != std::floor(v)) fail(what, "field 'perm' must hold indices");
                perm.push_back(static_cast<std::size_t>(v));
            }
            std::vector<double> signs = j.contains("signs") ? numbers(j.at("signs"), "signs", what) : std::vector<double>{};
            m = AffineMap::signed_permutation(perm, signs);
        } else if (kind == "affine") {
            check_keys(j, {"kind", "A", "b"}, what);
            if (!j.contains("A")) fail(what, "field 'A' is required");
            m = AffineMap::linear(matrix_from_json(j.at("A"), what));
        } else if (kind == "dilation") {
            check_keys(j, {"kind", "c", "n", "b"}, what);
            int n = integer(j, "n", what);
            if (n < 1) fail(what, "field 'n' must be >= 1");
            m = AffineMap::dilation(num(j, "c", what), static_cast<std::size_t>(n));
        } else if (kind == "rotation") {
            check_keys(j, {"kind", "n", "i", "j", "theta", "b"}, what);
            int n = j.contains("n") ? integer(j, "n", what) : 2;
            int a = j.contains("i") ? integer(j, "i", what) : 0;
            int b = j.contains("j") ? integer(j, "j", what) : 1;
            if (n < 2 || a < 0 || b < 0) fail(what, "rotation needs n >= 2 and axes in range");
            m = AffineMap::rotation(static_cast<std::size_t>(n), static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                                    num(j, "theta", what));
        } else {
            fail(what, "unknown kind '" + kind + "'");
        }
    } catch (const DomainError& e) {
        fail(what, e.what());
    }
    if (j.contains("b")) {
        m.b = numbers(j.at("b"), "b", what);
        if (m.b.size() != m.dim()) fail(what, "field 'b' must have n entries");
    }
    if (!(std::abs(m.determinant()) > 0.0)) fail(what, "map must be invertible");
    return m;
}

std::vector<DiffeoSample> samples_from_json(const json& jin, const std::string& what) {
    const json* arr = &jin;
    if (jin.is_object()) {
        check_keys(jin, {"samples"}, what);
        if (!jin.contains("samples")) fail(what, "field 'samples' is required");
        arr = &jin.at("samples");
    }
    if (!arr->is_array()) fail(what, "expected a list of samples");
    std::vector<DiffeoSample> out;
    for (const auto& s : *arr) {
        object(s, what);
        check_keys(s, {"x0", "jacobian"}, what);
        if (!s.contains("jacobian")) fail(what, "field 'jacobian' is required");
        DiffeoSample d;
        d.jacobian = matrix_from_json(s.at("jacobian"), what);
        d.x0 = s.contains("x0") ? numbers(s.at("x0"), "x0", what) : Point(d.jacobian.n(), 0.0);
        if (d.x0.size() != d.jacobian.n()) fail(what, "field 'x0' must match the jacobian size");
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    if (text.empty()) return out;
    for (const auto& s : split(text, ',')) out.push_back(parse_number(s, what));
    return out;
}

std::vector<double> parse_range(const std::string& text, const std::string& what) {
    if (text.find(':') == std::string::npos) return parse_list(text, what);
    auto parts = split(text, ':');
    if (parts.size() < 2 || parts.size() > 3) fail(what, "ranges look like lo:hi or lo:hi:step");
    double lo = parse_number(parts[0], what), hi = parse_number(parts[1], what);
    double step = parts.size() == 3 ? parse_number(parts[2], what) : 1.0;
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || !std::isfinite(step))
        fail(what, "ranges must be finite with a positive step");
    std::vector<double> out;
    const double span = (hi - lo) / step;
    if (span > 1e7) fail(what, "range has too many points");
    for (long i = 0; lo + static_cast<double>(i) * step <= hi + 1e-12 * std::max(1.0, std::abs(hi)); ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const Box& b) {
    json a = json::array();
    for (const auto& s : b.sides) {
        auto end = [](double v) { return std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : "-inf"); };
        a.push_back(json::array({end(s.lo), end(s.hi)}));
    }
    return a;
}

json to_json(const SimpleFunction& f) {
    json cells = json::array();
    for (const auto& c : f.cells()) cells.push_back({{"box", to_json(c.box)}, {"value", c.value}});
    return {{"n", f.dim()}, {"cells", cells}};
}

} // namespace orlicz::config
