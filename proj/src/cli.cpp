#include "orlicz/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "orlicz/appendix.hpp"
#include "orlicz/compose.hpp"
#include "orlicz/config.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/indicators.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz::cli {

namespace {

using config::json;
using config::number;

struct Options {
    std::string f, young, phi, search, map, samples, a, which, check, output;
    std::vector<std::string> ranges;
    double tol = 1e-9;
    std::optional<double> band;
    double cap = 1e5;
    int n = 0;
    int which_k = 0;
    int count = 10;
    std::uint64_t seed = 0;
    double grid_min = 1e-6, grid_max = 1e6;
    int grid_points = 40;
    std::vector<int> psi_k;
    bool halfcylinder = false;
    bool timings = false;
};

json vec(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

json opt(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json to_json(const ClassCertificate& c, const std::string& label) {
    json j = {{"phi", label},
              {"grid", c.grid_spec},
              {"in_G0", c.in_G0},
              {"phi_at_min", number(c.phi_at_min)},
              {"phi_at_max", number(c.phi_at_max)},
              {"epsilon", c.epsilon},
              {"C1", opt(c.C1)},
              {"C2", opt(c.C2)},
              {"C3", opt(c.C3)},
              {"C1_empirical", number(c.C1_empirical)},
              {"C2_empirical", number(c.C2_empirical)},
              {"C3_empirical", number(c.C3_empirical)},
              {"cap", c.cap},
              {"almost_decreasing", c.almost_decreasing()},
              {"in_G1dec", c.in_G1dec()},
              {"in_G2dec", c.in_G2dec()},
              {"phi_half", number(c.phi_half)}};
    j["doubling_pair"] = c.doubling_pair ? json::array({number(c.doubling_pair->first), number(c.doubling_pair->second)})
                                         : json(nullptr);
    return j;
}

json to_json(const YoungCertificate& c, const std::string& label) {
    return {{"young", label},
            {"grid_points", c.grid_points},
            {"zero_at_origin", c.zero_at_origin},
            {"monotone", c.monotone},
            {"convex", c.convex},
            {"unbounded", c.unbounded},
            {"worst_convexity_defect", number(c.worst_convexity_defect)},
            {"worst_convexity_at", json::array({number(c.worst_convexity_at_s), number(c.worst_convexity_at_t)})},
            {"worst_monotone_drop", number(c.worst_monotone_drop)},
            {"pass", c.pass()}};
}

json to_json(const PsiProfile& p) {
    return {{"k", p.k},
            {"C_grid", vec(p.C_grid)},
            {"r_grid", p.r_grid_spec},
            {"direction", to_string(p.direction)},
            {"A_inc", number(p.A_inc)},
            {"A_dec", number(p.A_dec)},
            {"A_inc_extended", number(p.A_inc_extended)},
            {"A_dec_extended", number(p.A_dec_extended)},
            {"empirical_constant", number(p.empirical_constant)},
            {"diagnostic", p.diagnostic}};
}

json to_json(const Witness& w) {
    return {{"center", vec(w.center)}, {"radius", number(w.radius)}, {"geometry", to_string(w.geometry)}};
}

json to_json(const NormEstimate& e) {
    return {{"value", number(e.value)},
            {"lo", number(e.lo)},
            {"hi", number(e.hi)},
            {"witness", to_json(e.witness)},
            {"converged", e.converged},
            {"upper_certified", e.upper_certified},
            {"search", e.search_spec},
            {"diagnostic", e.diagnostic}};
}

json to_json(const DilationBounds& d) {
    return {{"c", number(d.c)}, {"lower", number(d.lower)}, {"upper", number(d.upper)}, {"phi_c", number(d.phi_c)}};
}

std::vector<double> class_grid(const Options& o) {
    if (!(o.grid_min > 0.0) || !(o.grid_max > o.grid_min) || o.grid_points < 2)
        throw UsageError("--grid-min/--grid-max/--grid-points describe an invalid grid");
    return log_grid(o.grid_min, o.grid_max, static_cast<std::size_t>(o.grid_points));
}

std::vector<double> young_grid() {
    std::vector<double> g{0.0};
    for (double t : log_grid(1e-6, 1e6, 121)) g.push_back(t);
    return g;
}

// Portable uniform [0, 1) from a 64-bit engine.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<SimpleFunction> random_boxes(std::size_t n, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SimpleFunction> out;
    for (int i = 0; i < count; ++i) {
        std::vector<Interval> s(n);
        for (auto& side : s) {
            double lo = -2.0 + 4.0 * unit(rng);
            double len = std::exp2(-3.0 + 6.0 * unit(rng));
            side = {lo, lo + len};
        }
        out.push_back(SimpleFunction::indicator(Box(std::move(s))));
    }
    return out;
}

struct Inputs {
    json echo = json::object();
    json certs = json::object();
};

YoungFunction need_young(const Options& o, Inputs& in) {
    if (o.young.empty()) throw UsageError("--young is required");
    json j = config::load(o.young, "young");
    in.echo["young"] = j;
    YoungFunction Phi = config::young_from_json(j);
    auto grid = young_grid();
    in.certs["young"] = to_json(certify_young(Phi, grid), Phi.label());
    return Phi;
}

struct PhiInput {
    GrowthFunction phi;
    ClassCertificate cert;
};

PhiInput need_phi(const Options& o, Inputs& in) {
    if (o.phi.empty()) throw UsageError("--phi is required");
    json j = config::load(o.phi, "phi");
    in.echo["phi"] = j;
    GrowthFunction phi = config::phi_from_json(j);
    ClassCertificate cert = certify_class(phi, default_class_grid());
    in.certs["phi"] = to_json(cert, phi.label());
    return {phi, cert};
}

SimpleFunction need_f(const Options& o, Inputs& in) {
    if (o.f.empty()) throw UsageError("--f is required");
    json j = config::load(o.f, "f");
    SimpleFunction f = config::function_from_json(j);
    in.echo["f"] = config::to_json(f);
    return f;
}

SearchSpec maybe_search(const Options& o, Inputs& in) {
    if (o.search.empty()) return {};
    json j = config::load(o.search, "search");
    in.echo["search"] = j;
    return config::search_from_json(j);
}

AffineMap need_map(const Options& o, Inputs& in) {
    if (o.map.empty()) throw UsageError("--map is required");
    json j = config::load(o.map, "map");
    in.echo["map"] = j;
    return config::map_from_json(j);
}

struct Outcome {
    json results;
    bool pass = true;
};

Outcome cmd_norm(const Options& o, Inputs& in, bool weak) {
    SimpleFunction f = need_f(o, in);
    YoungFunction Phi = need_young(o, in);
    PhiInput p = need_phi(o, in);
    SearchSpec s = maybe_search(o, in);
    if (!(o.tol > 0.0)) throw UsageError("--tol must be positive");
    in.echo["tol"] = o.tol;
    NormEstimate e = weak ? weak_orlicz_morrey_norm(f, Phi, p.phi, s, o.tol) : orlicz_morrey_norm(f, Phi, p.phi, s, o.tol);
    return {to_json(e), true};
}

Outcome cmd_indicator(const Options& o, Inputs& in) {
    auto a = config::parse_list(o.a, "a");
    if (a.empty()) throw UsageError("--a needs at least one side");
    if (o.n < 1) throw UsageError("--n must be >= 1");
    in.echo["a"] = vec(a);
    in.echo["n"] = o.n;
    YoungFunction Phi = need_young(o, in);
    PhiInput p = need_phi(o, in);
    BoxSpec spec = BoxSpec::make(a, static_cast<std::size_t>(o.n));
    IndicatorNorm r = box_indicator_norm(spec, Phi, p.phi);
    Outcome out;
    out.results = {{"value", number(r.value)},
                   {"argmax_R", number(r.argmax_R)},
                   {"regime", r.regime},
                   {"k1_extension", r.k1_extension},
                   {"evaluations", r.evaluations}};
    auto asym = [&](const AsymptoticEstimate& e) {
        json h = json::array();
        for (const auto& s : e.hypotheses) h.push_back(s);
        return json{{"which_k", e.which_k}, {"candidate", number(e.candidate)}, {"direct", number(e.direct)},
                    {"ratio", number(e.ratio)},  {"lower", number(e.lower)},         {"upper", number(e.upper)},
                    {"hypotheses", h},           {"pass", e.pass}};
    };
    if (o.which_k > 0) {
        in.echo["which_k"] = o.which_k;
        AsymptoticEstimate e = box_norm_asymptotic(spec, Phi, p.phi, static_cast<std::size_t>(o.which_k));
        out.results["asymptotic"] = asym(e);
        out.pass = out.pass && e.pass;
    }
    if (o.halfcylinder) {
        in.echo["halfcylinder"] = true;
        AsymptoticEstimate e = halfcylinder_norm(spec, Phi, p.phi);
        out.results["halfcylinder"] = asym(e);
        out.pass = out.pass && e.pass;
    }
    return out;
}

json map_summary(const AffineMap& m) {
    SvdResult svd = m.svd();
    return {{"n", m.dim()},
            {"determinant", number(m.determinant())},
            {"K", number(measure_dilation_constant(m))},
            {"singular_values", vec(svd.sigma)},
            {"L", number(svd.sigma.back())},
            {"box_preserving", m.is_box_preserving()}};
}

std::optional<std::vector<double>> positive_diagonal(const AffineMap& m) {
    std::vector<double> d(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (i == j) {
                if (!(m.A(i, i) > 0.0)) return std::nullopt;
                d[i] = m.A(i, i);
            } else if (m.A(i, j) != 0.0) {
                return std::nullopt;
            }
        }
    return d;
}

Outcome cmd_opnorm(const Options& o, Inputs& in) {
    AffineMap m = need_map(o, in);
    Outcome out;
    out.results = map_summary(m);
    if (o.phi.empty()) return out;
    PhiInput p = need_phi(o, in);
    const auto r_grid = log_grid(1e-6, 1e6, 241);
    std::optional<double> bound;
    if (p.cert.in_G1dec()) {
        bound = sufficiency_constant(m, p.phi, p.cert);
        out.results["upper_bound"] = number(*bound);
    } else {
        out.results["upper_bound"] = nullptr;
        out.results["note"] = "phi lacks certified C1/C2; no upper bound";
    }
    auto d = positive_diagonal(m);
    if (d && std::all_of(d->begin(), d->end(), [&](double v) { return v == d->front(); }))
        out.results["dilation"] = to_json(dilation_opnorm(p.phi, d->front(), r_grid));
    if (o.young.empty() || !m.is_box_preserving()) return out;
    YoungFunction Phi = need_young(o, in);
    in.echo["seed"] = o.seed;
    in.echo["count"] = o.count;
    double empirical = 0.0;
    for (const auto& f : random_boxes(m.dim(), o.count, o.seed)) {
        double a = cube_norm(f, Phi, p.phi).value;
        double b = cube_norm(compose(f, m), Phi, p.phi).value;
        if (a > 0.0) empirical = std::max(empirical, b / a);
    }
    if (d) {
        std::vector<double> ratios;
        double cyc = diag_empirical_opnorm(*d, Phi, p.phi, &ratios);
        empirical = std::max(empirical, cyc);
        const ClassCertificate* cert = p.cert.C2 && p.cert.C3 ? &p.cert : nullptr;
        DiagonalReport dr = diag_opnorm_lower(p.phi, *d, cert ? std::optional<double>(cyc) : std::nullopt, cert);
        out.results["diagonal"] = {{"product", number(dr.product)},  {"lower_bound", number(dr.lower_bound)},
                                   {"cyclic_ratios", vec(ratios)},   {"empirical", number(cyc)},
                                   {"slack", number(dr.slack)},      {"checked", dr.checked},
                                   {"pass", dr.pass}};
        out.pass = out.pass && dr.pass;
    }
    out.results["empirical_lower"] = number(empirical);
    if (bound) out.pass = out.pass && empirical <= *bound * (1.0 + 1e-9);
    return out;
}

Outcome cmd_sufficiency(const Options& o, Inputs& in) {
    AffineMap m = need_map(o, in);
    YoungFunction Phi = need_young(o, in);
    PhiInput p = need_phi(o, in);
    SearchSpec s = maybe_search(o, in);
    std::vector<SimpleFunction> tests;
    if (!o.f.empty()) {
        json j = config::load(o.f, "f");
        if (j.is_array() && !j.empty() && j.front().is_object() && j.front().contains("cells")) {
            for (const auto& e : j) tests.push_back(config::function_from_json(e));
        } else {
            tests.push_back(config::function_from_json(j));
        }
        json echo = json::array();
        for (const auto& t : tests) echo.push_back(config::to_json(t));
        in.echo["f"] = echo;
    } else {
        if (o.count < 0) throw UsageError("--count must be >= 0");
        tests = random_boxes(m.dim(), o.count, o.seed);
        in.echo["seed"] = o.seed;
        in.echo["count"] = o.count;
    }
    SufficiencyReport r = sufficiency_bound(m, Phi, p.phi, p.cert, tests, s);
    Outcome out;
    json items = json::array();
    for (const auto& it : r.items)
        items.push_back({{"norm_f", number(it.norm_f)},
                         {"norm_composed", number(it.norm_composed)},
                         {"ratio", number(it.ratio)},
                         {"closed_form", it.closed_form},
                         {"pass", it.pass}});
    out.results = {{"K", number(r.K)},   {"L", number(r.L)},          {"C1", number(r.C1)},
                   {"C2", number(r.C2)}, {"bound", number(r.bound)},  {"max_ratio", number(r.max_ratio)},
                   {"items", items},     {"pass", r.pass}};
    out.pass = r.pass;
    return out;
}

Outcome cmd_certify_phi(const Options& o, Inputs& in) {
    if (o.phi.empty()) throw UsageError("--phi is required");
    json j = config::load(o.phi, "phi");
    in.echo["phi"] = j;
    GrowthFunction phi = config::phi_from_json(j);
    auto grid = class_grid(o);
    ClassCertificate cert = certify_class(phi, grid);
    Outcome out;
    out.results = to_json(cert, phi.label());
    out.pass = cert.in_G1dec();
    if (!o.psi_k.empty()) {
        YoungFunction Phi = need_young(o, in);
        json profiles = json::array();
        for (int k : o.psi_k) {
            if (k < 1) throw UsageError("--psi-k entries must be >= 1");
            profiles.push_back(to_json(psi_monotonicity(phi, Phi, k, default_psi_C_grid(), default_psi_grid())));
        }
        out.results["psi"] = profiles;
    }
    return out;
}

Outcome cmd_certify_young(const Options& o, Inputs& in) {
    if (o.young.empty()) throw UsageError("--young is required");
    json j = config::load(o.young, "young");
    in.echo["young"] = j;
    YoungFunction Phi = config::young_from_json(j);
    if (!(o.grid_max > 0.0) || o.grid_points < 2) throw UsageError("--grid-max/--grid-points describe an invalid grid");
    std::vector<double> grid{0.0};
    for (double t : log_grid(o.grid_max * 1e-12, o.grid_max, static_cast<std::size_t>(o.grid_points))) grid.push_back(t);
    YoungCertificate c = certify_young(Phi, grid);
    auto u = log_grid(1e-12, 1e12, 10000);
    SandwichReport s = verify_inverse_sandwich(Phi, u);
    Outcome out;
    out.results = to_json(c, Phi.label());
    json viol = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(s.violations.size(), 20); ++i) {
        const auto& v = s.violations[i];
        viol.push_back({{"u", number(v.u)}, {"lhs", number(v.lhs)}, {"rhs", number(v.rhs)}, {"side", v.side}});
    }
    out.results["sandwich"] = {{"checked", s.checked},
                               {"rtol", s.rtol},
                               {"violations", s.violations.size()},
                               {"first_violations", viol},
                               {"pass", s.pass()}};
    out.pass = c.pass() && s.pass();
    return out;
}

Outcome cmd_necessity(const Options& o, Inputs& in) {
    if (o.samples.empty()) throw UsageError("--samples is required");
    json j = config::load(o.samples, "samples");
    in.echo["samples"] = j;
    auto samples = config::samples_from_json(j);
    PhiInput p = need_phi(o, in);
    double band = o.band ? *o.band : default_necessity_band(p.cert);
    in.echo["band"] = band;
    NecessityReport r = necessity_certificate(samples, p.phi, band);
    Outcome out;
    json items = json::array();
    for (const auto& s : r.samples) {
        json e = {{"index", s.index}, {"x0", vec(s.x0)}};
        if (!s.error.empty()) {
            e["error"] = s.error;
            e["pass"] = false;
        } else {
            e["sigma"] = vec(s.sigma);
            e["product"] = number(s.product);
            e["v"] = number(s.v);
            e["phi_alpha1"] = number(s.phi_alpha1);
            e["remark_holds"] = s.remark_holds;
            e["pass"] = s.in_band;
        }
        items.push_back(e);
    }
    out.results = {{"band", band}, {"samples", items}, {"failures", r.failures}, {"pass", r.pass}};
    out.pass = r.pass;
    return out;
}

Outcome cmd_appendix(const Options& o, Inputs& in) {
    in.echo["which"] = o.which;
    Outcome out;
    if (o.which == "a") {
        SimpleFunction f = need_f(o, in);
        SearchSpec s = maybe_search(o, in);
        EmbeddingReport r = appendix_a_embedding(f, s);
        out.results = {{"n", r.n},
                       {"sup_norm", number(r.sup_norm)},
                       {"M", number(r.M)},
                       {"C", number(r.C)},
                       {"morrey_norm", number(r.morrey_norm)},
                       {"orlicz_norm", number(r.orlicz_norm)},
                       {"rhs", number(r.rhs)},
                       {"ratio", number(r.ratio)},
                       {"worst_ball_ratio", number(r.worst_ball_ratio)},
                       {"note", r.note},
                       {"pass", r.pass}};
        out.pass = r.pass;
    } else if (o.which == "b") {
        SimpleFunction f = need_f(o, in);
        YoungFunction Phi = need_young(o, in);
        PhiInput p = need_phi(o, in);
        SearchSpec s = maybe_search(o, in);
        AppendixSandwich r = appendix_b_sandwich(f, Phi, p.phi, s);
        out.results = {{"lhs", number(r.lhs)},
                       {"mid", number(r.mid)},
                       {"rhs", number(r.rhs)},
                       {"inf_phi", number(r.inf_phi)},
                       {"sup_phi", number(r.sup_phi)},
                       {"inverse_at_one", number(r.inverse_at_one)},
                       {"norm", number(r.norm)},
                       {"rtol", r.rtol},
                       {"pass", r.pass}};
        out.pass = r.pass;
    } else {
        throw UsageError("--which must be a or b");
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// name=spec pairs; unknown names are usage errors.
std::map<std::string, std::vector<double>> parse_ranges(const std::vector<std::string>& specs,
                                                        std::initializer_list<const char*> allowed) {
    std::map<std::string, std::vector<double>> out;
    for (const auto& s : specs) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw UsageError("--range entries look like name=values");
        std::string name = s.substr(0, eq);
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return name == a; }))
            throw UsageError("--range: unknown parameter '" + name + "'");
        out[name] = config::parse_range(s.substr(eq + 1), "range");
    }
    return out;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    if (!(o.cap >= 1.0)) throw UsageError("--cap must be >= 1");
    std::ostringstream csv;
    if (o.check == "dilation") {
        if (o.phi.empty()) throw UsageError("--phi is required");
        GrowthFunction phi = config::phi_from_json(config::load(o.phi, "phi"));
        auto r = parse_ranges(o.ranges, {"c", "j"});
        std::vector<double> cs;
        if (r.count("c")) cs = r["c"];
        if (r.count("j"))
            for (double j : r["j"]) cs.push_back(std::exp2(j));
        if (!r.count("c") && !r.count("j"))
            for (int j = -5; j <= 5; ++j) cs.push_back(std::exp2(j));
        if (static_cast<double>(cs.size()) > o.cap) throw UsageError("sweep size exceeds --cap");
        for (double c : cs)
            if (!(c > 0.0)) throw UsageError("--range: c must be positive");
        const auto grid = log_grid(1e-6, 1e6, 241);
        auto rows = parallel_map<DilationBounds>(cs.size(), [&](std::size_t i) { return dilation_opnorm(phi, cs[i], grid); });
        csv << "c,lower,upper,phi_c\n";
        for (const auto& d : rows) csv << fmt(d.c) << ',' << fmt(d.lower) << ',' << fmt(d.upper) << ',' << fmt(d.phi_c) << '\n';
    } else if (o.check == "psi") {
        auto r = parse_ranges(o.ranges, {"n", "p", "q", "k"});
        auto get = [&](const char* k, std::vector<double> def) { return r.count(k) ? r[k] : def; };
        auto ns = get("n", {2, 3});
        auto ps = get("p", {1.5, 3, 5});
        auto qs = get("q", {1, 2});
        auto ks = get("k", {1, 2, 3, 4});
        double size = static_cast<double>(ns.size()) * static_cast<double>(ps.size()) * static_cast<double>(qs.size()) *
                      static_cast<double>(ks.size());
        if (size > o.cap) throw UsageError("sweep size exceeds --cap");
        struct Cell {
            double n, p, q, k;
        };
        std::vector<Cell> cells;
        for (double n : ns)
            for (double p : ps)
                for (double q : qs)
                    for (double k : ks) {
                        if (n < 1 || n != std::floor(n) || k < 1 || k != std::floor(k) || !(p > 0) || !(q > 0))
                            throw UsageError("--range: need integer n, k >= 1 and positive p, q");
                        cells.push_back({n, p, q, k});
                    }
        auto rows = parallel_map<std::string>(cells.size(), [&](std::size_t i) {
            const Cell& c = cells[i];
            const int n = static_cast<int>(c.n), k = static_cast<int>(c.k);
            GrowthFunction phi = GrowthFunction::morrey(c.p, n);
            YoungFunction Phi = YoungFunction::power(c.q);
            const double lo = c.n * c.q / c.k;
            const double hi = k > 1 ? c.n * c.q / (c.k - 1.0) : kInfinity;
            const bool in_window = c.p > lo && c.p < hi;
            PsiProfile pk = psi_monotonicity(phi, Phi, k, default_psi_C_grid(), default_psi_grid());
            bool prev_inc = true;  // Psi_0 = 1/(phi(r) Phi^{-1}(C)) increases for these phi
            std::string prev_dir = "n/a";
            if (k > 1) {
                PsiProfile pm = psi_monotonicity(phi, Phi, k - 1, default_psi_C_grid(), default_psi_grid());
                prev_inc = pm.increasing();
                prev_dir = to_string(pm.direction);
            }
            const bool classified = pk.decreasing() && prev_inc;
            std::ostringstream row;
            row << n << ',' << fmt(c.p) << ',' << fmt(c.q) << ',' << k << ',' << fmt(lo) << ','
                << (std::isfinite(hi) ? fmt(hi) : std::string("inf")) << ',' << (in_window ? 1 : 0) << ','
                << to_string(pk.direction) << ',' << prev_dir << ',' << fmt(pk.A_inc) << ',' << fmt(pk.A_dec) << ','
                << (classified == in_window ? 1 : 0) << '\n';
            return row.str();
        });
        csv << "n,p,q,k,window_lo,window_hi,in_window,direction_k,direction_k_minus_1,A_inc,A_dec,match\n";
        for (const auto& row : rows) csv << row;
    } else {
        throw UsageError("--check must be dilation or psi");
    }
    if (!o.output.empty()) {
        std::ofstream f(o.output);
        if (!f) throw UsageError("cannot write --output file");
        f << csv.str();
    } else {
        out << csv.str();
    }
    return kPass;
}

void add_common(CLI::App* c, Options& o, bool f, bool young, bool phi, bool search) {
    if (f) c->add_option("--f", o.f, "simple function: JSON, @file");
    if (young) c->add_option("--young", o.young, "Young function: JSON, @file or shorthand (power:q=2)");
    if (phi) c->add_option("--phi", o.phi, "growth function: JSON, @file or shorthand (power:p=4,n=2)");
    if (search) c->add_option("--search", o.search, "search spec JSON");
    c->add_option("--output", o.output, "write the report here instead of stdout");
    c->add_option("--seed", o.seed, "seed for generated test families");
    c->add_flag("--timings", o.timings, "include wall-clock timings in the report");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Orlicz-Morrey norm and composition-operator toolkit", "orlicz_lab"};
    app.require_subcommand(1);

    auto* norm = app.add_subcommand("norm", "Orlicz-Morrey norm by supremum search");
    add_common(norm, o, true, true, true, true);
    norm->add_option("--tol", o.tol, "relative tolerance");
    auto* weak = app.add_subcommand("weak-norm", "weak Orlicz-Morrey norm");
    add_common(weak, o, true, true, true, true);
    weak->add_option("--tol", o.tol, "relative tolerance");

    auto* ind = app.add_subcommand("indicator-norm", "norm of the indicator of prod [0, a_j] x R^{n-k}");
    add_common(ind, o, false, true, true, false);
    ind->add_option("--a", o.a, "sorted sides, comma separated");
    ind->add_option("--n", o.n, "dimension");
    ind->add_option("--which-k", o.which_k, "also compare with the k-th asymptotic regime");
    ind->add_flag("--halfcylinder", o.halfcylinder, "also compare with 1/phi(a_0) (k < n)");

    auto* op = app.add_subcommand("op-norm", "composition-operator norm bounds for an affine map");
    add_common(op, o, false, true, true, false);
    op->add_option("--map", o.map, "map JSON");
    op->add_option("--count", o.count, "random box indicators in the test family");

    auto* cphi = app.add_subcommand("certify-phi", "growth-class certificate");
    add_common(cphi, o, false, true, true, false);
    cphi->add_option("--grid-min", o.grid_min);
    cphi->add_option("--grid-max", o.grid_max);
    cphi->add_option("--grid-points", o.grid_points);
    cphi->add_option("--psi-k", o.psi_k, "also classify Psi_k for these k (needs --young)")->delimiter(',');

    auto* cyoung = app.add_subcommand("certify-young", "Young-function axioms and inverse sandwich");
    add_common(cyoung, o, false, true, false, false);
    cyoung->add_option("--grid-max", o.grid_max);
    cyoung->add_option("--grid-points", o.grid_points);

    auto* suff = app.add_subcommand("check-sufficiency", "empirical ratios against K (C1 + C2 phi(L) L^n)");
    add_common(suff, o, true, true, true, true);
    suff->add_option("--map", o.map, "map JSON");
    suff->add_option("--count", o.count, "random box indicators when --f is absent");

    auto* nec = app.add_subcommand("certify-necessity", "phi(prod singular values) per jacobian sample");
    add_common(nec, o, false, false, true, false);
    nec->add_option("--samples", o.samples, "list of {x0, jacobian}");
    nec->add_option("--band", o.band, "accept v in [1/band, band]; default 10 C1 C2 C3");

    auto* apx = app.add_subcommand("appendix", "appendix embedding (a) or sandwich (b)");
    add_common(apx, o, true, true, true, true);
    apx->add_option("--which", o.which, "a or b")->required();

    auto* sweep = app.add_subcommand("sweep", "CSV sweep of a named check");
    sweep->add_option("--check", o.check, "dilation or psi")->required();
    sweep->add_option("--phi", o.phi, "growth function (dilation)");
    sweep->add_option("--range", o.ranges, "name=values; values are a comma list, lo:hi or lo:hi:step");
    sweep->add_option("--cap", o.cap, "maximum number of rows");
    sweep->add_option("--output", o.output, "write the CSV here instead of stdout");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kPass;
        }
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    auto t0 = std::chrono::steady_clock::now();
    Inputs in;
    Outcome res;
    std::string command;
    try {
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (norm->parsed()) command = "norm", res = cmd_norm(o, in, false);
        else if (weak->parsed()) command = "weak-norm", res = cmd_norm(o, in, true);
        else if (ind->parsed()) command = "indicator-norm", res = cmd_indicator(o, in);
        else if (op->parsed()) command = "op-norm", res = cmd_opnorm(o, in);
        else if (cphi->parsed()) command = "certify-phi", res = cmd_certify_phi(o, in);
        else if (cyoung->parsed()) command = "certify-young", res = cmd_certify_young(o, in);
        else if (suff->parsed()) command = "check-sufficiency", res = cmd_sufficiency(o, in);
        else if (nec->parsed()) command = "certify-necessity", res = cmd_necessity(o, in);
        else if (apx->parsed()) command = "appendix", res = cmd_appendix(o, in);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const json::exception& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        // domain / precondition / rank failures: reported, exit 1
        json rep = {{"command", command}, {"inputs_echo", in.echo}, {"error", e.what()}, {"pass", false}};
        err << "error: " << e.what() << '\n';
        out << rep.dump(2) << '\n';
        return kFail;
    }
    json rep = {{"command", command},
                {"inputs_echo", in.echo},
                {"results", res.results},
                {"certificates_used", in.certs},
                {"pass", res.pass}};
    if (o.timings) {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep["timings"] = {{"total_seconds", secs}, {"threads", worker_count()}};
    }
    if (!o.output.empty()) {
        std::ofstream f(o.output);
        if (!f) {
            err << "usage error: cannot write --output file\n";
            return kUsage;
        }
        f << rep.dump(2) << '\n';
    } else {
        out << rep.dump(2) << '\n';
    }
    return res.pass ? kPass : kFail;
}

} // namespace orlicz::cli
