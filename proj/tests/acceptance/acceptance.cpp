// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "orlicz/appendix.hpp"
#include "orlicz/compose.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/indicators.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/young.hpp"
#include "seeded.hpp"

using namespace orlicz;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Box cube_box(std::size_t n, double lo, double hi) {
    Box b;
    for (std::size_t i = 0; i < n; ++i) b.sides.push_back({lo, hi});
    return b;
}

Box random_box(Seeded& g, std::size_t n, double lo_min = -2.0, double lo_max = 2.0) {
    Box b;
    for (std::size_t i = 0; i < n; ++i) {
        double lo = g.uniform(lo_min, lo_max);
        b.sides.push_back({lo, lo + g.log_uniform(0.25, 4.0)});
    }
    return b;
}

// cells stacked along axis 0, so they never overlap
SimpleFunction staircase(Seeded& g, std::size_t n, int levels, double scale = 1.0) {
    std::vector<Cell> cells;
    double x = g.uniform(-1.0, 1.0);
    for (int i = 0; i < levels; ++i) {
        Box b;
        double w = g.log_uniform(0.25, 2.0);
        b.sides.push_back({x, x + w});
        x += w;
        for (std::size_t a = 1; a < n; ++a) {
            double lo = g.uniform(-1.0, 0.5);
            b.sides.push_back({lo, lo + g.log_uniform(0.5, 2.0)});
        }
        cells.push_back({b, scale * static_cast<double>(g.integer(1, 4))});
    }
    return SimpleFunction(n, cells);
}

ClassCertificate certificate(const GrowthFunction& phi) { return certify_class(phi, default_class_grid()); }

// ---------------------------------------------------------------------------

Outcome ac1() {
    Seeded g(1001);
    std::vector<double> u(10000);
    for (double& x : u) x = g.log_uniform(1e-12, 1e12);
    const std::vector<YoungFunction> fams{YoungFunction::power(1.0), YoungFunction::power(2.0), YoungFunction::power(5.0),
                                          YoungFunction::flat_then_linear(1.0), YoungFunction::appendix_exp(2)};
    Outcome o;
    std::size_t checked = 0, violations = 0;
    for (const auto& Phi : fams) {
        SandwichReport r = verify_inverse_sandwich(Phi, u, 1e-9);
        checked += r.checked;
        violations += r.violations.size();
    }
    o.pass = violations == 0 && checked == fams.size() * u.size();
    o.detail = fmt("%.0f samples over 5 Young functions, %.0f violations at rtol 1e-9", static_cast<double>(checked),
                   static_cast<double>(violations));
    return o;
}

Outcome ac2() {
    Seeded g(1002);
    double worst = 0.0;
    int cases = 0;
    auto record = [&](double got, double expect) {
        worst = std::max(worst, std::abs(got - expect) / expect);
        ++cases;
    };
    for (int i = 0; i < 60; ++i) {
        std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
        double c = g.log_uniform(1e-3, 1e3), q = g.uniform(1.0, 6.0), r = g.log_uniform(0.1, 10.0);
        Point a(n);
        for (double& x : a) x = g.uniform(-1.0, 1.0);
        auto f = SimpleFunction::indicator(cube_box(n, -20.0, 20.0), c);
        Region reg = (i % 2 == 0) ? Region{Ball{a, r}} : Region{Cube{a, r}};
        record(luxemburg_norm(f, reg, YoungFunction::power(q)).value, c);
    }
    // occupancy theta of a slab in a cube, and of a half space through a ball center
    const std::vector<YoungFunction> bij{YoungFunction::power(2.0), YoungFunction::power(3.5), YoungFunction::appendix_exp(1),
                                         YoungFunction::appendix_exp(3)};
    for (int i = 0; i < 60; ++i) {
        std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
        const YoungFunction& Phi = bij[static_cast<std::size_t>(i) % bij.size()];
        double r = g.log_uniform(0.1, 10.0);
        Point a(n, 0.0);
        double theta;
        Box slab = cube_box(n, -2 * r, 2 * r);
        Region reg;
        if (i % 3 == 2) {
            theta = 0.5;
            slab.sides[0] = {0.0, 3 * r};
            reg = Ball{a, r};
        } else {
            theta = g.uniform(0.02, 1.0);
            slab.sides[0] = {-r, -r + 2 * r * theta};
            reg = Cube{a, r};
        }
        double expect = 1.0 / generalized_inverse(Phi, 1.0 / theta, Tolerance{1e-14, 1e-300}).value;
        record(luxemburg_norm(SimpleFunction::indicator(slab), reg, Phi).value, expect);
    }
    Outcome o;
    o.pass = worst <= 1e-8;
    o.detail = fmt("%.0f closed-form cases, worst relative error %.3g (rtol 1e-8)", cases, worst);
    return o;
}

Outcome ac3() {
    Seeded g(1003);
    Outcome o;
    double worst = 0.0;
    SearchSpec cube;
    cube.geometry = Geometry::cube;
    for (int i = 0; i < 50; ++i) {
        std::size_t n = static_cast<std::size_t>(g.integer(1, 4));
        std::size_t k = static_cast<std::size_t>(g.integer(1, static_cast<int>(n)));
        std::vector<double> a(k);
        for (double& x : a) x = g.log_uniform(0.125, 8.0);
        std::sort(a.begin(), a.end());
        double q = g.uniform(1.0, 3.0);
        YoungFunction Phi = YoungFunction::power(q);
        // phi = r^{-e} with e < k/q keeps the supremum finite
        double e = static_cast<double>(k) / q * g.uniform(0.2, 0.9);
        GrowthFunction phi = (i % 2 == 0) ? GrowthFunction::power(-e) : GrowthFunction::morrey(static_cast<double>(n) / e, static_cast<int>(n));
        BoxSpec spec = BoxSpec::make(a, n);
        double direct = box_indicator_norm(spec, Phi, phi).value;
        double search = orlicz_morrey_norm(spec.indicator(), Phi, phi, cube).value;
        worst = std::max(worst, std::abs(search - direct) / direct);
    }
    double example = box_indicator_norm(BoxSpec::make({1.0, 4.0}, 2), YoungFunction::power(2.0), GrowthFunction::morrey(4.0, 2)).value;
    double ex_err = std::abs(example - 1.0);
    o.pass = worst <= 0.02 && ex_err <= 1e-6;
    o.detail = fmt("50 BoxSpecs, worst scan/search gap %.3g (<= 0.02); a=(1,4) value error %.3g (<= 1e-6)", worst, ex_err);
    return o;
}

Outcome ac4() {
    Seeded g(1004);
    struct Config {
        YoungFunction Phi;
        GrowthFunction phi;
        std::size_t n;
    };
    const std::vector<Config> configs{{YoungFunction::power(1.0), GrowthFunction::morrey(2.0, 1), 1},
                                      {YoungFunction::power(2.0), GrowthFunction::morrey(3.0, 1), 1},
                                      {YoungFunction::appendix_exp(1), GrowthFunction::power(-0.25), 1},
                                      {YoungFunction::power(2.0), GrowthFunction::morrey(4.0, 2), 2},
                                      {YoungFunction::power(1.5), GrowthFunction::oscillating(-0.5), 2}};
    double worst_gap = 0.0, worst_order = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Config& c = configs[static_cast<std::size_t>(i) % configs.size()];
        SimpleFunction f = staircase(g, c.n, 2 + i % 3, c.n == 1 && i % 5 == 2 ? 0.1 : 1.0);
        WeakIdentityReport id = weak_norm_identity(f, c.Phi, c.phi);
        worst_gap = std::max(worst_gap, id.rel_gap);
        double weak = weak_orlicz_morrey_norm(f, c.Phi, c.phi).value;
        double strong = orlicz_morrey_norm(f, c.Phi, c.phi).value;
        worst_order = std::max(worst_order, weak / strong - 1.0);
    }
    Outcome o;
    o.pass = worst_gap <= 1e-6 && worst_order <= 1e-9;
    o.detail = fmt("20 staircases, worst identity gap %.3g (<= 1e-6), max weak/strong - 1 = %.3g (<= 1e-9)", worst_gap, worst_order);
    return o;
}

Outcome ac5() {
    const auto grid = log_grid(1e-6, 1e6, 481);
    double worst_power = 0.0;
    for (auto [p, n] : std::vector<std::pair<double, int>>{{4.0, 2}, {2.0, 1}, {3.0, 3}, {1.5, 2}, {6.0, 4}}) {
        GrowthFunction phi = GrowthFunction::morrey(p, n);
        for (int j = -5; j <= 5; ++j) {
            DilationBounds d = dilation_opnorm(phi, std::ldexp(1.0, j), grid);
            worst_power = std::max({worst_power, std::abs(d.lower - d.phi_c), std::abs(d.upper - d.phi_c)});
        }
    }
    bool osc_ok = true;
    int osc_cases = 0;
    for (double e : {0.5, 1.0, 2.0}) {
        GrowthFunction phi = GrowthFunction::oscillating(-e);
        ClassCertificate cert = certificate(phi);
        if (!cert.C2 || !cert.C3) return {false, "oscillating family not certified in G2dec"};
        const double C2 = *cert.C2, C3 = *cert.C3;
        for (int j = -5; j <= 5; ++j) {
            DilationBounds d = dilation_opnorm(phi, std::ldexp(1.0, j), grid);
            bool ok = d.lower <= d.upper && d.lower <= d.phi_c * C2 && d.upper >= d.phi_c / (C2 * C3) &&
                      d.upper <= C2 * d.phi_c * (1 + 1e-9) && d.lower >= d.phi_c / (C2 * C3) * (1 - 1e-9);
            osc_ok = osc_ok && ok;
            ++osc_cases;
        }
    }
    Outcome o;
    o.pass = worst_power <= 1e-12 && osc_ok;
    o.detail = fmt("power: max |bound - phi(c)| = %.3g (<= 1e-12); oscillating: %.0f cases ", worst_power, osc_cases) +
               (osc_ok ? "inside the certified band" : "OUTSIDE the certified band");
    return o;
}

Outcome ac6() {
    Seeded g(1006);
    int exact = 0;
    double worst = 0.0;
    auto Phi2 = YoungFunction::power(2.0);
    for (int i = 0; i < 20; ++i) {
        std::size_t n = i < 14 ? 2 : 3;
        std::vector<Cell> cells;
        int count = 1 + i % 2;
        for (int c = 0; c < count; ++c) {
            Box b = random_box(g, n, -2.0, 2.0);
            b.sides[0] = {3.0 * c, 3.0 * c + b.sides[0].length()};
            cells.push_back({b, static_cast<double>(g.integer(1, 3))});
        }
        SimpleFunction f(n, cells);
        std::vector<std::size_t> perm(n);
        for (std::size_t k = 0; k < n; ++k) perm[k] = k;
        for (std::size_t k = n - 1; k > 0; --k) std::swap(perm[k], perm[static_cast<std::size_t>(g.integer(0, static_cast<int>(k)))]);
        Matrix W(n);
        for (std::size_t k = 0; k < n; ++k) W(k, perm[k]) = g.coin() ? 1.0 : -1.0;
        GrowthFunction phi = GrowthFunction::morrey(n == 2 ? 4.0 : 5.0, static_cast<int>(n));
        SearchSpec s;
        if (n == 3) {
            s.max_centers = 256;
            s.max_radii = 64;
        }
        OrthogonalReport r = orthogonal_invariance_check(W, f, Phi2, phi, std::nullopt, s);
        if (r.exact_path && r.mapped_ratio == 1.0 && r.pass) ++exact;
        worst = std::max(worst, std::abs(r.ratio - 1.0));
    }
    auto t0 = std::chrono::steady_clock::now();
    const double t = std::numbers::pi / 4;
    Matrix rot{{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}};
    OrthogonalReport rr = orthogonal_invariance_check(rot, SimpleFunction::indicator(cube_box(2, 0.0, 1.0)), Phi2,
                                                      GrowthFunction::morrey(4.0, 2));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.pass = exact == 20 && std::abs(rr.ratio - 1.0) <= 0.01 && secs <= 120.0;
    o.detail = fmt("%.0f/20 signed permutations with ratio exactly 1 (search gap %.3g); ", exact, worst) +
               fmt("pi/4 rotation ratio %.6f in %.1fs", rr.ratio, secs);
    return o;
}

Outcome ac7() {
    Seeded g(1007);
    const std::vector<GrowthFunction> phis{GrowthFunction::power(-0.5), GrowthFunction::morrey(3.0, 2), GrowthFunction::oscillating(-1.0),
                                           GrowthFunction::oscillating(-0.5)};
    std::vector<ClassCertificate> certs;
    for (const auto& p : phis) certs.push_back(certificate(p));
    const std::vector<YoungFunction> youngs{YoungFunction::power(1.0), YoungFunction::power(2.0), YoungFunction::appendix_exp(2)};
    int ok = 0;
    double min_margin = kInfinity;
    for (int i = 0; i < 20; ++i) {
        std::size_t n = static_cast<std::size_t>(2 + i % 2);
        std::vector<double> d(n);
        for (double& x : d) x = g.log_uniform(0.125, 8.0);
        std::size_t pi = static_cast<std::size_t>(i) % phis.size();
        double emp = diag_empirical_opnorm(d, youngs[static_cast<std::size_t>(i) % youngs.size()], phis[pi]);
        DiagonalReport r = diag_opnorm_lower(phis[pi], d, emp, &certs[pi]);
        if (r.checked && r.pass) ++ok;
        min_margin = std::min(min_margin, emp * r.slack / r.lower_bound);
    }
    // product one: the bound is phi(1)^{1/n}
    bool exact = true;
    for (const auto& d : std::vector<std::vector<double>>{{2.0, 0.5}, {4.0, 0.25}, {0.125, 8.0}, {2.0, 4.0, 0.125}, {0.5, 0.5, 4.0}}) {
        for (const auto& phi : phis) {
            DiagonalReport r = diag_opnorm_lower(phi, d);
            exact = exact && r.product == 1.0 && r.lower_bound == std::pow(phi(1.0), 1.0 / static_cast<double>(d.size()));
        }
    }
    Outcome o;
    o.pass = ok == 20 && exact;
    o.detail = fmt("%.0f/20 diagonals satisfy bound <= empirical x slack (min margin %.4g); product-one cases ", ok, min_margin) +
               (exact ? "exact" : "NOT exact");
    return o;
}

Outcome ac8() {
    Seeded g(1008);
    struct Config {
        YoungFunction Phi;
        std::function<GrowthFunction(int)> phi;
    };
    const std::vector<Config> configs{
        {YoungFunction::power(2.0), [](int n) { return GrowthFunction::morrey(4.0, n); }},
        {YoungFunction::power(1.0), [](int n) { return GrowthFunction::morrey(2.0, n); }},
        {YoungFunction::power(1.5), [](int n) { return GrowthFunction::oscillating(-0.4 * n); }},
        {YoungFunction::appendix_exp(1), [](int) { return GrowthFunction::power(-0.25); }},
    };
    // ten test functions per dimension: box indicators and staircases
    std::vector<std::vector<SimpleFunction>> tests(4);
    for (std::size_t n = 1; n <= 3; ++n)
        for (int i = 0; i < 10; ++i)
            tests[n].push_back(i < 7 ? SimpleFunction::indicator(random_box(g, n), static_cast<double>(g.integer(1, 3)))
                                     : staircase(g, n, 2, 1.0));
    SearchSpec s;
    s.max_centers = 512;
    s.max_radii = 128;
    std::size_t items = 0, violations = 0;
    double worst = 0.0;
    for (int m = 0; m < 100; ++m) {
        std::size_t n = static_cast<std::size_t>(1 + m % 3);
        std::vector<std::size_t> perm(n);
        for (std::size_t k = 0; k < n; ++k) perm[k] = k;
        for (std::size_t k = n - 1; k > 0; --k) std::swap(perm[k], perm[static_cast<std::size_t>(g.integer(0, static_cast<int>(k)))]);
        AffineMap psi = AffineMap::signed_permutation(perm);
        for (std::size_t k = 0; k < n; ++k) {
            psi.A(k, perm[k]) = (g.coin() ? 1.0 : -1.0) * g.log_uniform(0.25, 4.0);
            psi.b[k] = g.uniform(-1.0, 1.0);
        }
        const Config& c = configs[static_cast<std::size_t>(m) % configs.size()];
        GrowthFunction phi = c.phi(static_cast<int>(n));
        ClassCertificate cert = certificate(phi);
        SufficiencyReport r = sufficiency_bound(psi, c.Phi, phi, cert, tests[n], s);
        for (const auto& it : r.items) {
            ++items;
            if (!(it.ratio <= r.bound)) ++violations;
            worst = std::max(worst, it.ratio / r.bound);
        }
    }
    Outcome o;
    o.pass = items == 1000 && violations == 0;
    o.detail = fmt("%.0f map/function pairs, %.0f violations, max ratio/bound %.4f", static_cast<double>(items),
                   static_cast<double>(violations), worst);
    return o;
}

Outcome ac9() {
    Seeded g(1009);
    GrowthFunction phi = GrowthFunction::power(-0.5);
    std::vector<DiffeoSample> samples;
    for (int i = 0; i < 60; ++i) {
        std::size_t n = static_cast<std::size_t>(g.integer(2, 5));
        Matrix A(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) A(r, c) = g.uniform(-2.0, 2.0) + (r == c ? 3.0 : 0.0);
        double scale = std::pow(std::abs(A.determinant()), -1.0 / static_cast<double>(n));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) A(r, c) *= scale;
        Point x0(n);
        for (double& x : x0) x = g.uniform(-1.0, 1.0);
        samples.push_back({x0, A});
    }
    NecessityReport vp = necessity_certificate(samples, phi, 1.5);
    double worst = 0.0;
    for (const auto& s : vp.samples) worst = std::max(worst, std::abs(s.v - 1.0));
    NecessityReport half = necessity_certificate({{{0.0, 0.0}, Matrix::diagonal({0.5, 0.5})}}, phi, 1.5);
    double v_half = half.samples.at(0).v;
    Outcome o;
    o.pass = vp.pass && worst <= 1e-12 && std::abs(v_half - 2.0) <= 1e-12 && !half.pass && half.failures == 1;
    o.detail = fmt("60 volume-preserving maps, max |v - 1| = %.3g; x/2 gives v = %.15g, ", worst, v_half) +
               (half.pass ? "NOT reported as failure at band 1.5" : "reported as failure at band 1.5");
    return o;
}

Outcome ac10() {
    const std::vector<double> s_grid{1.1, 1.3, 1.45, 1.7, 2.2, 2.6, 3.1, 3.7, 4.3, 5.3};
    const auto C = default_psi_C_grid();
    const auto r = default_psi_grid();
    int cells = 0, matches = 0;
    std::string first_miss;
    for (int n = 2; n <= 5; ++n)
        for (int k = 2; k <= n; ++k)
            for (double q : {1.0, 2.0})
                for (double s : s_grid) {
                    double p = q * s;
                    GrowthFunction phi = GrowthFunction::morrey(p, n);
                    YoungFunction Phi = YoungFunction::power(q);
                    bool window = p > n * q / k && p < n * q / (k - 1.0);
                    bool classified = psi_monotonicity(phi, Phi, k, C, r).decreasing() &&
                                      psi_monotonicity(phi, Phi, k - 1, C, r).increasing();
                    ++cells;
                    if (window == classified) ++matches;
                    else if (first_miss.empty())
                        first_miss = fmt(" first mismatch n=%.0f k=%.0f p=%.4g", n, k, p);
                }
    Outcome o;
    o.pass = cells == 200 && matches == cells;
    o.detail = fmt("%.0f/%.0f Morrey cells match the window", matches, cells) + first_miss;
    return o;
}

Outcome ac11() {
    Seeded g(1011);
    struct Config {
        YoungFunction Phi;
        GrowthFunction phi;
        SimpleFunction f;
    };
    auto osc_bounded = GrowthFunction::oscillating(0.0);
    auto step = GrowthFunction::piecewise({{0.0, 1.0, 0.0}, {1.0, 2.0, 0.0}}, "step");
    auto saturating = GrowthFunction::callable([](double r) { return 1.0 + 1.0 / (1.0 + r); }, "saturating");
    std::vector<Config> configs{
        {YoungFunction::power(1.0), GrowthFunction::constant(1.0), SimpleFunction::indicator(cube_box(2, -50, 50), 2.5)},
        {YoungFunction::power(2.0), osc_bounded, SimpleFunction::indicator(cube_box(1, 0, 1))},
        {YoungFunction::power(2.0), GrowthFunction::constant(2.0), SimpleFunction::zero(1)},
        {YoungFunction::power(3.0), osc_bounded, staircase(g, 1, 3)},
        {YoungFunction::appendix_exp(1), GrowthFunction::constant(0.5), staircase(g, 1, 2, 0.1)},
        {YoungFunction::flat_then_linear(0.5), step, SimpleFunction::indicator(cube_box(2, 0, 2), 3.0)},
        {YoungFunction::power(1.5), saturating, staircase(g, 2, 2)},
        {YoungFunction::appendix_exp(2), osc_bounded, staircase(g, 2, 3, 0.05)},
        {YoungFunction::power(2.0), step, staircase(g, 1, 2)},
        {YoungFunction::flat_then_linear(1.0), saturating, SimpleFunction::indicator(cube_box(1, -3, 3), 0.7)},
    };
    int b_ok = 0;
    for (const auto& c : configs) {
        AppendixSandwich r = appendix_b_sandwich(c.f, c.Phi, c.phi);
        if (r.pass) ++b_ok;
    }
    int a_ok = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 10; ++i) {
        std::size_t n = static_cast<std::size_t>(1 + i % 2);
        double cap = std::ldexp(1.0, -static_cast<int>(n));
        SimpleFunction f = i == 0 ? SimpleFunction::zero(n) : staircase(g, n, 1 + i % 3, 0.2 * cap);
        EmbeddingReport r = appendix_a_embedding(f);
        if (r.pass) ++a_ok;
        worst_ratio = std::max({worst_ratio, r.ratio, r.worst_ball_ratio});
    }
    Outcome o;
    o.pass = b_ok == 10 && a_ok == 10;
    o.detail = fmt("sandwich ordering %.0f/10; embedding %.0f/10 (worst norm/bound %.4f)", b_ok, a_ok, worst_ratio);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"AC1 inverse sandwich", ac1},        {"AC2 Luxemburg closed forms", ac2}, {"AC3 box indicator scan", ac3},
        {"AC4 weak-norm identity", ac4},      {"AC5 dilation sandwich", ac5},      {"AC6 orthogonal invariance", ac6},
        {"AC7 diagonal lower bound", ac7},    {"AC8 sufficiency bound", ac8},      {"AC9 necessity certificate", ac9},
        {"AC10 Psi window", ac10},            {"AC11 appendix checks", ac11},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
