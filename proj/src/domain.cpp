#include "orlicz/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "orlicz/errors.hpp"

namespace orlicz {

double Box::volume() const {
    double v = 1.0;
    std::vector<double> lens;
    lens.reserve(sides.size());
    for (const auto& s : sides) {
        if (!(s.hi > s.lo)) return 0.0;
        lens.push_back(s.hi - s.lo);
    }
    std::sort(lens.begin(), lens.end());
    for (double l : lens) v *= l;
    return v;
}

bool Box::is_empty() const {
    for (const auto& s : sides)
        if (!(s.hi > s.lo)) return true;
    return false;
}

bool Box::is_bounded() const {
    for (const auto& s : sides)
        if (!std::isfinite(s.lo) || !std::isfinite(s.hi)) return false;
    return true;
}

double box_overlap(const Box& a, const Box& b) {
    if (a.dim() != b.dim()) throw UsageError("box_overlap: dimension mismatch");
    std::vector<double> lens;
    lens.reserve(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double lo = std::max(a.sides[i].lo, b.sides[i].lo);
        double hi = std::min(a.sides[i].hi, b.sides[i].hi);
        if (!(hi > lo)) return 0.0;
        lens.push_back(hi - lo);
    }
    std::sort(lens.begin(), lens.end());
    double v = 1.0;
    for (double l : lens) v *= l;
    return v;
}

double unit_ball_volume(std::size_t n) {
    const double h = 0.5 * static_cast<double>(n);
    return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double Ball::volume() const { return unit_ball_volume(dim()) * std::pow(radius, static_cast<double>(dim())); }

double Cube::volume() const { return std::pow(2.0 * half_side, static_cast<double>(dim())); }

BoxRegion BoxRegion::whole_space(std::size_t n) {
    BoxRegion r;
    r.n = n;
    r.boxes.push_back(Box(std::vector<Interval>(n, Interval{-kInfinity, kInfinity})));
    return r;
}

double BoxRegion::measure() const {
    double m = 0.0;
    for (const auto& b : boxes) m += b.volume();
    return m;
}

namespace {

// ---- ball ∩ box ----------------------------------------------------------

struct Rel {
    double lo, hi;
};

// 0.5 (x sqrt(r^2 - x^2) + r^2 asin(x / r)), the antiderivative of sqrt(r^2 - x^2).
double half_disk_primitive(double r, double x) {
    x = std::clamp(x, -r, r);
    double h = std::sqrt(std::max(0.0, (r - x) * (r + x)));
    return 0.5 * (x * h + r * r * std::asin(x / r));
}

double chord_integral(double r, double a, double b) {
    if (!(b > a)) return 0.0;
    return half_disk_primitive(r, b) - half_disk_primitive(r, a);
}

// G(y) = ∫_{x0}^{x1} clamp(y, -h(x), h(x)) dx with h(x) = sqrt(r^2 - x^2).
double clamp_integral(double r, double x0, double x1, double y) {
    if (y >= r) return chord_integral(r, x0, x1);
    if (y <= -r) return -chord_integral(r, x0, x1);
    double w = std::sqrt((r - y) * (r + y));
    double inner = std::max(0.0, std::min(x1, w) - std::max(x0, -w));
    double outer = 0.0;
    if (x0 < -w) outer += chord_integral(r, x0, std::min(x1, -w));
    if (x1 > w) outer += chord_integral(r, std::max(x0, w), x1);
    double sgn = y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
    return y * inner + sgn * outer;
}

double disk_rect_area(double r, Rel x, Rel y) {
    double a = clamp_integral(r, x.lo, x.hi, y.hi) - clamp_integral(r, x.lo, x.hi, y.lo);
    return std::max(0.0, a);
}

// 15-point Gauss-Kronrod with embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double gk_adaptive(const F& f, double a, double b, double tol, int depth) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double k = fc * kWgk[7];
    double g = fc * kWg[3];
    for (int i = 0; i < 7; ++i) {
        double dx = h * kXgk[i];
        double s = f(c - dx) + f(c + dx);
        k += kWgk[i] * s;
        if (i % 2 == 1) g += kWg[i / 2] * s;
    }
    k *= h;
    g *= h;
    if (std::abs(k - g) <= tol || depth >= 40) return k;
    return gk_adaptive(f, a, c, 0.5 * tol, depth + 1) + gk_adaptive(f, c, b, 0.5 * tol, depth + 1);
}

constexpr double kBallRelTol = 1e-12;

double ball_rel_volume(double r, std::vector<Rel> u);

double slice_integral(double r, const std::vector<Rel>& u) {
    const std::size_t d = u.size();
    const double a = u[0].lo, b = u[0].hi;
    std::vector<Rel> rest(u.begin() + 1, u.end());

    // The slice volume is smooth in x except where the slice radius crosses the
    // distance to a face of the remaining box.
    std::vector<double> sums{0.0};
    for (const Rel& s : rest) {
        std::vector<double> next;
        next.reserve(sums.size() * 3);
        for (double base : sums) {
            next.push_back(base);
            if (std::abs(s.lo) < r) next.push_back(base + s.lo * s.lo);
            if (std::abs(s.hi) < r) next.push_back(base + s.hi * s.hi);
        }
        sums.swap(next);
    }
    std::vector<double> cuts{a, b};
    for (double s2 : sums) {
        if (s2 >= r * r) continue;
        double x = std::sqrt((r * r) - s2);
        for (double c : {x, -x})
            if (c > a && c < b) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto integrand = [&](double x) {
        double rho = std::sqrt(std::max(0.0, (r - x) * (r + x)));
        return ball_rel_volume(rho, rest);
    };
    const double total_tol = kBallRelTol * unit_ball_volume(d) * std::pow(r, static_cast<double>(d));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double lo = cuts[i], hi = cuts[i + 1];
        if (!(hi > lo)) continue;
        sum += gk_adaptive(integrand, lo, hi, total_tol * (hi - lo) / (b - a), 0);
    }
    return sum;
}

// Volume of B(0, r) ∩ prod u_i, u given relative to the center.
double ball_rel_volume(double r, std::vector<Rel> u) {
    const std::size_t d = u.size();
    if (!(r > 0.0)) return 0.0;
    double near2 = 0.0, far2 = 0.0;
    bool covers = true;
    for (Rel& s : u) {
        s.lo = std::max(s.lo, -r);
        s.hi = std::min(s.hi, r);
        if (!(s.hi > s.lo)) return 0.0;
        double dn = s.lo > 0.0 ? s.lo : (s.hi < 0.0 ? -s.hi : 0.0);
        near2 += dn * dn;
        far2 += std::max(s.lo * s.lo, s.hi * s.hi);
        if (s.lo > -r || s.hi < r) covers = false;
    }
    if (near2 >= r * r) return 0.0;
    if (covers) return unit_ball_volume(d) * std::pow(r, static_cast<double>(d));
    if (far2 <= r * r) {
        std::vector<double> lens;
        for (const Rel& s : u) lens.push_back(s.hi - s.lo);
        std::sort(lens.begin(), lens.end());
        double v = 1.0;
        for (double l : lens) v *= l;
        return v;
    }
    if (d == 1) return u[0].hi - u[0].lo;
    if (d == 2) return disk_rect_area(r, u[0], u[1]);
    return slice_integral(r, u);
}

} // namespace

double ball_box_volume(const Ball& ball, const Box& box) {
    const std::size_t n = ball.dim();
    if (box.dim() != n) throw UsageError("ball_box_volume: dimension mismatch");
    if (!(ball.radius > 0.0)) throw DomainError("ball radius must be positive");
    const double r = ball.radius;
    std::vector<Rel> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = std::max(box.sides[i].lo - ball.center[i], -r);
        double hi = std::min(box.sides[i].hi - ball.center[i], r);
        if (!(hi > lo)) return 0.0;
        // canonical orientation: reflect so that the interval leans right
        if (lo + hi < 0.0) {
            double t = lo;
            lo = -hi;
            hi = -t;
        }
        u[i] = {lo, hi};
    }
    std::sort(u.begin(), u.end(), [](const Rel& a, const Rel& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
    return ball_rel_volume(r, std::move(u));
}

double cube_box_volume(const Cube& cube, const Box& box) {
    const std::size_t n = cube.dim();
    if (box.dim() != n) throw UsageError("cube_box_volume: dimension mismatch");
    if (!(cube.half_side > 0.0)) throw DomainError("cube half-side must be positive");
    std::vector<double> lens(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = std::max(box.sides[i].lo, cube.center[i] - cube.half_side);
        double hi = std::min(box.sides[i].hi, cube.center[i] + cube.half_side);
        if (!(hi > lo)) return 0.0;
        lens[i] = hi - lo;
    }
    std::sort(lens.begin(), lens.end());
    double v = 1.0;
    for (double l : lens) v *= l;
    return v;
}

double intersection_volume(const Region& region, const Box& box) {
    return std::visit(
        [&](const auto& reg) -> double {
            using T = std::decay_t<decltype(reg)>;
            if constexpr (std::is_same_v<T, Ball>) return ball_box_volume(reg, box);
            else if constexpr (std::is_same_v<T, Cube>) return cube_box_volume(reg, box);
            else {
                double m = 0.0;
                for (const auto& b : reg.boxes) m += box_overlap(b, box);
                return m;
            }
        },
        region);
}

double region_measure(const Region& region) {
    return std::visit(
        [](const auto& reg) -> double {
            using T = std::decay_t<decltype(reg)>;
            if constexpr (std::is_same_v<T, BoxRegion>) return reg.measure();
            else return reg.volume();
        },
        region);
}

// ---- simple functions -----------------------------------------------------

SimpleFunction::SimpleFunction(std::size_t n, std::vector<Cell> cells, bool validate_disjoint) : n_(n), cells_(std::move(cells)) {
    if (n == 0) throw UsageError("simple function needs dimension >= 1");
    for (const Cell& c : cells_) {
        if (c.box.dim() != n) throw UsageError("cell dimension does not match the simple function");
        if (!std::isfinite(c.value) || c.value < 0.0) throw UsageError("cell values must be finite and >= 0");
        for (const Interval& s : c.box.sides)
            if (std::isnan(s.lo) || std::isnan(s.hi) || s.lo > s.hi) throw UsageError("cell intervals need lo <= hi");
    }
    if (validate_disjoint) {
        for (std::size_t i = 0; i < cells_.size(); ++i)
            for (std::size_t j = i + 1; j < cells_.size(); ++j)
                if (box_overlap(cells_[i].box, cells_[j].box) > 0.0)
                    throw UsageError("cells " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }
}

SimpleFunction SimpleFunction::indicator(const Box& box, double value) {
    return SimpleFunction(box.dim(), {Cell{box, value}});
}

bool SimpleFunction::is_zero() const {
    for (const Cell& c : cells_)
        if (c.value > 0.0 && c.box.volume() > 0.0) return false;
    return true;
}

double SimpleFunction::sup_norm() const {
    double m = 0.0;
    for (const Cell& c : cells_)
        if (c.box.volume() > 0.0) m = std::max(m, c.value);
    return m;
}

double SimpleFunction::lp_norm(double p) const {
    if (std::isinf(p)) return sup_norm();
    if (!(p > 0.0)) throw DomainError("lp_norm needs p > 0");
    double s = 0.0;
    for (const Cell& c : cells_) {
        if (c.value == 0.0) continue;
        double v = c.box.volume();
        if (v == 0.0) continue;
        s += std::pow(c.value, p) * v;
    }
    return std::pow(s, 1.0 / p);
}

SimpleFunction SimpleFunction::scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be finite and >= 0");
    std::vector<Cell> out = cells_;
    for (Cell& cell : out) cell.value *= c;
    return SimpleFunction(n_, std::move(out), false);
}

std::vector<double> SimpleFunction::axis_coords(std::size_t axis) const {
    std::vector<double> xs;
    for (const Cell& c : cells_) {
        if (c.value == 0.0 || c.box.is_empty()) continue;
        for (double x : {c.box.sides[axis].lo, c.box.sides[axis].hi})
            if (std::isfinite(x)) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

std::vector<double> SimpleFunction::levels() const {
    std::vector<double> v;
    for (const Cell& c : cells_)
        if (c.value > 0.0 && !c.box.is_empty()) v.push_back(c.value);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

SimpleFunction SimpleFunction::level_set_indicator(double level) const {
    std::vector<Cell> out;
    for (const Cell& c : cells_)
        if (c.value >= level && c.value > 0.0) out.push_back({c.box, 1.0});
    return SimpleFunction(n_, std::move(out), false);
}

Occupancy occupancy(const SimpleFunction& f, const Region& region) {
    Occupancy occ;
    occ.volume = region_measure(region);
    std::vector<std::pair<double, double>> raw;
    for (const Cell& c : f.cells()) {
        if (c.value == 0.0) continue;
        double m = intersection_volume(region, c.box);
        if (m > 0.0) raw.emplace_back(c.value, m);
    }
    std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [v, m] : raw) {
        if (!occ.items.empty() && occ.items.back().first == v) occ.items.back().second += m;
        else occ.items.emplace_back(v, m);
    }
    return occ;
}

double distribution(const SimpleFunction& f, const Region& region, double t) {
    if (std::isnan(t) || t < 0.0) throw DomainError("distribution needs t >= 0");
    double m = 0.0;
    for (const Cell& c : f.cells()) {
        if (!(c.value > t)) continue;
        m += intersection_volume(region, c.box);
    }
    return m;
}

double modular(const Occupancy& occ, double lambda, const YoungFunction& Phi) {
    if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
    double s = 0.0;
    for (const auto& [v, m] : occ.items) {
        if (m == 0.0) continue;
        double p = Phi(v / lambda);
        if (p == 0.0) continue;
        s += p * m;
    }
    return s / occ.volume;
}

double modular(const SimpleFunction& f, const Region& ball_or_cube, double lambda, const YoungFunction& Phi) {
    if (std::holds_alternative<BoxRegion>(ball_or_cube)) throw UsageError("modular is defined over balls or cubes");
    if (!(lambda > 0.0)) throw DomainError("modular needs lambda > 0");
    return modular(occupancy(f, ball_or_cube), lambda, Phi);
}

SimpleFunction rasterize(const std::function<double(const Point&)>& fn, const Box& domain, double h) {
    const std::size_t n = domain.dim();
    if (n == 0 || !domain.is_bounded() || domain.is_empty()) throw UsageError("rasterize needs a bounded nonempty domain");
    if (!(h > 0.0)) throw UsageError("rasterize needs h > 0");
    std::vector<std::size_t> counts(n);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        counts[i] = static_cast<std::size_t>(std::ceil(domain.sides[i].length() / h - 1e-12));
        if (counts[i] == 0) counts[i] = 1;
        total *= counts[i];
        if (total > 200'000'000) throw UsageError("rasterize grid too large");
    }
    std::vector<Cell> cells;
    std::vector<std::size_t> idx(n, 0);
    Point x(n);
    const std::size_t last = n - 1;
    auto lo = [&](std::size_t axis, std::size_t i) { return domain.sides[axis].lo + h * static_cast<double>(i); };
    while (true) {
        for (std::size_t a = 0; a < last; ++a) x[a] = lo(a, idx[a]) + 0.5 * h;
        std::size_t run_start = 0;
        double run_value = 0.0;
        auto flush = [&](std::size_t end) {
            if (run_value > 0.0 && end > run_start) {
                std::vector<Interval> s(n);
                for (std::size_t a = 0; a < last; ++a) s[a] = {lo(a, idx[a]), lo(a, idx[a] + 1)};
                s[last] = {lo(last, run_start), lo(last, end)};
                cells.push_back({Box(std::move(s)), run_value});
            }
        };
        for (std::size_t j = 0; j < counts[last]; ++j) {
            x[last] = lo(last, j) + 0.5 * h;
            double v = fn(x);
            if (!std::isfinite(v) || v < 0.0) throw DomainError("rasterize: sampled value must be finite and >= 0");
            if (j == 0) {
                run_start = 0;
                run_value = v;
            } else if (v != run_value) {
                flush(j);
                run_start = j;
                run_value = v;
            }
        }
        flush(counts[last]);
        std::size_t a = 0;
        for (; a < last; ++a) {
            if (++idx[a] < counts[a]) break;
            idx[a] = 0;
        }
        if (a == last) break;
    }
    return SimpleFunction(n, std::move(cells), false);
}

} // namespace orlicz
