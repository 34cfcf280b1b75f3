#include "orlicz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "orlicz/errors.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz {

const char* to_string(Geometry g) { return g == Geometry::ball ? "ball" : "cube"; }

std::string SearchSpec::describe() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "geometry=%s; radii: dyadic 2^j for j in [%d,%d]%s, cap %zu; centers: corner lattice, %zu per axis, cap %zu; "
                  "refine_depth=%d, refine_top=%zu; extra centers %zu, extra radii %zu",
                  to_string(geometry), j_min, j_max, pairwise_radii ? " plus pairwise corner distances" : "", max_radii,
                  max_axis_coords, max_centers, refine_depth, refine_top, extra_centers.size(), extra_radii.size());
    return buf;
}

namespace {

template <class T>
std::vector<T> subsample(const std::vector<T>& v, std::size_t cap) {
    if (v.size() <= cap || cap == 0) return v;
    if (cap == 1) return {v.front()};
    std::vector<T> out;
    out.reserve(cap);
    for (std::size_t i = 0; i < cap; ++i) {
        std::size_t idx = static_cast<std::size_t>(std::llround(static_cast<double>(i) * static_cast<double>(v.size() - 1) /
                                                                static_cast<double>(cap - 1)));
        out.push_back(v[idx]);
    }
    return out;
}

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Bisection for inf{lambda > 0 : ok(lambda)}, ok monotone (false below, true above).
template <class Ok>
double bisect_norm(const Ok& ok, double scale, double tol, double* hi_out, std::string* diag) {
    double lo, hi;
    if (ok(scale)) {
        hi = scale;
        lo = 0.5 * scale;
        while (ok(lo)) {
            hi = lo;
            lo *= 0.5;
            if (lo < scale * 1e-300) {
                if (diag) *diag = "modular stays <= 1 as lambda -> 0";
                if (hi_out) *hi_out = hi;
                return 0.0;
            }
        }
    } else {
        lo = scale;
        hi = 2.0 * scale;
        while (!ok(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > scale * 1e300 || std::isinf(hi)) {
                if (diag) *diag = "modular exceeds 1 for every lambda";
                if (hi_out) *hi_out = kInfinity;
                return kInfinity;
            }
        }
    }
    while (hi - lo > tol * lo) {
        double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (ok(mid)) hi = mid;
        else lo = mid;
    }
    if (hi_out) *hi_out = hi;
    return lo;
}

Region make_region(Geometry g, const Point& c, double r) {
    if (g == Geometry::ball) return Ball{c, r};
    return Cube{c, r};
}

double normalizer(const GrowthFunction& phi, Geometry g, double r) { return g == Geometry::ball ? phi(r) : phi(2.0 * r); }

struct Scored {
    double value = -1.0;
    Point center;
    double radius = 0.0;
};

constexpr double kTieRel = 1e-12;

bool lex_less(const Point& a, const Point& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

// Strictly better under the tie rule: larger value; within kTieRel, smaller
// radius, then lexicographically smaller center.
bool better(const Scored& a, const Scored& b) {
    if (b.value < 0.0) return a.value >= 0.0;
    double scale = std::max(std::abs(a.value), std::abs(b.value));
    if (a.value > b.value + kTieRel * scale) return true;
    if (a.value < b.value - kTieRel * scale) return false;
    if (a.radius != b.radius) return a.radius < b.radius;
    return lex_less(a.center, b.center);
}

} // namespace

double luxemburg_from_occupancy(const Occupancy& occ, const YoungFunction& Phi, double tol, double* hi_out, std::string* diagnostic) {
    if (occ.items.empty()) {
        if (hi_out) *hi_out = 0.0;
        return 0.0;
    }
    auto ok = [&](double lambda) { return modular(occ, lambda, Phi) <= 1.0; };
    return bisect_norm(ok, occ.items.front().first, tol, hi_out, diagnostic);
}

double weak_luxemburg_from_occupancy(const Occupancy& occ, const YoungFunction& Phi, double tol, double* hi_out,
                                     std::string* diagnostic) {
    if (occ.items.empty()) {
        if (hi_out) *hi_out = 0.0;
        return 0.0;
    }
    // M_j = |{x in B : f(x) >= w_j}|; the sup over t of Phi(t) m(B, f/lambda, t)
    // is approached as t rises to w_j / lambda.
    std::vector<double> cum(occ.items.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < occ.items.size(); ++j) {
        acc += occ.items[j].second;
        cum[j] = acc;
    }
    auto ok = [&](double lambda) {
        double s = 0.0;
        for (std::size_t j = 0; j < occ.items.size(); ++j) {
            double t = occ.items[j].first / lambda;
            double left = std::nextafter(t, 0.0);
            double p = Phi(left);
            if (p == 0.0) continue;
            s = std::max(s, p * cum[j]);
        }
        return s <= occ.volume;
    };
    return bisect_norm(ok, occ.items.front().first, tol, hi_out, diagnostic);
}

namespace {

NormEstimate local_norm(const SimpleFunction& f, const Region& region, const YoungFunction& Phi, double tol, bool weak) {
    if (std::holds_alternative<BoxRegion>(region)) throw UsageError("local norms are taken over a ball or a cube");
    if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
    NormEstimate e;
    Occupancy occ = occupancy(f, region);
    double hi = 0.0;
    e.value = weak ? weak_luxemburg_from_occupancy(occ, Phi, tol, &hi, &e.diagnostic)
                   : luxemburg_from_occupancy(occ, Phi, tol, &hi, &e.diagnostic);
    e.lo = e.value;
    e.hi = hi;
    e.upper_certified = true;
    e.converged = true;
    std::visit(
        [&](const auto& reg) {
            using T = std::decay_t<decltype(reg)>;
            if constexpr (std::is_same_v<T, Ball>) e.witness = {reg.center, reg.radius, Geometry::ball};
            else if constexpr (std::is_same_v<T, Cube>) e.witness = {reg.center, reg.half_side, Geometry::cube};
        },
        region);
    e.search_spec = "single region";
    return e;
}

} // namespace

NormEstimate luxemburg_norm(const SimpleFunction& f, const Region& region, const YoungFunction& Phi, double tol) {
    return local_norm(f, region, Phi, tol, false);
}

NormEstimate weak_luxemburg_norm(const SimpleFunction& f, const Region& region, const YoungFunction& Phi, double tol) {
    return local_norm(f, region, Phi, tol, true);
}

double candidate_value(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi, Geometry g,
                       const Point& center, double radius, bool weak, double tol) {
    if (!(radius > 0.0)) return 0.0;
    Occupancy occ = occupancy(f, make_region(g, center, radius));
    if (occ.items.empty()) return 0.0;
    double lux = weak ? weak_luxemburg_from_occupancy(occ, Phi, tol) : luxemburg_from_occupancy(occ, Phi, tol);
    return lux / normalizer(phi, g, radius);
}

CandidateFamily candidate_family(const SimpleFunction& f, const SearchSpec& spec) {
    if (spec.j_min > spec.j_max) throw UsageError("search: j_min > j_max");
    if (spec.max_axis_coords == 0 || spec.max_radii == 0 || spec.max_centers == 0) throw UsageError("search: caps must be positive");
    const std::size_t n = f.dim();
    CandidateFamily fam;

    // centers
    std::vector<std::vector<double>> axis(n);
    std::size_t per_axis = spec.max_axis_coords;
    for (;;) {
        std::size_t product = 1;
        for (std::size_t a = 0; a < n; ++a) {
            std::vector<double> xs = f.axis_coords(a);
            std::vector<double> pts = xs;
            if (n == 1) {
                for (std::size_t i = 0; i < xs.size(); ++i)
                    for (std::size_t j = i + 1; j < xs.size(); ++j) pts.push_back(0.5 * (xs[i] + xs[j]));
            } else {
                for (std::size_t i = 0; i + 1 < xs.size(); ++i) pts.push_back(0.5 * (xs[i] + xs[i + 1]));
            }
            if (pts.empty()) pts.push_back(0.0);
            sort_unique(pts);
            axis[a] = subsample(pts, per_axis);
            product *= axis[a].size();
        }
        if (product <= spec.max_centers || per_axis <= 2) break;
        per_axis = std::max<std::size_t>(2, per_axis * 3 / 4);
    }
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        Point c(n);
        for (std::size_t a = 0; a < n; ++a) c[a] = axis[a][idx[a]];
        fam.centers.push_back(std::move(c));
        std::size_t a = 0;
        for (; a < n; ++a) {
            if (++idx[a] < axis[a].size()) break;
            idx[a] = 0;
        }
        if (a == n) break;
    }
    for (const Point& c : spec.extra_centers) {
        if (c.size() != n) throw UsageError("search: extra center dimension mismatch");
        fam.centers.push_back(c);
    }

    // radii
    std::vector<double> radii;
    if (spec.pairwise_radii) {
        for (std::size_t a = 0; a < n; ++a) {
            std::vector<double> xs = subsample(f.axis_coords(a), 64);
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = i + 1; j < xs.size(); ++j) {
                    radii.push_back(xs[j] - xs[i]);
                    radii.push_back(0.5 * (xs[j] - xs[i]));
                }
        }
        std::vector<Point> corners;
        for (const Cell& cell : f.cells()) {
            if (cell.value == 0.0 || cell.box.is_empty() || !cell.box.is_bounded()) continue;
            for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                Point p(n);
                for (std::size_t a = 0; a < n; ++a) p[a] = (mask >> a) & 1 ? cell.box.sides[a].hi : cell.box.sides[a].lo;
                corners.push_back(std::move(p));
            }
        }
        std::sort(corners.begin(), corners.end(), [](const Point& a, const Point& b) { return lex_less(a, b); });
        corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
        corners = subsample(corners, 256);
        for (std::size_t i = 0; i < corners.size(); ++i)
            for (std::size_t j = i + 1; j < corners.size(); ++j) {
                double s = 0.0;
                for (std::size_t a = 0; a < n; ++a) s += (corners[i][a] - corners[j][a]) * (corners[i][a] - corners[j][a]);
                double d = std::sqrt(s);
                radii.push_back(d);
                radii.push_back(0.5 * d);
            }
    }
    radii.erase(std::remove_if(radii.begin(), radii.end(), [](double r) { return !(r > 0.0) || !std::isfinite(r); }), radii.end());
    sort_unique(radii);
    radii = subsample(radii, spec.max_radii);
    for (int j = spec.j_min; j <= spec.j_max; ++j) radii.push_back(std::ldexp(1.0, j));
    for (double r : spec.extra_radii) {
        if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("search: extra radii must be positive");
        radii.push_back(r);
    }
    sort_unique(radii);
    fam.radii = std::move(radii);
    return fam;
}

namespace {

struct SupResult {
    Scored best;
    std::vector<Scored> per_center;  // best radius per center, in center order
};

SupResult coarse_sup(const CandidateFamily& fam, const std::function<double(const Point&, double)>& value) {
    SupResult out;
    out.per_center = parallel_map<Scored>(fam.centers.size(), [&](std::size_t i) {
        Scored best;
        for (double r : fam.radii) {
            Scored s{value(fam.centers[i], r), fam.centers[i], r};
            if (better(s, best)) best = s;
        }
        return best;
    });
    for (const Scored& s : out.per_center)
        if (better(s, out.best)) out.best = s;
    return out;
}

NormEstimate om_search(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi, const SearchSpec& spec,
                       double tol, bool weak) {
    if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
    NormEstimate e;
    e.witness.geometry = spec.geometry;
    if (f.is_zero()) {
        e.value = e.lo = e.hi = 0.0;
        e.converged = true;
        e.upper_certified = true;
        e.search_spec = spec.describe() + "; zero function";
        return e;
    }
    CandidateFamily fam = candidate_family(f, spec);
    if (fam.centers.empty() || fam.radii.empty()) throw UsageError("search: empty candidate set");
    const double inner_tol = std::min(1e-10, 0.01 * tol);
    auto value = [&](const Point& c, double r) { return candidate_value(f, Phi, phi, spec.geometry, c, r, weak, inner_tol); };

    SupResult coarse = coarse_sup(fam, value);
    Scored best = coarse.best;

    // Seeds for local refinement: best few distinct centers.
    std::vector<Scored> seeds = coarse.per_center;
    std::stable_sort(seeds.begin(), seeds.end(), [](const Scored& a, const Scored& b) { return better(a, b); });
    if (seeds.size() > spec.refine_top) seeds.resize(spec.refine_top);

    double prev = best.value;
    double last_change = kInfinity;
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int level = 1; level <= spec.refine_depth; ++level) {
        for (Scored& seed : seeds) {
            if (!(seed.value > 0.0)) continue;
            // golden section in log r around the seed radius
            double span = std::log(2.0) / level;
            double a = std::log(seed.radius) - span, b = std::log(seed.radius) + span;
            double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
            double f1 = value(seed.center, std::exp(x1)), f2 = value(seed.center, std::exp(x2));
            auto consider = [&](const Point& c, double r, double v) {
                Scored s{v, c, r};
                if (better(s, seed)) seed = s;
            };
            consider(seed.center, std::exp(x1), f1);
            consider(seed.center, std::exp(x2), f2);
            for (int it = 0; it < 24; ++it) {
                if (f1 >= f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - golden * (b - a);
                    f1 = value(seed.center, std::exp(x1));
                    consider(seed.center, std::exp(x1), f1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + golden * (b - a);
                    f2 = value(seed.center, std::exp(x2));
                    consider(seed.center, std::exp(x2), f2);
                }
            }
            // compass search on the center
            double step = seed.radius * std::ldexp(1.0, -level - 1);
            for (int pass = 0; pass < 2; ++pass) {
                bool moved = false;
                for (std::size_t ax = 0; ax < seed.center.size(); ++ax) {
                    for (double sgn : {-1.0, 1.0}) {
                        Point c = seed.center;
                        c[ax] += sgn * step;
                        double v = value(c, seed.radius);
                        Scored s{v, c, seed.radius};
                        if (s.value > seed.value * (1.0 + kTieRel)) {
                            seed = s;
                            moved = true;
                        }
                    }
                }
                if (!moved) step *= 0.5;
            }
            if (better(seed, best)) best = seed;
        }
        last_change = best.value - prev;
        prev = best.value;
    }

    e.value = e.lo = best.value;
    e.hi = kInfinity;
    e.witness = {best.center, best.radius, spec.geometry};
    e.converged = spec.refine_depth > 0 && last_change <= tol * best.value;
    char buf[128];
    std::snprintf(buf, sizeof buf, "; %zu centers x %zu radii", fam.centers.size(), fam.radii.size());
    e.search_spec = spec.describe() + buf;
    if (spec.refine_depth == 0) e.diagnostic = "no refinement requested; convergence not assessed";
    return e;
}

} // namespace

NormEstimate orlicz_morrey_norm(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                const SearchSpec& search, double tol) {
    return om_search(f, Phi, phi, search, tol, false);
}

NormEstimate weak_orlicz_morrey_norm(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                     const SearchSpec& search, double tol) {
    return om_search(f, Phi, phi, search, tol, true);
}

WeakIdentityReport weak_norm_identity(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                      const SearchSpec& search, double tol) {
    WeakIdentityReport rep;
    rep.levels = f.levels();
    rep.level_terms.assign(rep.levels.size(), 0.0);
    if (f.is_zero()) return rep;
    CandidateFamily fam = candidate_family(f, search);
    rep.candidates = fam.centers.size() * fam.radii.size();

    struct Row {
        Scored weak;
        Scored formula;
        std::vector<double> terms;
    };
    const std::size_t L = rep.levels.size();
    auto rows = parallel_map<Row>(fam.centers.size(), [&](std::size_t i) {
        Row row;
        row.terms.assign(L, 0.0);
        const Point& c = fam.centers[i];
        for (double r : fam.radii) {
            Occupancy occ = occupancy(f, make_region(search.geometry, c, r));
            if (occ.items.empty()) continue;
            const double norm = normalizer(phi, search.geometry, r);
            Scored w{weak_luxemburg_from_occupancy(occ, Phi, tol) / norm, c, r};
            if (better(w, row.weak)) row.weak = w;

            // w_j * ||chi_{f >= w_j}||_{Phi,B} via the strong Luxemburg bisection
            double best_term = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                double level = rep.levels[j];
                double m = 0.0;
                for (const auto& [v, mv] : occ.items)
                    if (v >= level) m += mv;
                if (m == 0.0) continue;
                Occupancy ind;
                ind.volume = occ.volume;
                ind.items = {{1.0, m}};
                double term = level * luxemburg_from_occupancy(ind, Phi, tol) / norm;
                row.terms[j] = std::max(row.terms[j], term);
                best_term = std::max(best_term, term);
            }
            Scored s{best_term, c, r};
            if (better(s, row.formula)) row.formula = s;
        }
        return row;
    });
    Scored bw, bf;
    for (const Row& row : rows) {
        if (better(row.weak, bw)) bw = row.weak;
        if (better(row.formula, bf)) bf = row.formula;
        for (std::size_t j = 0; j < L; ++j) rep.level_terms[j] = std::max(rep.level_terms[j], row.terms[j]);
    }
    rep.weak_norm = std::max(0.0, bw.value);
    rep.formula = std::max(0.0, bf.value);
    rep.weak_witness = {bw.center, bw.radius, search.geometry};
    rep.formula_witness = {bf.center, bf.radius, search.geometry};
    double scale = std::max(rep.weak_norm, rep.formula);
    rep.rel_gap = scale > 0.0 ? std::abs(rep.weak_norm - rep.formula) / scale : 0.0;
    return rep;
}

ComparabilityReport cube_ball_comparability(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                            const ClassCertificate& cert, const SearchSpec& search, double tol) {
    if (!cert.C1 || !cert.C2) throw PreconditionError("cube/ball comparability needs certified C1 and C2");
    const std::size_t n = f.dim();
    const double nd = static_cast<double>(n);
    const double vn = unit_ball_volume(n);
    const double kappa = std::ldexp(1.0, static_cast<int>(n)) / vn;
    const double kappa_prime = vn * std::pow(nd, 0.5 * nd) / std::ldexp(1.0, static_cast<int>(n));
    double growth = *cert.C2 * phi(0.5 * std::sqrt(nd));
    if (n >= 4) growth = std::min(growth, *cert.C1);

    ComparabilityReport rep;
    SearchSpec s = search;
    s.geometry = Geometry::ball;
    rep.ball_norm = orlicz_morrey_norm(f, Phi, phi, s, tol).value;
    s.geometry = Geometry::cube;
    rep.cube_norm = orlicz_morrey_norm(f, Phi, phi, s, tol).value;
    rep.lower = 1.0 / (kappa_prime * growth);
    rep.upper = kappa * *cert.C1;
    rep.dimensional_constant = std::pow(2.0 * std::sqrt(nd), nd);
    if (rep.ball_norm == 0.0 && rep.cube_norm == 0.0) {
        rep.ratio = 1.0;
        rep.pass = true;
        rep.within_dimensional_band = true;
        return rep;
    }
    rep.ratio = rep.cube_norm > 0.0 ? rep.ball_norm / rep.cube_norm : kInfinity;
    const double slack = 1e-9;
    rep.pass = rep.ratio >= rep.lower * (1.0 - slack) && rep.ratio <= rep.upper * (1.0 + slack);
    rep.within_dimensional_band = rep.ratio >= 1.0 / rep.dimensional_constant && rep.ratio <= rep.dimensional_constant;
    return rep;
}

bool grid_sup_bounded(const std::vector<double>& v, bool check_front, double cap) {
    if (v.empty()) return true;
    const double top = *std::max_element(v.begin(), v.end());
    if (!(top <= cap)) return false;
    // a ratio still climbing over the last decade of an open end has no finite bound
    const std::size_t decade = std::min<std::size_t>(20, v.size() - 1);
    if (v.back() == top && v.back() > v[v.size() - 1 - decade] * 1.01) return false;
    if (check_front && v.front() == top && v.front() > v[decade] * 1.01) return false;
    return true;
}

LpEmbeddingReport lp_embedding_check(const SimpleFunction& f, double p, const YoungFunction& Phi, const GrowthFunction& phi,
                                     const SearchSpec& search, double cap) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw UsageError("lp_embedding_check needs finite p >= 1");
    LpEmbeddingReport rep;
    rep.p = p;
    const double nd = static_cast<double>(f.dim());
    std::vector<double> c1, c2;
    for (double t : log_grid(1.0, 1e6, 241)) c1.push_back(std::pow(Phi(t) / std::pow(t, p), 1.0 / p));
    for (double r : log_grid(1e-6, 1e6, 241)) c2.push_back(std::pow(r, -nd / p) / phi(r));
    rep.C1 = *std::max_element(c1.begin(), c1.end());
    rep.C2 = *std::max_element(c2.begin(), c2.end());
    if (!grid_sup_bounded(c1, false, cap)) throw PreconditionError("Phi(t) <= C1^p t^p for t >= 1 is not certified on the grid");
    if (!grid_sup_bounded(c2, true, cap))
        throw PreconditionError("r^{-n/p} <= C2 phi(r) is not certified on the grid");
    rep.lp_norm = f.lp_norm(p);
    rep.morrey_norm = orlicz_morrey_norm(f, Phi, phi, search).value;
    rep.bound = rep.C1 * rep.C2 * rep.lp_norm;
    rep.pass = rep.morrey_norm <= rep.bound * (1.0 + 1e-9);
    return rep;
}

} // namespace orlicz
