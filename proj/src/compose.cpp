#include "orlicz/compose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "orlicz/errors.hpp"
#include "orlicz/indicators.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz {

AffineMap AffineMap::linear(Matrix A) {
    const std::size_t n = A.n();
    if (n == 0) throw UsageError("affine map needs n >= 1");
    return AffineMap{std::move(A), Point(n, 0.0)};
}

AffineMap AffineMap::diagonal(const std::vector<double>& d) { return linear(Matrix::diagonal(d)); }

AffineMap AffineMap::signed_permutation(const std::vector<std::size_t>& perm, const std::vector<double>& signs) {
    const std::size_t n = perm.size();
    if (!signs.empty() && signs.size() != n) throw UsageError("signs must match the permutation length");
    std::vector<bool> seen(n, false);
    Matrix A(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (perm[i] >= n || seen[perm[i]]) throw UsageError("perm must be a permutation of 0..n-1");
        seen[perm[i]] = true;
        double s = signs.empty() ? 1.0 : signs[i];
        if (s != 1.0 && s != -1.0) throw UsageError("signs must be +1 or -1");
        A(i, perm[i]) = s;
    }
    return linear(std::move(A));
}

AffineMap AffineMap::dilation(double c, std::size_t n) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("dilation factor must be positive and finite");
    return diagonal(std::vector<double>(n, c));
}

AffineMap AffineMap::rotation(std::size_t n, std::size_t i, std::size_t j, double theta) {
    if (i >= n || j >= n || i == j) throw UsageError("rotation plane needs two distinct axes below n");
    Matrix A = Matrix::identity(n);
    A(i, i) = std::cos(theta);
    A(j, j) = std::cos(theta);
    A(i, j) = -std::sin(theta);
    A(j, i) = std::sin(theta);
    return linear(std::move(A));
}

Point AffineMap::operator()(const Point& x) const {
    Point y = A * x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
    return y;
}

double AffineMap::lipschitz() const { return svd().sigma.back(); }

bool AffineMap::is_box_preserving() const {
    const std::size_t n = dim();
    std::vector<int> col(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int row = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (A(i, j) != 0.0) {
                ++row;
                ++col[j];
            }
        if (row != 1) return false;
    }
    return std::all_of(col.begin(), col.end(), [](int c) { return c == 1; });
}

Box AffineMap::preimage(const Box& box) const {
    if (!is_box_preserving()) throw UnsupportedMapError("exact pre-images need a box-preserving map");
    const std::size_t n = dim();
    if (box.dim() != n) throw UsageError("box dimension does not match the map");
    std::vector<Interval> sides(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = 0;
        while (A(i, j) == 0.0) ++j;
        const double s = A(i, j);
        double lo = (box.sides[i].lo - b[i]) / s;
        double hi = (box.sides[i].hi - b[i]) / s;
        if (s < 0.0) std::swap(lo, hi);
        sides[j] = {lo, hi};
    }
    return Box(std::move(sides));
}

double measure_dilation_constant(const AffineMap& psi) {
    double det = std::abs(psi.determinant());
    if (!(det > 0.0)) throw RankDeficiencyError("affine map is singular");
    return 1.0 / det;
}

SimpleFunction compose(const SimpleFunction& f, const AffineMap& psi) {
    if (f.dim() != psi.dim()) throw UsageError("function and map dimensions differ");
    if (!psi.is_box_preserving()) throw UnsupportedMapError("exact composition needs a box-preserving map");
    std::vector<Cell> cells;
    cells.reserve(f.cells().size());
    for (const Cell& c : f.cells()) cells.push_back({psi.preimage(c.box), c.value});
    return SimpleFunction(f.dim(), std::move(cells), false);
}

double evaluate(const SimpleFunction& f, const Point& x) {
    for (const Cell& c : f.cells()) {
        bool in = true;
        for (std::size_t i = 0; i < x.size() && in; ++i) in = x[i] >= c.box.sides[i].lo && x[i] < c.box.sides[i].hi;
        if (in) return c.value;
    }
    return 0.0;
}

SimpleFunction compose_rasterized(const SimpleFunction& f, const AffineMap& psi, double h) {
    const std::size_t n = f.dim();
    if (psi.dim() != n) throw UsageError("function and map dimensions differ");
    if (!(h > 0.0)) throw UsageError("raster cell size must be positive");
    if (f.is_zero()) return SimpleFunction::zero(n);
    const Matrix inv = psi.A.inverse();
    std::vector<Interval> bounds(n, Interval{kInfinity, -kInfinity});
    for (const Cell& c : f.cells()) {
        if (!c.box.is_bounded()) throw UnsupportedMapError("rasterized composition needs bounded cells");
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Point y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = ((mask >> i) & 1 ? c.box.sides[i].hi : c.box.sides[i].lo) - psi.b[i];
            Point x = inv * y;
            for (std::size_t i = 0; i < n; ++i) {
                bounds[i].lo = std::min(bounds[i].lo, x[i]);
                bounds[i].hi = std::max(bounds[i].hi, x[i]);
            }
        }
    }
    for (auto& s : bounds) {
        s.lo = h * std::floor(s.lo / h) - h;
        s.hi = h * std::ceil(s.hi / h) + h;
    }
    return rasterize([&](const Point& x) { return evaluate(f, psi(x)); }, Box(bounds), h);
}

CubeNorm cube_norm(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi, const SearchSpec& search) {
    CubeNorm out;
    if (f.is_zero()) {
        out.closed_form = true;
        return out;
    }
    if (f.cells().size() == 1) {
        const Cell& c = f.cells().front();
        std::vector<double> finite;
        bool usable = true;
        for (const Interval& s : c.box.sides) {
            if (std::isfinite(s.lo) && std::isfinite(s.hi))
                finite.push_back(s.hi - s.lo);
            else if (!(s.lo == -kInfinity && s.hi == kInfinity))
                usable = false;
        }
        if (usable && !finite.empty()) {
            std::sort(finite.begin(), finite.end());
            out.value = c.value * box_indicator_norm(BoxSpec::make(finite, f.dim()), Phi, phi).value;
            out.closed_form = true;
            return out;
        }
    }
    SearchSpec s = search;
    s.geometry = Geometry::cube;
    out.value = orlicz_morrey_norm(f, Phi, phi, s).value;
    return out;
}

double sufficiency_constant(const AffineMap& psi, const GrowthFunction& phi, const ClassCertificate& cert) {
    if (!cert.C1 || !cert.C2) throw PreconditionError("sufficiency bound needs certified C1 and C2");
    const double K = measure_dilation_constant(psi);
    const double L = psi.lipschitz();
    return K * (*cert.C1 + *cert.C2 * phi(L) * std::pow(L, static_cast<double>(psi.dim())));
}

SufficiencyReport sufficiency_bound(const AffineMap& psi, const YoungFunction& Phi, const GrowthFunction& phi,
                                    const ClassCertificate& cert, const std::vector<SimpleFunction>& tests,
                                    const SearchSpec& search) {
    SufficiencyReport rep;
    rep.bound = sufficiency_constant(psi, phi, cert);
    rep.K = measure_dilation_constant(psi);
    rep.L = psi.lipschitz();
    rep.C1 = *cert.C1;
    rep.C2 = *cert.C2;
    rep.items = parallel_map<SufficiencyItem>(tests.size(), [&](std::size_t i) {
        SufficiencyItem it;
        CubeNorm a = cube_norm(tests[i], Phi, phi, search);
        CubeNorm b = cube_norm(compose(tests[i], psi), Phi, phi, search);
        it.norm_f = a.value;
        it.norm_composed = b.value;
        it.closed_form = a.closed_form && b.closed_form;
        it.ratio = a.value > 0.0 ? b.value / a.value : 0.0;
        it.pass = it.ratio <= rep.bound * (1.0 + 1e-9);
        return it;
    });
    rep.pass = true;
    for (const auto& it : rep.items) {
        rep.max_ratio = std::max(rep.max_ratio, it.ratio);
        rep.pass = rep.pass && it.pass;
    }
    return rep;
}

DilationBounds dilation_opnorm(const GrowthFunction& phi, double c, const std::vector<double>& r_grid) {
    if (!(c > 0.0) || !std::isfinite(c)) throw UsageError("dilation factor must be positive and finite");
    if (r_grid.empty()) throw UsageError("empty r grid");
    const auto [mn, mx] = std::minmax_element(r_grid.begin(), r_grid.end());
    if (!(*mn > 0.0)) throw UsageError("r grid must be positive");
    if (*mx / *mn < 1e8 * (1.0 - 1e-9)) throw UsageError("r grid must span at least 8 decades");
    DilationBounds out;
    out.c = c;
    out.lower = kInfinity;
    out.upper = 0.0;
    for (double r : r_grid) {
        double q = phi(c * r) / phi(r);
        out.lower = std::min(out.lower, q);
        out.upper = std::max(out.upper, q);
    }
    out.phi_c = phi(c);
    return out;
}

namespace {

bool is_signed_permutation(const Matrix& W) {
    const std::size_t n = W.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double v = W(i, j);
            if (v != 0.0 && v != 1.0 && v != -1.0) return false;
        }
    return AffineMap::linear(W).is_box_preserving();
}

double ratio_or_one(double num, double den) { return den > 0.0 ? num / den : (num > 0.0 ? kInfinity : 1.0); }

} // namespace

OrthogonalReport orthogonal_invariance_check(const Matrix& W, const SimpleFunction& f, const YoungFunction& Phi,
                                             const GrowthFunction& phi, std::optional<double> tol,
                                             const SearchSpec& search) {
    const std::size_t n = W.n();
    if (n != f.dim()) throw UsageError("matrix and function dimensions differ");
    if (max_abs_diff(W.transpose() * W, Matrix::identity(n)) > 1e-10) throw PreconditionError("W is not orthogonal");

    OrthogonalReport rep;
    SearchSpec ball = search;
    ball.geometry = Geometry::ball;
    const Matrix Wt = W.transpose();
    const AffineMap map = AffineMap::linear(W);
    rep.exact_path = is_signed_permutation(W);
    rep.tol = tol.value_or(rep.exact_path ? 1e-6 : 1e-2);

    NormEstimate ef = orlicz_morrey_norm(f, Phi, phi, ball);
    rep.norm_f = ef.value;

    if (rep.exact_path) {
        SimpleFunction g = compose(f, map);
        CandidateFamily fam = candidate_family(f, ball);
        if (!ef.witness.center.empty()) {
            fam.centers.push_back(ef.witness.center);
            fam.radii.push_back(ef.witness.radius);
        }
        struct Pair {
            double vf = 0.0, vg = 0.0;
        };
        auto rows = parallel_map<Pair>(fam.centers.size(), [&](std::size_t i) {
            Pair p;
            const Point& c = fam.centers[i];
            Point mc = Wt * c;
            for (double r : fam.radii) {
                p.vf = std::max(p.vf, candidate_value(f, Phi, phi, Geometry::ball, c, r));
                p.vg = std::max(p.vg, candidate_value(g, Phi, phi, Geometry::ball, mc, r));
            }
            return p;
        });
        double vf = 0.0, vg = 0.0;
        for (const auto& p : rows) {
            vf = std::max(vf, p.vf);
            vg = std::max(vg, p.vg);
        }
        rep.mapped_ratio = ratio_or_one(vg, vf);
        rep.norm_composed = orlicz_morrey_norm(g, Phi, phi, ball).value;
        rep.note = "exact pre-images (signed permutation)";
    } else {
        const double h = std::ldexp(1.0, -10);
        SimpleFunction g = compose_rasterized(f, map, h);
        rep.raster_cells = g.cells().size();
        SearchSpec s = ball;
        s.max_axis_coords = std::min<std::size_t>(s.max_axis_coords, 9);
        s.pairwise_radii = false;
        if (!ef.witness.center.empty()) {
            s.extra_centers.push_back(Wt * ef.witness.center);
            s.extra_radii.push_back(ef.witness.radius);
            rep.mapped_ratio = ratio_or_one(
                candidate_value(g, Phi, phi, Geometry::ball, Wt * ef.witness.center, ef.witness.radius), ef.value);
        }
        rep.norm_composed = orlicz_morrey_norm(g, Phi, phi, s).value;
        char buf[96];
        std::snprintf(buf, sizeof buf, "rasterized at h = 2^-10 (%zu cells)", rep.raster_cells);
        rep.note = buf;
    }
    rep.ratio = ratio_or_one(rep.norm_composed, rep.norm_f);
    rep.pass = std::abs(rep.ratio - 1.0) <= rep.tol && std::abs(rep.mapped_ratio - 1.0) <= rep.tol;
    return rep;
}

double diag_empirical_opnorm(const std::vector<double>& d, const YoungFunction& Phi, const GrowthFunction& phi,
                             std::vector<double>* ratios) {
    const std::size_t n = d.size();
    if (n == 0) throw UsageError("empty diagonal");
    for (double v : d)
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("diagonal entries must be positive and finite");
    auto norm = [&](std::vector<double> sides) {
        std::sort(sides.begin(), sides.end());
        return box_indicator_norm(BoxSpec::make(sides, n), Phi, phi).value;
    };
    std::vector<double> sides(n, 1.0);
    double cur = norm(sides);
    double best = 0.0;
    if (ratios) ratios->clear();
    for (std::size_t k = 0; k < n; ++k) {
        // g(D_k x) is the indicator of the box with sides s_i / d_{(i+k) mod n}
        for (std::size_t i = 0; i < n; ++i) sides[i] /= d[(i + k) % n];
        double next = norm(sides);
        double r = next / cur;
        if (ratios) ratios->push_back(r);
        best = std::max(best, r);
        cur = next;
    }
    return best;
}

DiagonalReport diag_opnorm_lower(const GrowthFunction& phi, const std::vector<double>& d, std::optional<double> empirical,
                                 const ClassCertificate* cert) {
    if (d.empty()) throw UsageError("empty diagonal");
    DiagonalReport rep;
    rep.d = d;
    for (double v : d) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("diagonal entries must be positive and finite");
        rep.product *= v;
    }
    const double inv_n = 1.0 / static_cast<double>(d.size());
    rep.lower_bound = std::pow(phi(rep.product), inv_n);
    rep.empirical = empirical;
    if (empirical) {
        if (!cert || !cert->C2 || !cert->C3) throw PreconditionError("the diagonal lower bound needs certified C2 and C3");
        rep.slack = std::pow(*cert->C2 * *cert->C3, inv_n);
        rep.checked = true;
        rep.pass = rep.lower_bound <= *empirical * rep.slack * (1.0 + 1e-9);
    }
    return rep;
}

double default_necessity_band(const ClassCertificate& cert) {
    if (!cert.C1 || !cert.C2 || !cert.C3) throw PreconditionError("default band needs certified C1, C2, C3");
    return 10.0 * *cert.C1 * *cert.C2 * *cert.C3;
}

NecessityReport necessity_certificate(const std::vector<DiffeoSample>& samples, const GrowthFunction& phi, double band) {
    if (!(band >= 1.0) || !std::isfinite(band)) throw UsageError("band must be finite and >= 1");
    NecessityReport rep;
    rep.band = band;
    rep.samples = parallel_map<NecessitySample>(samples.size(), [&](std::size_t i) {
        NecessitySample s;
        s.index = i;
        s.x0 = samples[i].x0;
        try {
            SvdResult svd = svd_small(samples[i].jacobian);
            s.sigma = svd.sigma;
            s.product = 1.0;
            for (double v : svd.sigma) s.product *= v;
            s.v = phi(s.product);
            s.phi_alpha1 = phi(svd.sigma.front());
            s.in_band = s.v >= 1.0 / band && s.v <= band;
            s.remark_holds = s.phi_alpha1 <= band;
        } catch (const RankDeficiencyError& e) {
            s.error = e.what();
        }
        return s;
    });
    for (const auto& s : rep.samples)
        if (!s.error.empty() || !s.in_band) ++rep.failures;
    rep.pass = rep.failures == 0;
    return rep;
}

RescalingReport rescaling_bound_check(const SimpleFunction& f, const std::vector<DiffeoSample>& samples,
                                      const YoungFunction& Phi, const GrowthFunction& phi, double p,
                                      const ClassCertificate& cert, double multiple, double cap,
                                      const SearchSpec& search) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw UsageError("rescaling check needs finite p >= 1");
    if (!(multiple > 0.0)) throw UsageError("multiple must be positive");
    if (!cert.C1 || !cert.C2) throw PreconditionError("rescaling check needs certified C1 and C2");
    RescalingReport rep;
    rep.p = p;
    rep.multiple = multiple;
    const double nd = static_cast<double>(f.dim());
    std::vector<double> yc, gc;
    for (double t : log_grid(1.0, 1e6, 241)) yc.push_back(Phi(t) / std::pow(t, p));
    for (double r : log_grid(1e-6, 1e6, 241)) gc.push_back(std::pow(r, -nd / p) / phi(r));
    rep.young_constant = *std::max_element(yc.begin(), yc.end());
    rep.growth_constant = *std::max_element(gc.begin(), gc.end());
    if (!grid_sup_bounded(yc, false, cap)) throw PreconditionError("Phi(t) <= C t^p for t >= 1 is not certified on the grid");
    if (!grid_sup_bounded(gc, true, cap)) throw PreconditionError("r^{-n/p} <= C phi(r) is not certified on the grid");

    rep.norm_f = cube_norm(f, Phi, phi, search).value;
    const auto r_grid = log_grid(1e-6, 1e6, 241);
    rep.items = parallel_map<RescalingItem>(samples.size(), [&](std::size_t i) {
        RescalingItem it;
        it.index = i;
        const Matrix& J = samples[i].jacobian;
        if (J.n() != f.dim()) {
            it.error = "jacobian dimension does not match f";
            return it;
        }
        AffineMap map = AffineMap::linear(J);
        if (!map.is_box_preserving()) {
            it.error = "jacobian is not a scaled signed permutation";
            return it;
        }
        try {
            it.bound = multiple * sufficiency_constant(map, phi, cert);
        } catch (const RankDeficiencyError& e) {
            it.error = e.what();
            return it;
        }
        double composed = cube_norm(compose(f, map), Phi, phi, search).value;
        it.ratio = rep.norm_f > 0.0 ? composed / rep.norm_f : 0.0;
        it.pass = it.ratio <= it.bound * (1.0 + 1e-9);
        bool scalar = J(0, 0) > 0.0;
        for (std::size_t k = 0; k < J.n() && scalar; ++k) scalar = J(k, k) == J(0, 0);
        if (scalar && rep.norm_f > 0.0) {
            it.dilation = dilation_opnorm(phi, J(0, 0), r_grid);
            it.pass = it.pass && it.ratio >= it.dilation->lower * (1.0 - 1e-6) &&
                      it.ratio <= it.dilation->upper * (1.0 + 1e-6);
        }
        return it;
    });
    rep.pass = true;
    for (const auto& it : rep.items) {
        if (!it.error.empty()) continue;
        rep.max_ratio = std::max(rep.max_ratio, it.ratio);
        rep.pass = rep.pass && it.pass;
    }
    return rep;
}

TransferReport indicator_transfer_check(const AffineMap& psi, const std::vector<BoxRegion>& regions,
                                        const YoungFunction& Phi, const GrowthFunction& phi, const ClassCertificate& cert,
                                        const SearchSpec& search) {
    TransferReport rep;
    rep.K = measure_dilation_constant(psi);
    rep.bound = sufficiency_constant(psi, phi, cert);
    rep.items = parallel_map<TransferItem>(regions.size(), [&](std::size_t i) {
        TransferItem it;
        it.index = i;
        const BoxRegion& A = regions[i];
        if (A.n != psi.dim()) throw UsageError("region dimension does not match the map");
        if (!(A.measure() > 0.0)) {
            it.skipped = true;
            it.note = "empty region skipped";
            return it;
        }
        std::vector<Cell> cells;
        for (const Box& b : A.boxes)
            if (!b.is_empty()) cells.push_back({b, 1.0});
        SimpleFunction chi(A.n, std::move(cells));
        it.norm_region = cube_norm(chi, Phi, phi, search).value;
        it.norm_preimage = cube_norm(compose(chi, psi), Phi, phi, search).value;
        if (!(it.norm_region > 0.0)) {
            it.skipped = true;
            it.note = "zero-norm region skipped";
            return it;
        }
        it.ratio = it.norm_preimage / it.norm_region;
        return it;
    });
    for (const auto& it : rep.items)
        if (!it.skipped) rep.max_ratio = std::max(rep.max_ratio, it.ratio);
    rep.pass = rep.max_ratio <= rep.bound * (1.0 + 1e-9);
    return rep;
}

} // namespace orlicz
