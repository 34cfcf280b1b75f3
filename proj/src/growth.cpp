#include "orlicz/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "orlicz/errors.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz {

namespace {

void require_positive(double r) {
    if (!(r > 0.0)) throw DomainError("growth function evaluated at non-positive or NaN radius");
}

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

const PowerPiece& piece_at(const std::vector<PowerPiece>& pieces, double r) {
    auto it = std::upper_bound(pieces.begin(), pieces.end(), r, [](double x, const PowerPiece& p) { return x < p.from; });
    return *std::prev(it);
}

} // namespace

GrowthFunction GrowthFunction::power(double exponent, double scale) {
    if (!std::isfinite(exponent)) throw UsageError("growth exponent must be finite");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw UsageError("growth scale must be positive and finite");
    GrowthFunction g;
    g.kind_ = Kind::power;
    g.exponent_ = exponent;
    g.scale_ = scale;
    char buf[96];
    std::snprintf(buf, sizeof buf, "power:scale=%.17g,exponent=%.17g", scale, exponent);
    g.label_ = buf;
    return g;
}

GrowthFunction GrowthFunction::morrey(double p, int n) {
    if (!(p > 0.0) || n < 1) throw UsageError("Morrey growth function needs p > 0 and n >= 1");
    GrowthFunction g = power(-static_cast<double>(n) / p);
    char buf[96];
    std::snprintf(buf, sizeof buf, "power:p=%.17g,n=%d", p, n);
    g.label_ = buf;
    return g;
}

GrowthFunction GrowthFunction::constant(double c) {
    GrowthFunction g = power(0.0, c);
    g.label_ = fmt("constant:%.17g", c);
    return g;
}

GrowthFunction GrowthFunction::piecewise(std::vector<PowerPiece> pieces, std::string label) {
    if (pieces.empty()) throw UsageError("piecewise growth function needs at least one piece");
    if (pieces.front().from != 0.0) throw UsageError("first growth piece must start at 0");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (i > 0 && !(pieces[i].from > pieces[i - 1].from)) throw UsageError("growth breakpoints must be strictly increasing");
        if (!(pieces[i].scale > 0.0) || !std::isfinite(pieces[i].scale) || !std::isfinite(pieces[i].exponent))
            throw UsageError("growth piece needs positive finite scale and finite exponent");
    }
    GrowthFunction g;
    g.kind_ = Kind::piecewise;
    g.pieces_ = std::move(pieces);
    g.label_ = std::move(label);
    return g;
}

GrowthFunction GrowthFunction::callable(std::function<double(double)> fn, std::string label) {
    if (!fn) throw UsageError("callable growth function is empty");
    GrowthFunction g;
    g.kind_ = Kind::callable;
    g.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
    g.label_ = std::move(label);
    return g;
}

GrowthFunction GrowthFunction::oscillating(double e) {
    GrowthFunction g = callable([e](double r) { return std::pow(r, e) * (2.0 + std::sin(std::log(r))); },
                                fmt("oscillating:exponent=%.17g", e));
    g.exponent_ = e;
    return g;
}

GrowthFunction GrowthFunction::log_power(double e) {
    GrowthFunction g = callable([e](double r) { return std::pow(r, e) * (1.0 + std::abs(std::log(r))); },
                                fmt("log_power:exponent=%.17g", e));
    g.exponent_ = e;
    return g;
}

double GrowthFunction::operator()(double r) const {
    require_positive(r);
    double v = 0.0;
    switch (kind_) {
    case Kind::power:
        v = exponent_ == 0.0 ? scale_ : scale_ * std::pow(r, exponent_);
        break;
    case Kind::piecewise: {
        const PowerPiece& p = piece_at(pieces_, r);
        v = p.scale * std::pow(r, p.exponent);
        break;
    }
    case Kind::callable:
        v = (*fn_)(r);
        break;
    }
    if (!(v > 0.0)) throw DomainError(label_ + ": growth function must be positive, got " + fmt("%.17g", v) + " at r = " + fmt("%.17g", r));
    return v;
}

double GrowthFunction::log_eval(double r) const {
    require_positive(r);
    switch (kind_) {
    case Kind::power:
        return std::log(scale_) + exponent_ * std::log(r);
    case Kind::piecewise: {
        const PowerPiece& p = piece_at(pieces_, r);
        return std::log(p.scale) + p.exponent * std::log(r);
    }
    case Kind::callable:
        break;
    }
    return std::log((*this)(r));
}

std::string describe_grid(std::span<const double> grid) {
    if (grid.empty()) return "empty";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu points on [%.6g, %.6g]", grid.size(), grid.front(), grid.back());
    return buf;
}

ClassCertificate certify_class(const GrowthFunction& phi, std::span<const double> grid, ClassOptions opt) {
    if (grid.size() < 2) throw UsageError("certify_class: grid needs at least 2 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw UsageError("certify_class: grid points must be positive and finite");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw UsageError("certify_class: grid must be strictly increasing");
    }
    if (std::log10(grid.back() / grid.front()) < 6.0 - 1e-9) throw UsageError("certify_class: grid must span at least 6 decades");

    ClassCertificate c;
    c.grid_spec = "log grid, " + describe_grid(grid);
    c.grid_points = grid.size();
    c.grid_min = grid.front();
    c.grid_max = grid.back();
    c.epsilon = opt.epsilon;
    c.cap = opt.cap;

    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = phi(grid[i]);

    c.phi_at_min = v.front();
    c.phi_at_max = v.back();
    // The limits are proxied by the grid ends. Non-strict with rounding slack so
    // an exact power meeting the threshold at the endpoint counts.
    const double slack = 1e-12;
    c.in_G0 = c.phi_at_min >= (1.0 / opt.epsilon) * (1.0 - slack) && c.phi_at_max <= opt.epsilon * (1.0 + slack);

    // C1 = max_{r<s} phi(s)/phi(r)
    double run_min = v.front();
    double c1 = 0.0;
    for (std::size_t j = 1; j < v.size(); ++j) {
        c1 = std::max(c1, v[j] / run_min);
        run_min = std::min(run_min, v[j]);
    }
    c.C1_empirical = c1;

    // C2 = max_{r,s} phi(rs)/(phi(r)phi(s)); symmetric in (r, s).
    auto rows = parallel_map<double>(grid.size(), [&](std::size_t i) {
        double m = 0.0;
        for (std::size_t j = i; j < grid.size(); ++j) m = std::max(m, phi(grid[i] * grid[j]) / (v[i] * v[j]));
        return m;
    });
    c.C2_empirical = *std::max_element(rows.begin(), rows.end());

    double c3 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) c3 = std::max(c3, phi(1.0 / grid[i]) * v[i]);
    c.C3_empirical = c3;

    auto accept = [&](double x) -> std::optional<double> {
        if (!(x <= opt.cap)) return std::nullopt;
        return std::max(1.0, x);
    };
    c.C1 = accept(c.C1_empirical);
    c.C2 = accept(c.C2_empirical);
    c.C3 = accept(c.C3_empirical);

    c.phi_half = phi(0.5);
    if (c.C1 && c.C2) c.doubling_pair = std::make_pair(1.0 / *c.C1, *c.C2 * c.phi_half);
    return c;
}

std::vector<double> default_class_grid() { return log_grid(1e-6, 1e6, 40); }

std::pair<double, double> doubling_constants(const ClassCertificate& cert) {
    if (!cert.C1 || !cert.C2) throw PreconditionError("doubling constants need both C1 and C2 certified");
    return {1.0 / *cert.C1, *cert.C2 * cert.phi_half};
}

const char* to_string(PsiDirection d) {
    switch (d) {
    case PsiDirection::almost_increasing: return "almost_increasing";
    case PsiDirection::almost_decreasing: return "almost_decreasing";
    case PsiDirection::constant: return "constant";
    case PsiDirection::neither: return "neither";
    }
    return "neither";
}

double log_psi(const GrowthFunction& phi, const YoungFunction& Phi, int k, double C, double r) {
    double log_u = std::log(C) + k * std::log(r);
    InverseResult inv = generalized_inverse_log(Phi, log_u, Tolerance{1e-12, 1e-300});
    if (inv.overflow) return -kInfinity;
    if (!(inv.value > 0.0)) return kInfinity;  // Phi^{-1} = 0
    return -phi.log_eval(r) - std::log(inv.value);
}

namespace {

struct Spread {
    double log_inc = 0.0;  // max_{i<j} L_i - L_j
    double log_dec = 0.0;  // max_{i<j} L_j - L_i
    bool undefined = false;
};

Spread spread_of(const GrowthFunction& phi, const YoungFunction& Phi, int k, std::span<const double> C_grid,
                 std::span<const double> r_grid) {
    Spread s;
    for (double C : C_grid) {
        auto L = parallel_map<double>(r_grid.size(), [&](std::size_t i) { return log_psi(phi, Phi, k, C, r_grid[i]); });
        double run_max = -kInfinity, run_min = kInfinity;
        for (std::size_t j = 0; j < L.size(); ++j) {
            if (!std::isfinite(L[j])) {
                s.undefined = true;
                return s;
            }
            if (j > 0) {
                s.log_inc = std::max(s.log_inc, run_max - L[j]);
                s.log_dec = std::max(s.log_dec, L[j] - run_min);
            }
            run_max = std::max(run_max, L[j]);
            run_min = std::min(run_min, L[j]);
        }
    }
    return s;
}

} // namespace

PsiProfile psi_monotonicity(const GrowthFunction& phi, const YoungFunction& Phi, int k, std::span<const double> C_grid,
                            std::span<const double> r_grid, PsiOptions opt) {
    if (k < 1) throw UsageError("psi_monotonicity: k must be >= 1");
    if (C_grid.empty() || r_grid.size() < 2) throw UsageError("psi_monotonicity: need a nonempty C grid and at least 2 radii");
    for (double C : C_grid)
        if (!(C > 0.0) || !std::isfinite(C)) throw UsageError("psi_monotonicity: C grid must be positive");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0) || !std::isfinite(r_grid[i])) throw UsageError("psi_monotonicity: r grid must be positive");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw UsageError("psi_monotonicity: r grid must be strictly increasing");
    }

    PsiProfile p;
    p.k = k;
    p.C_grid.assign(C_grid.begin(), C_grid.end());
    p.r_grid_spec = "log grid, " + describe_grid(r_grid);

    Spread base = spread_of(phi, Phi, k, C_grid, r_grid);
    if (base.undefined) {
        p.direction = PsiDirection::neither;
        p.A_inc = p.A_dec = kInfinity;
        p.diagnostic = "Psi undefined on the grid: Phi^{-1}(C r^k) is 0 or infinite";
        return p;
    }
    p.A_inc = std::exp(base.log_inc);
    p.A_dec = std::exp(base.log_dec);
    p.A_inc_extended = p.A_inc;
    p.A_dec_extended = p.A_dec;

    if (opt.extend) {
        const double a = std::log(r_grid.front()), b = std::log(r_grid.back());
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        std::vector<double> wide = log_grid(std::exp(mid - 2.0 * half), std::exp(mid + 2.0 * half), 2 * r_grid.size() - 1);
        Spread ext = spread_of(phi, Phi, k, C_grid, wide);
        if (ext.undefined) {
            p.diagnostic = "Psi undefined on the extended grid; classification uses the base grid only";
        } else {
            p.A_inc_extended = std::exp(ext.log_inc);
            p.A_dec_extended = std::exp(ext.log_dec);
        }
    }

    // power-law drift doubles log A when the log-span doubles; bounded ratios keep it
    auto stable = [&](double A, double A_ext) {
        return A <= opt.cap && A_ext <= opt.cap && A_ext <= opt.growth_factor * A &&
               std::log(A_ext) <= 1.5 * std::log(A) + 1e-9;
    };
    const bool inc = stable(p.A_inc, p.A_inc_extended);
    const bool dec = stable(p.A_dec, p.A_dec_extended);
    if (inc && dec) {
        p.direction = PsiDirection::constant;
        p.empirical_constant = std::max(p.A_inc, p.A_dec);
    } else if (inc) {
        p.direction = PsiDirection::almost_increasing;
        p.empirical_constant = p.A_inc;
    } else if (dec) {
        p.direction = PsiDirection::almost_decreasing;
        p.empirical_constant = p.A_dec;
    } else {
        p.direction = PsiDirection::neither;
        p.empirical_constant = std::min(p.A_inc, p.A_dec);
    }
    return p;
}

std::vector<double> default_psi_grid() { return log_grid(1e-25, 1e25, 201); }

std::vector<double> default_psi_C_grid() { return {0.25, 1.0, 4.0}; }

} // namespace orlicz
