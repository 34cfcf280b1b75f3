#include "orlicz/young.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

void require_nonnegative(double t) {
    if (std::isnan(t) || t < 0.0) throw DomainError("Young function evaluated at negative or NaN argument");
}

// Smallest/largest probe used while growing the bracket.
constexpr double kTiny = 1e-300;
constexpr double kHuge = 1e300;

template <class Pred>
InverseResult bracket_inverse(Pred above, Tolerance tol) {
    InverseResult out;
    double lo = 0.0;
    double hi = 1.0;
    if (above(1.0)) {
        // shrink: 1/2, 1/4, 1/16, 1/256, ...
        double t = 0.5;
        hi = 1.0;
        while (t >= kTiny && above(t)) {
            hi = t;
            t = t * t;
        }
        lo = (t >= kTiny) ? t : 0.0;
    } else {
        // grow: 2, 4, 16, 256, ...
        lo = 1.0;
        double t = 2.0;
        while (true) {
            if (t > kHuge || std::isinf(t)) {
                out.value = kInfinity;
                out.lo = lo;
                out.hi = kInfinity;
                out.overflow = true;
                return out;
            }
            if (above(t)) {
                hi = t;
                break;
            }
            lo = t;
            t = t * t;
        }
    }
    while (hi - lo > std::max(tol.rel * hi, tol.abs)) {
        double mid = (lo > 0.0 && hi / lo > 2.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (above(mid)) hi = mid;
        else lo = mid;
    }
    out.lo = lo;
    out.hi = hi;
    out.value = 0.5 * (lo + hi);
    return out;
}

} // namespace

double YoungPiece::operator()(double t) const {
    switch (form) {
    case Form::polynomial: {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
        return acc;
    }
    case Form::monomial:
        if (t == 0.0) return coeffs[1] > 0.0 ? 0.0 : coeffs[0];
        return coeffs[0] * std::pow(t, coeffs[1]);
    case Form::exp_reciprocal:
        if (t == 0.0) return 0.0;
        return coeffs[0] * std::exp(-coeffs[1] / t);
    }
    return 0.0;
}

YoungFunction YoungFunction::power(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw UsageError("power Young function needs a finite exponent q > 0");
    YoungFunction f;
    f.kind_ = Kind::power;
    f.exponent_ = q;
    char buf[64];
    std::snprintf(buf, sizeof buf, "power:q=%.17g", q);
    f.label_ = buf;
    return f;
}

YoungFunction YoungFunction::piecewise(std::vector<YoungPiece> pieces, std::string label) {
    if (pieces.empty()) throw UsageError("piecewise Young function needs at least one piece");
    if (pieces.front().from != 0.0) throw UsageError("first piece must start at 0");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        if (i > 0 && !(p.from > pieces[i - 1].from)) throw UsageError("piece breakpoints must be strictly increasing");
        if (!std::isfinite(p.from)) throw UsageError("piece breakpoint must be finite");
        switch (p.form) {
        case YoungPiece::Form::polynomial:
            if (p.coeffs.empty()) throw UsageError("polynomial piece needs coefficients");
            break;
        case YoungPiece::Form::monomial:
        case YoungPiece::Form::exp_reciprocal:
            if (p.coeffs.size() != 2) throw UsageError("monomial/exp_reciprocal piece needs exactly 2 coefficients");
            break;
        }
    }
    YoungFunction f;
    f.kind_ = Kind::piecewise;
    f.pieces_ = std::move(pieces);
    f.label_ = std::move(label);
    return f;
}

YoungFunction YoungFunction::callable(std::function<double(double)> fn, std::string label) {
    if (!fn) throw UsageError("callable Young function is empty");
    YoungFunction f;
    f.kind_ = Kind::callable;
    f.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
    f.label_ = std::move(label);
    return f;
}

YoungFunction YoungFunction::appendix_exp(int n) {
    if (n < 1) throw UsageError("appendix-exp preset needs n >= 1");
    const double a = std::ldexp(1.0, 2 * n);
    // Second branch a e^{-2} (2t)^{2n} meets a exp(-1/t) at t = 1/2.
    const double b = a * std::exp(-2.0) * std::ldexp(1.0, 2 * n);
    std::vector<YoungPiece> pieces{
        {0.0, YoungPiece::Form::exp_reciprocal, {a, 1.0}},
        {0.5, YoungPiece::Form::monomial, {b, 2.0 * n}},
    };
    return piecewise(std::move(pieces), "appendix-exp:n=" + std::to_string(n));
}

YoungFunction YoungFunction::flat_then_linear(double knee) {
    if (!(knee >= 0.0) || !std::isfinite(knee)) throw UsageError("knee must be finite and >= 0");
    std::vector<YoungPiece> pieces{{0.0, YoungPiece::Form::polynomial, {0.0}}};
    if (knee > 0.0) pieces.push_back({knee, YoungPiece::Form::polynomial, {-knee, 1.0}});
    else pieces[0].coeffs = {0.0, 1.0};
    char buf[64];
    std::snprintf(buf, sizeof buf, "flat:knee=%.17g", knee);
    return piecewise(std::move(pieces), buf);
}

YoungFunction YoungFunction::with_domain_cap(double cap) const {
    if (!(cap > 0.0)) throw UsageError("domain cap must be positive");
    YoungFunction f = *this;
    f.cap_ = cap;
    return f;
}

double YoungFunction::operator()(double t) const {
    require_nonnegative(t);
    if (cap_ && t > *cap_) return kInfinity;
    if (std::isinf(t)) return t == 0.0 ? 0.0 : kInfinity;
    switch (kind_) {
    case Kind::power:
        return std::pow(t, exponent_);
    case Kind::piecewise: {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                   [](double x, const YoungPiece& p) { return x < p.from; });
        return (*std::prev(it))(t);
    }
    case Kind::callable:
        return (*fn_)(t);
    }
    return 0.0;
}

double YoungFunction::log_eval(double t) const {
    require_nonnegative(t);
    if (cap_ && t > *cap_) return kInfinity;
    if (std::isinf(t)) return kInfinity;
    if (t == 0.0) return std::log((*this)(0.0));
    switch (kind_) {
    case Kind::power:
        return exponent_ * std::log(t);
    case Kind::piecewise: {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                   [](double x, const YoungPiece& p) { return x < p.from; });
        const YoungPiece& p = *std::prev(it);
        switch (p.form) {
        case YoungPiece::Form::monomial:
            if (p.coeffs[0] > 0.0) return std::log(p.coeffs[0]) + p.coeffs[1] * std::log(t);
            break;
        case YoungPiece::Form::exp_reciprocal:
            if (p.coeffs[0] > 0.0) return std::log(p.coeffs[0]) - p.coeffs[1] / t;
            break;
        case YoungPiece::Form::polynomial:
            break;
        }
        return std::log(p(t));
    }
    case Kind::callable:
        return std::log((*fn_)(t));
    }
    return 0.0;
}

double eval_young(const YoungFunction& phi, double t) { return phi(t); }

InverseResult generalized_inverse(const YoungFunction& phi, double u, Tolerance tol) {
    if (std::isnan(u) || u < 0.0) throw DomainError("generalized inverse needs u >= 0");
    if (std::isinf(u)) return {kInfinity, kInfinity, kInfinity, false};
    return bracket_inverse([&](double t) { return phi(t) > u; }, tol);
}

InverseResult generalized_inverse_log(const YoungFunction& phi, double log_u, Tolerance tol) {
    if (std::isnan(log_u)) throw DomainError("generalized inverse needs a non-NaN log threshold");
    if (log_u == kInfinity) return {kInfinity, kInfinity, kInfinity, false};
    return bracket_inverse([&](double t) { return phi.log_eval(t) > log_u; }, tol);
}

SandwichReport verify_inverse_sandwich(const YoungFunction& phi, std::span<const double> u_grid, double rtol) {
    SandwichReport rep;
    rep.rtol = rtol;
    // bisect down to adjacent doubles
    const Tolerance inner{0.0, 0.0};
    for (double u : u_grid) {
        if (std::isnan(u) || u < 0.0 || std::isinf(u)) throw DomainError("sandwich grid must hold finite u >= 0");
        ++rep.checked;

        InverseResult inv = generalized_inverse(phi, u, inner);
        if (!inv.overflow) {
            double lhs = phi(inv.hi);
            // t is only resolved to one ulp, so allow the change of Phi across that step
            double resolution = std::isfinite(lhs) ? lhs - phi(inv.lo) : 0.0;
            if (!(lhs <= u * (1.0 + rtol) + resolution))
                rep.violations.push_back({u, lhs, u, "Phi(Phi^-1(u)) <= u"});
        }

        // Phi(u) can underflow for exponential pieces; work with log Phi(u).
        InverseResult back = generalized_inverse_log(phi, phi.log_eval(u), inner);
        double rhs = back.lo;
        if (!(u <= rhs * (1.0 + rtol)))
            rep.violations.push_back({u, u, rhs, "u <= Phi^-1(Phi(u))"});
    }
    return rep;
}

YoungCertificate certify_young(const YoungFunction& phi, std::span<const double> grid, double rel_tol, double abs_tol) {
    if (grid.empty()) throw UsageError("certify_young: grid is empty");
    if (grid.front() != 0.0) throw UsageError("certify_young: grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw UsageError("certify_young: grid must be strictly increasing");

    YoungCertificate c;
    c.grid_points = grid.size();
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = phi(grid[i]);

    c.zero_at_origin = v.front() == 0.0;

    c.monotone = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        double drop = v[i - 1] - v[i];
        if (drop > 0.0) {
            c.worst_monotone_drop = std::max(c.worst_monotone_drop, drop);
            if (drop > abs_tol + rel_tol * std::abs(v[i - 1])) c.monotone = false;
        }
    }

    c.convex = true;
    double worst_excess = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            double avg = 0.5 * (v[i] + v[j]);
            if (std::isinf(avg)) continue;
            double mid = phi(0.5 * (grid[i] + grid[j]));
            double defect = mid - avg;
            double excess = defect - (abs_tol + rel_tol * std::abs(avg));
            if (defect > c.worst_convexity_defect) {
                c.worst_convexity_defect = defect;
                c.worst_convexity_at_s = grid[i];
                c.worst_convexity_at_t = grid[j];
            }
            if (excess > worst_excess) {
                worst_excess = excess;
                c.convex = false;
            }
        }
    }

    c.unbounded = v.back() > 1.0;
    return c;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    g.back() = hi;
    return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi > 0.0)) throw UsageError("log_grid needs positive endpoints");
    if (count == 0) return {};
    if (count == 1) return {lo};
    std::vector<double> g(count);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace orlicz
