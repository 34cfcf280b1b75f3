#include "orlicz/indicators.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/errors.hpp"

namespace orlicz {

BoxSpec BoxSpec::make(std::vector<double> a, std::size_t n) {
    if (a.empty() || a.size() > n) throw UsageError("box spec needs 1 <= k <= n sides");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0) || !std::isfinite(a[i])) throw UsageError("box sides must be positive and finite");
        if (i > 0 && a[i] < a[i - 1]) throw UsageError("box sides must be sorted ascending");
    }
    return BoxSpec{std::move(a), n};
}

Box BoxSpec::box() const {
    std::vector<Interval> s(n, Interval{-kInfinity, kInfinity});
    for (std::size_t j = 0; j < a.size(); ++j) s[j] = {0.0, a[j]};
    return Box(std::move(s));
}

SimpleFunction BoxSpec::indicator() const { return SimpleFunction::indicator(box()); }

double box_objective(const BoxSpec& spec, const YoungFunction& Phi, const GrowthFunction& phi, double R) {
    if (!(R > 0.0)) throw DomainError("box objective needs R > 0");
    double log_e = 0.0;
    for (double aj : spec.a) log_e += std::log(R / std::min(aj, R));
    InverseResult inv = generalized_inverse_log(Phi, log_e, Tolerance{1e-13, 1e-300});
    if (inv.overflow) return 0.0;
    return std::exp(-phi.log_eval(R) - std::log(inv.value));
}

namespace {

struct Sample {
    double R;
    double v;
};

bool better(const Sample& a, const Sample& b) {
    double scale = std::max(a.v, b.v);
    if (a.v > b.v + 1e-12 * scale) return true;
    if (a.v < b.v - 1e-12 * scale) return false;
    return a.R < b.R;
}

std::string regime_of(const BoxSpec& spec, double R) {
    const auto& a = spec.a;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (std::abs(R - a[j]) <= 1e-12 * a[j]) return "R = a_" + std::to_string(j);
    if (R < a.front()) return "R <= a_0";
    if (R > a.back()) return "R >= a_" + std::to_string(a.size() - 1);
    for (std::size_t j = 0; j + 1 < a.size(); ++j)
        if (R > a[j] && R < a[j + 1]) return "a_" + std::to_string(j) + " <= R <= a_" + std::to_string(j + 1);
    return "interior";
}

} // namespace

IndicatorNorm box_indicator_norm(const BoxSpec& spec, const YoungFunction& Phi, const GrowthFunction& phi) {
    BoxSpec s = BoxSpec::make(spec.a, spec.n);
    IndicatorNorm out;
    out.k1_extension = s.k() == 1;

    std::vector<double> Rs;
    auto scan = [&](double lo, double hi) {
        const int m = 64;
        for (int i = 0; i < m; ++i) Rs.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (m - 1)));
    };
    const double wide = std::ldexp(1.0, 40);
    scan(s.a.front() / wide, s.a.front());
    for (std::size_t j = 0; j + 1 < s.k(); ++j)
        if (s.a[j + 1] > s.a[j]) scan(s.a[j], s.a[j + 1]);
    scan(s.a.back(), s.a.back() * wide);
    for (double aj : s.a) Rs.push_back(aj);
    std::sort(Rs.begin(), Rs.end());
    Rs.erase(std::unique(Rs.begin(), Rs.end()), Rs.end());

    std::vector<Sample> samples;
    samples.reserve(Rs.size());
    for (double R : Rs) samples.push_back({R, box_objective(s, Phi, phi, R)});
    std::size_t bi = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (better(samples[i], samples[bi])) bi = i;
    Sample best = samples[bi];
    std::size_t evals = samples.size();

    // golden section over the neighbouring scan interval, in log R
    double a = std::log(samples[bi > 0 ? bi - 1 : 0].R);
    double b = std::log(samples[std::min(bi + 1, samples.size() - 1)].R);
    if (b > a) {
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        Sample s1{std::exp(x1), box_objective(s, Phi, phi, std::exp(x1))};
        Sample s2{std::exp(x2), box_objective(s, Phi, phi, std::exp(x2))};
        evals += 2;
        for (const Sample& c : {s1, s2})
            if (better(c, best)) best = c;
        for (int it = 0; it < 40; ++it) {
            if (s1.v >= s2.v) {
                b = x2;
                x2 = x1;
                s2 = s1;
                x1 = b - g * (b - a);
                s1 = {std::exp(x1), box_objective(s, Phi, phi, std::exp(x1))};
                if (better(s1, best)) best = s1;
            } else {
                a = x1;
                x1 = x2;
                s1 = s2;
                x2 = a + g * (b - a);
                s2 = {std::exp(x2), box_objective(s, Phi, phi, std::exp(x2))};
                if (better(s2, best)) best = s2;
            }
            ++evals;
        }
    }
    out.value = best.v;
    out.argmax_R = best.R;
    out.regime = regime_of(s, best.R);
    out.evaluations = evals;
    return out;
}

namespace {

std::vector<double> merged_C_grid(const BoxSpec& s, const PsiGrids& grids) {
    std::vector<double> C = grids.C_grid;
    // regime i of the scan evaluates Psi_i at C = 1 / prod_{j<i} a_j
    double prod = 1.0;
    C.push_back(1.0);
    for (std::size_t i = 0; i < s.k(); ++i) {
        prod *= s.a[i];
        C.push_back(1.0 / prod);
    }
    std::sort(C.begin(), C.end());
    C.erase(std::unique(C.begin(), C.end()), C.end());
    return C;
}

double almost_decreasing_C1(const GrowthFunction& phi) {
    auto grid = default_class_grid();
    ClassCertificate cert = certify_class(phi, grid);
    if (!cert.C1) throw PreconditionError("phi is not almost decreasing on the certification grid");
    return *cert.C1;
}

} // namespace

AsymptoticEstimate box_norm_asymptotic(const BoxSpec& spec, const YoungFunction& Phi, const GrowthFunction& phi,
                                       std::size_t which_k, const PsiGrids& grids) {
    BoxSpec s = BoxSpec::make(spec.a, spec.n);
    const std::size_t n = s.n;
    if (s.k() != n) throw UsageError("box_norm_asymptotic needs k = n");
    if (n < 2) throw UsageError("box_norm_asymptotic needs n >= 2");
    if (which_k < 2 || which_k > n) throw UsageError("which_k must lie in [2, n]");

    const auto C = merged_C_grid(s, grids);
    std::vector<PsiProfile> psi(n + 1);
    for (std::size_t j = 1; j <= n; ++j) psi[j] = psi_monotonicity(phi, Phi, static_cast<int>(j), C, grids.r_grid);

    AsymptoticEstimate est;
    est.which_k = which_k;
    const std::size_t k = which_k;
    auto name = [](std::size_t j, const char* what) { return "Psi_" + std::to_string(j) + " " + what; };
    if (!psi[k - 1].increasing())
        throw PreconditionError(name(k - 1, "is not almost increasing (") + to_string(psi[k - 1].direction) + ")");
    est.hypotheses.push_back(name(k - 1, "almost increasing"));
    if (k < n) {
        if (!psi[k].decreasing())
            throw PreconditionError(name(k, "is not almost decreasing (") + to_string(psi[k].direction) + ")");
        est.hypotheses.push_back(name(k, "almost decreasing"));
    }

    const double ak = s.a[k - 1];
    double log_u = (static_cast<double>(k) - 1.0) * std::log(ak);
    for (std::size_t j = 0; j + 1 < k; ++j) log_u -= std::log(s.a[j]);
    InverseResult inv = generalized_inverse_log(Phi, log_u, Tolerance{1e-13, 1e-300});
    est.candidate = 1.0 / (phi(ak) * inv.value);
    est.direct = box_indicator_norm(s, Phi, phi).value;
    est.ratio = est.direct / est.candidate;

    // Left of a_{k-1}: regime 0 uses C1 of phi, regime i uses Psi_i almost increasing.
    // Right of it: regime i >= k uses Psi_i almost decreasing.
    double left = almost_decreasing_C1(phi);
    for (std::size_t i = 1; i <= k - 1; ++i) left *= psi[i].A_inc;
    double right = 1.0;
    for (std::size_t i = k; i <= n; ++i) right *= psi[i].A_dec;
    est.lower = 1.0;
    est.upper = std::max(left, right);
    const double slack = 1e-9;
    est.pass = est.ratio >= est.lower * (1.0 - slack) && est.ratio <= est.upper * (1.0 + slack);
    return est;
}

AsymptoticEstimate halfcylinder_norm(const BoxSpec& spec, const YoungFunction& Phi, const GrowthFunction& phi,
                                     const PsiGrids& grids) {
    BoxSpec s = BoxSpec::make(spec.a, spec.n);
    if (s.k() >= s.n) throw UsageError("halfcylinder_norm needs k < n");
    const std::size_t k = s.k();
    const auto C = merged_C_grid(s, grids);
    std::vector<PsiProfile> psi(k + 1);
    for (std::size_t j = 1; j <= k; ++j) psi[j] = psi_monotonicity(phi, Phi, static_cast<int>(j), C, grids.r_grid);
    if (!psi[1].decreasing())
        throw PreconditionError(std::string("Psi_1 is not almost decreasing (") + to_string(psi[1].direction) + ")");

    AsymptoticEstimate est;
    est.which_k = k;
    est.hypotheses.push_back("Psi_1 almost decreasing");
    est.candidate = 1.0 / phi(s.a.front());
    est.direct = box_indicator_norm(s, Phi, phi).value;
    InverseResult inv1 = generalized_inverse(Phi, 1.0, Tolerance{1e-13, 1e-300});
    est.ratio = est.direct / est.candidate * inv1.value;

    double right = 1.0;
    for (std::size_t i = 1; i <= k; ++i) right *= psi[i].A_dec;
    est.lower = 1.0;
    est.upper = std::max(almost_decreasing_C1(phi), right);
    const double slack = 1e-9;
    est.pass = est.ratio >= est.lower * (1.0 - slack) && est.ratio <= est.upper * (1.0 + slack);
    return est;
}

} // namespace orlicz
