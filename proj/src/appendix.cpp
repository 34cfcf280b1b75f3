#include "orlicz/appendix.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/errors.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz {

EmbeddingReport appendix_a_embedding(const SimpleFunction& f, const SearchSpec& search) {
    const std::size_t n = f.dim();
    const double nd = static_cast<double>(n);
    EmbeddingReport rep;
    rep.n = n;
    rep.sup_norm = f.sup_norm();
    if (!(rep.sup_norm < std::ldexp(1.0, -static_cast<int>(n))))
        throw PreconditionError("appendix embedding needs |f|_inf < 2^-n");
    rep.note = "Phi third branch read as 2^{2n} e^{-2} (2t)^{2n} for t >= 1/2";
    rep.M = std::max(std::ldexp(1.0, 2 * static_cast<int>(n)), std::ldexp(1.0, 4 * static_cast<int>(n)) * std::exp(-2.0));
    rep.C = std::sqrt(rep.M) * std::pow(rep.sup_norm, (nd - 1.0) / nd);
    if (f.is_zero()) {
        rep.pass = true;
        return rep;
    }

    const YoungFunction Phi = YoungFunction::appendix_exp(static_cast<int>(n));
    const GrowthFunction phi = GrowthFunction::power(-0.25);
    const YoungFunction sq = YoungFunction::power(2.0);
    const GrowthFunction morrey = GrowthFunction::morrey(4.0, static_cast<int>(n));
    SearchSpec ball = search;
    ball.geometry = Geometry::ball;

    rep.morrey_norm = orlicz_morrey_norm(f, sq, morrey, ball).value;
    rep.orlicz_norm = orlicz_morrey_norm(f, Phi, phi, ball).value;
    rep.rhs = rep.C * std::pow(rep.morrey_norm, 1.0 / nd);
    rep.ratio = rep.rhs > 0.0 ? rep.orlicz_norm / rep.rhs : 0.0;

    CandidateFamily fam = candidate_family(f, ball);
    auto worst = parallel_map<double>(fam.centers.size(), [&](std::size_t i) {
        double w = 0.0;
        for (double r : fam.radii) {
            double left = candidate_value(f, Phi, phi, Geometry::ball, fam.centers[i], r);
            if (left == 0.0) continue;
            // exact L^2 average, no bisection involved
            Occupancy occ = occupancy(f, Ball{fam.centers[i], r});
            double m2 = 0.0;
            for (const auto& [v, mu] : occ.items) m2 += v * v * mu;
            m2 /= occ.volume;
            double right = rep.C * std::pow(std::pow(r, nd / 4.0) * std::sqrt(m2), 1.0 / nd);
            w = std::max(w, left / right);
        }
        return w;
    });
    for (double w : worst) rep.worst_ball_ratio = std::max(rep.worst_ball_ratio, w);
    rep.pass = rep.ratio <= 1.0 + 1e-9 && rep.worst_ball_ratio <= 1.0 + 1e-9;
    return rep;
}

AppendixSandwich appendix_b_sandwich(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                   const SearchSpec& search, double rtol) {
    const auto grid = log_grid(1e-6, 1e6, 4001);
    ClassCertificate cert = certify_class(phi, grid);
    if (cert.in_G0) throw PreconditionError("phi is unbounded on the grid (in G0)");
    AppendixSandwich rep;
    rep.rtol = rtol;
    rep.inf_phi = kInfinity;
    for (double r : grid) {
        double v = phi(r);
        rep.inf_phi = std::min(rep.inf_phi, v);
        rep.sup_phi = std::max(rep.sup_phi, v);
    }
    if (!(rep.sup_phi <= 1e6 * rep.inf_phi)) throw PreconditionError("phi is not certified bounded above and below on the grid");
    rep.inverse_at_one = generalized_inverse(Phi, 1.0, Tolerance{1e-13, 1e-300}).value;
    rep.mid = f.sup_norm();
    rep.norm = f.is_zero() ? 0.0 : orlicz_morrey_norm(f, Phi, phi, search).value;
    rep.lhs = rep.inverse_at_one * rep.inf_phi * rep.norm;
    rep.rhs = rep.inverse_at_one * rep.sup_phi * rep.norm;
    rep.pass = rep.lhs <= rep.mid * (1.0 + rtol) && rep.mid <= rep.rhs * (1.0 + rtol);
    return rep;
}

} // namespace orlicz
