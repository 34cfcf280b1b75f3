#ifndef ORLICZ_INDICATORS_HPP
#define ORLICZ_INDICATORS_HPP

#include <string>
#include <vector>

#include "orlicz/domain.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

// Box prod_{j<k} [0, a_j] x R^{n-k} with a sorted ascending.
struct BoxSpec {
    std::vector<double> a;
    std::size_t n = 0;

    std::size_t k() const { return a.size(); }

    // UsageError when unsorted, non-positive, or k outside [1, n].
    static BoxSpec make(std::vector<double> a, std::size_t n);

    SimpleFunction indicator() const;
    Box box() const;
};

struct IndicatorNorm {
    double value = 0.0;
    double argmax_R = 0.0;  // cube side length
    std::string regime;
    bool k1_extension = false;  // k = 1 lies outside the lemma's stated range
    std::size_t evaluations = 0;
};

// 1 / (phi(R) Phi^{-1}(prod_j R / min(a_j, R)))
double box_objective(const BoxSpec& spec, const YoungFunction& Phi, const GrowthFunction& phi, double R);

// sup over R of box_objective: critical radii, a 64-point log scan per regime
// and 40 golden-section steps around the best scan point.
IndicatorNorm box_indicator_norm(const BoxSpec& spec, const YoungFunction& Phi, const GrowthFunction& phi);

struct AsymptoticEstimate {
    std::size_t which_k = 0;
    double candidate = 0.0;  // closed-form comparator
    double direct = 0.0;     // box_indicator_norm
    double ratio = 0.0;      // direct / candidate (halfcylinder: direct phi(a_0) Phi^{-1}(1))
    double lower = 1.0;
    double upper = 0.0;  // chained almost-monotonicity constants
    std::vector<std::string> hypotheses;
    bool pass = false;
};

struct PsiGrids {
    std::vector<double> C_grid = default_psi_C_grid();
    std::vector<double> r_grid = default_psi_grid();
};

// k = n box; candidate (1/phi(a_{k-1})) Phi^{-1}(a_{k-1}^{k-1} / prod_{j<=k-2} a_j)^{-1}.
// which_k in [2, n-1] needs Psi_{k-1} almost increasing and Psi_k almost
// decreasing; which_k = n needs Psi_{n-1} almost increasing. PreconditionError
// otherwise.
AsymptoticEstimate box_norm_asymptotic(const BoxSpec& spec, const YoungFunction& Phi, const GrowthFunction& phi,
                                       std::size_t which_k, const PsiGrids& grids = {});

// k < n; comparator 1/phi(a_0). Needs Psi_1 almost decreasing.
AsymptoticEstimate halfcylinder_norm(const BoxSpec& spec, const YoungFunction& Phi, const GrowthFunction& phi,
                                     const PsiGrids& grids = {});

} // namespace orlicz

#endif
