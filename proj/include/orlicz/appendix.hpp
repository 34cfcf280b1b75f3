#ifndef ORLICZ_APPENDIX_HPP
#define ORLICZ_APPENDIX_HPP

#include <string>

#include "orlicz/domain.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

struct EmbeddingReport {
    std::size_t n = 0;
    double sup_norm = 0.0;
    double M = 0.0;  // Phi(t) <= M max(t^2, t^{2n})
    double C = 0.0;  // sqrt(M) |f|_inf^{(n-1)/n}
    double morrey_norm = 0.0;  // sup_B r^{n/4} (avg_B |f|^2)^{1/2}
    double orlicz_norm = 0.0;  // phi = r^{-1/4}, appendix Phi
    double rhs = 0.0;          // C morrey_norm^{1/n}
    double ratio = 0.0;        // orlicz_norm / rhs
    double worst_ball_ratio = 0.0;  // same inequality ball by ball over the candidate family
    std::string note;
    bool pass = false;
};

// PreconditionError unless |f|_inf < 2^{-n}.
EmbeddingReport appendix_a_embedding(const SimpleFunction& f, const SearchSpec& search = {});

struct AppendixSandwich {
    double lhs = 0.0;  // Phi^{-1}(1) inf phi |f|
    double mid = 0.0;  // |f|_inf
    double rhs = 0.0;  // Phi^{-1}(1) sup phi |f|
    double inf_phi = 0.0;
    double sup_phi = 0.0;
    double inverse_at_one = 0.0;
    double norm = 0.0;
    double rtol = 1e-6;
    bool pass = false;
};

// inf / sup of phi on 4001 log points over [1e-6, 1e6]. PreconditionError if
// phi looks unbounded there (in G0, or sup/inf above 1e6).
AppendixSandwich appendix_b_sandwich(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                   const SearchSpec& search = {}, double rtol = 1e-6);

} // namespace orlicz

#endif
