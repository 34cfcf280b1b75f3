#ifndef ORLICZ_NORMS_HPP
#define ORLICZ_NORMS_HPP

#include <string>
#include <vector>

#include "orlicz/domain.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

enum class Geometry { ball, cube };

const char* to_string(Geometry g);

struct Witness {
    Point center;
    double radius = 0.0;  // ball radius or cube half-side
    Geometry geometry = Geometry::ball;
};

struct NormEstimate {
    double value = 0.0;  // certified lower bound
    double lo = 0.0;
    double hi = kInfinity;
    Witness witness;
    std::string search_spec;
    bool converged = false;
    // hi is a true upper bound (single-region norms, zero function).
    bool upper_certified = false;
    std::string diagnostic;
};

struct SearchSpec {
    Geometry geometry = Geometry::ball;
    int j_min = -20;
    int j_max = 20;
    int refine_depth = 3;
    std::size_t max_axis_coords = 33;
    std::size_t max_centers = 4096;
    std::size_t max_radii = 512;
    std::size_t refine_top = 4;
    bool pairwise_radii = true;
    std::vector<Point> extra_centers;
    std::vector<double> extra_radii;

    std::string describe() const;
};

// Candidate (center, radius) family: every center is paired with every radius.
struct CandidateFamily {
    std::vector<Point> centers;
    std::vector<double> radii;
};

CandidateFamily candidate_family(const SimpleFunction& f, const SearchSpec& spec);

// Luxemburg norm over one ball or cube; value = lo with Phi-modular(lo) > 1 >= modular(hi).
NormEstimate luxemburg_norm(const SimpleFunction& f, const Region& ball_or_cube, const YoungFunction& Phi, double tol = 1e-10);
NormEstimate weak_luxemburg_norm(const SimpleFunction& f, const Region& ball_or_cube, const YoungFunction& Phi,
                                 double tol = 1e-10);

// Lower ends of the two brackets, straight from an occupancy.
double luxemburg_from_occupancy(const Occupancy& occ, const YoungFunction& Phi, double tol, double* hi_out = nullptr,
                                std::string* diagnostic = nullptr);
double weak_luxemburg_from_occupancy(const Occupancy& occ, const YoungFunction& Phi, double tol, double* hi_out = nullptr,
                                     std::string* diagnostic = nullptr);

// (1/phi(r)) ||f||_{Phi,B(a,r)} for balls, (1/phi(2r)) ||f||_{Phi,Q(a,r)} for cubes.
double candidate_value(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi, Geometry g,
                       const Point& center, double radius, bool weak = false, double tol = 1e-10);

NormEstimate orlicz_morrey_norm(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                const SearchSpec& search = {}, double tol = 1e-9);
NormEstimate weak_orlicz_morrey_norm(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                     const SearchSpec& search = {}, double tol = 1e-9);

struct WeakIdentityReport {
    double weak_norm = 0.0;  // sup over candidates of the weak local norm
    double formula = 0.0;    // sup_j w_j ||chi_{f >= w_j}||, same candidates
    double rel_gap = 0.0;
    std::vector<double> levels;
    std::vector<double> level_terms;  // w_j ||chi_{f >= w_j}|| per level
    Witness weak_witness;
    Witness formula_witness;
    std::size_t candidates = 0;
};

WeakIdentityReport weak_norm_identity(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                      const SearchSpec& search = {}, double tol = 1e-10);

struct ComparabilityReport {
    double ball_norm = 0.0;
    double cube_norm = 0.0;
    double ratio = 1.0;  // ball / cube; 1 when both vanish
    double lower = 0.0;
    double upper = 0.0;
    double dimensional_constant = 0.0;  // (2 sqrt n)^n
    bool within_dimensional_band = false;
    bool pass = false;
};

// Needs C1, C2 of phi; the band is [1/(k' C2 phi(sqrt(n)/2)), k C1] with
// k = 2^n / v_n and k' = v_n n^{n/2} / 2^n.
ComparabilityReport cube_ball_comparability(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi,
                                            const ClassCertificate& cert, const SearchSpec& search = {}, double tol = 1e-9);

struct LpEmbeddingReport {
    double p = 1.0;
    double C1 = 0.0;  // sup_{t >= 1} (Phi(t) / t^p)^{1/p}
    double C2 = 0.0;  // sup_r r^{-n/p} / phi(r)
    double lp_norm = 0.0;
    double morrey_norm = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Sup of ratios sampled on a 20-points-per-decade log grid is finite: at most
// cap, and not still growing at the last decade of the grid (the back end
// always, the front end when check_front).
bool grid_sup_bounded(const std::vector<double>& values, bool check_front, double cap);

LpEmbeddingReport lp_embedding_check(const SimpleFunction& f, double p, const YoungFunction& Phi, const GrowthFunction& phi,
                                     const SearchSpec& search = {}, double cap = 1e6);

} // namespace orlicz

#endif
