#ifndef ORLICZ_COMPOSE_HPP
#define ORLICZ_COMPOSE_HPP

#include <optional>
#include <string>
#include <vector>

#include "orlicz/domain.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/linalg.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

// psi(x) = A x + b.
struct AffineMap {
    Matrix A;
    Point b;

    static AffineMap linear(Matrix A);
    static AffineMap diagonal(const std::vector<double>& d);
    // (P x)_i = sign_i x_{perm_i}; signs default to +1.
    static AffineMap signed_permutation(const std::vector<std::size_t>& perm, const std::vector<double>& signs = {});
    static AffineMap dilation(double c, std::size_t n);
    // Rotation by theta in the (i, j) coordinate plane.
    static AffineMap rotation(std::size_t n, std::size_t i, std::size_t j, double theta);

    std::size_t dim() const { return A.n(); }
    Point operator()(const Point& x) const;
    double determinant() const { return A.determinant(); }
    SvdResult svd() const { return svd_small(A); }
    // Largest singular value.
    double lipschitz() const;
    // Exactly one nonzero entry per row and per column.
    bool is_box_preserving() const;
    // psi^{-1}(box); UnsupportedMapError unless box preserving.
    Box preimage(const Box& box) const;
};

// K = 1/|det A|.
double measure_dilation_constant(const AffineMap& psi);

// f o psi with cells pre-imaged exactly; UnsupportedMapError unless box preserving.
SimpleFunction compose(const SimpleFunction& f, const AffineMap& psi);

// f o psi sampled on an h-grid over the pre-image of the support of f.
SimpleFunction compose_rasterized(const SimpleFunction& f, const AffineMap& psi, double h);

double evaluate(const SimpleFunction& f, const Point& x);

struct CubeNorm {
    double value = 0.0;
    bool closed_form = false;  // box indicator scan rather than the cube search
};

// Cube-geometry Orlicz-Morrey norm. Single-box indicators (sides finite or the
// whole line) go through box_indicator_norm, everything else through the search.
CubeNorm cube_norm(const SimpleFunction& f, const YoungFunction& Phi, const GrowthFunction& phi, const SearchSpec& search = {});

struct SufficiencyItem {
    double norm_f = 0.0;
    double norm_composed = 0.0;
    double ratio = 0.0;
    bool closed_form = false;
    bool pass = false;
};

struct SufficiencyReport {
    double K = 0.0;
    double L = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double bound = 0.0;  // K (C1 + C2 phi(L) L^n)
    double max_ratio = 0.0;
    std::vector<SufficiencyItem> items;
    bool pass = false;
};

double sufficiency_constant(const AffineMap& psi, const GrowthFunction& phi, const ClassCertificate& cert);

// Needs C1 and C2 in the certificate (PreconditionError otherwise). Norms use cube geometry.
SufficiencyReport sufficiency_bound(const AffineMap& psi, const YoungFunction& Phi, const GrowthFunction& phi,
                                    const ClassCertificate& cert, const std::vector<SimpleFunction>& tests,
                                    const SearchSpec& search = {});

struct DilationBounds {
    double c = 1.0;
    double lower = 0.0;  // grid inf of phi(c r)/phi(r)
    double upper = 0.0;  // grid sup
    double phi_c = 0.0;
};

// UsageError unless c > 0 and the grid spans at least 8 decades.
DilationBounds dilation_opnorm(const GrowthFunction& phi, double c, const std::vector<double>& r_grid);

struct OrthogonalReport {
    bool exact_path = false;
    double norm_f = 0.0;
    double norm_composed = 0.0;  // independent search on f o W
    double mapped_ratio = 1.0;   // same candidate family pushed through W
    double ratio = 1.0;          // norm_composed / norm_f
    double tol = 0.0;
    std::size_t raster_cells = 0;
    std::string note;
    bool pass = false;
};

// Ball geometry. Signed permutations take the exact path (default tol 1e-6),
// other orthogonal W are rasterized at h = 2^-10 (default tol 1e-2).
// PreconditionError if |W^T W - I|_max > 1e-10.
OrthogonalReport orthogonal_invariance_check(const Matrix& W, const SimpleFunction& f, const YoungFunction& Phi,
                                             const GrowthFunction& phi, std::optional<double> tol = std::nullopt,
                                             const SearchSpec& search = {});

struct DiagonalReport {
    std::vector<double> d;
    double product = 1.0;
    double lower_bound = 0.0;  // phi(prod d)^{1/n}
    std::optional<double> empirical;
    double slack = 1.0;  // (C2 C3)^{1/n}
    bool checked = false;
    bool pass = true;
};

// Max of |C_{D_k} g| / |g| along the cyclic chain g_k = g_{k-1}(D_k .),
// D_k = diag(d shifted by k), g_0 = chi_[0,1]^n. Cube norms of box indicators.
double diag_empirical_opnorm(const std::vector<double>& d, const YoungFunction& Phi, const GrowthFunction& phi,
                             std::vector<double>* ratios = nullptr);

// With an empirical estimate, needs C2, C3 in the certificate.
DiagonalReport diag_opnorm_lower(const GrowthFunction& phi, const std::vector<double>& d,
                                 std::optional<double> empirical = std::nullopt, const ClassCertificate* cert = nullptr);

struct DiffeoSample {
    Point x0;
    Matrix jacobian;
};

struct NecessitySample {
    std::size_t index = 0;
    Point x0;
    std::vector<double> sigma;
    double product = 0.0;
    double v = 0.0;           // phi(prod sigma)
    double phi_alpha1 = 0.0;  // phi(sigma_min)
    bool in_band = false;
    bool remark_holds = false;  // phi(alpha_1) <= band
    std::string error;
};

struct NecessityReport {
    double band = 0.0;
    std::vector<NecessitySample> samples;
    std::size_t failures = 0;
    bool pass = false;
};

// 10 C1 C2 C3; PreconditionError if a constant is missing.
double default_necessity_band(const ClassCertificate& cert);

NecessityReport necessity_certificate(const std::vector<DiffeoSample>& samples, const GrowthFunction& phi, double band);

struct RescalingItem {
    std::size_t index = 0;
    double ratio = 0.0;
    double bound = 0.0;  // multiple * K (C1 + C2 phi(L) L^n) for the jacobian
    std::optional<DilationBounds> dilation;  // scalar jacobians only
    bool pass = false;
    std::string error;
};

struct RescalingReport {
    double p = 1.0;
    double young_constant = 0.0;   // sup_{t >= 1} Phi(t) / t^p
    double growth_constant = 0.0;  // sup_r r^{-n/p} / phi(r)
    double norm_f = 0.0;
    double max_ratio = 0.0;
    double multiple = 1.0;
    std::vector<RescalingItem> items;
    bool pass = false;
};

// |f(J .)| / |f| per sample. PreconditionError when the hypothesis constants
// exceed cap or the certificate lacks C1/C2.
RescalingReport rescaling_bound_check(const SimpleFunction& f, const std::vector<DiffeoSample>& samples,
                                      const YoungFunction& Phi, const GrowthFunction& phi, double p,
                                      const ClassCertificate& cert, double multiple = 1.0, double cap = 1e6,
                                      const SearchSpec& search = {});

struct TransferItem {
    std::size_t index = 0;
    double norm_region = 0.0;
    double norm_preimage = 0.0;
    double ratio = 0.0;
    bool skipped = false;
    std::string note;
};

struct TransferReport {
    double K = 0.0;
    double bound = 0.0;  // sufficiency constant of psi
    double max_ratio = 0.0;
    std::vector<TransferItem> items;
    bool pass = false;
};

TransferReport indicator_transfer_check(const AffineMap& psi, const std::vector<BoxRegion>& regions,
                                        const YoungFunction& Phi, const GrowthFunction& phi, const ClassCertificate& cert,
                                        const SearchSpec& search = {});

} // namespace orlicz

#endif
