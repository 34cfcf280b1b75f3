#ifndef ORLICZ_YOUNG_HPP
#define ORLICZ_YOUNG_HPP

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace orlicz {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Bracket width target: hi - lo <= max(rel * hi, abs).
struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-300;
};

// One closed-form piece of a piecewise Young function. A piece is active on
// [from, from of the next piece).
//   polynomial:     sum_i coeffs[i] * t^i
//   monomial:       coeffs[0] * t^coeffs[1]
//   exp_reciprocal: coeffs[0] * exp(-coeffs[1] / t)
struct YoungPiece {
    enum class Form { polynomial, monomial, exp_reciprocal };

    double from = 0.0;
    Form form = Form::polynomial;
    std::vector<double> coeffs;

    double operator()(double t) const;
};

// A convex generator Phi: [0, inf) -> [0, inf]. Values are immutable after
// construction; copies share the evaluator.
class YoungFunction {
public:
    enum class Kind { power, piecewise, callable };

    static YoungFunction power(double q);
    static YoungFunction piecewise(std::vector<YoungPiece> pieces, std::string label = "piecewise");
    static YoungFunction callable(std::function<double(double)> fn, std::string label);

    // 2^{2n} exp(-1/t) on (0, 1/2], continued as 2^{2n} e^{-2} (2t)^{2n} on [1/2, inf).
    static YoungFunction appendix_exp(int n);

    // Phi(t) = 0 for t <= knee, t - knee afterwards.
    static YoungFunction flat_then_linear(double knee);

    [[nodiscard]] YoungFunction with_domain_cap(double cap) const;

    Kind kind() const { return kind_; }
    double exponent() const { return exponent_; }
    const std::vector<YoungPiece>& pieces() const { return pieces_; }
    std::optional<double> domain_cap() const { return cap_; }
    const std::string& label() const { return label_; }

    // Phi(t); +inf beyond the domain cap. Throws DomainError for t < 0 or NaN.
    double operator()(double t) const;

    // log Phi(t), -inf where Phi(t) = 0. Closed-form kinds avoid the underflow
    // of Phi itself (exp(-1/t) for small t).
    double log_eval(double t) const;

private:
    YoungFunction() = default;

    Kind kind_ = Kind::power;
    double exponent_ = 1.0;
    std::vector<YoungPiece> pieces_;
    std::shared_ptr<const std::function<double(double)>> fn_;
    std::optional<double> cap_;
    std::string label_;
};

double eval_young(const YoungFunction& phi, double t);

struct InverseResult {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    // Bracket growth ran past the representable range; value is reported as +inf.
    bool overflow = false;
};

// O'Neil inverse inf{t >= 0 : Phi(t) > u}, with Phi^{-1}(inf) = inf.
//
// The predicate Phi(t) > u is monotone in t, so the infimum is located by
// geometric bracket growth followed by bisection. At exit Phi(lo) <= u < Phi(hi)
// and the true infimum lies in [lo, hi]. On a flat segment of Phi the strict
// predicate pushes the answer to the right end of the segment.
InverseResult generalized_inverse(const YoungFunction& phi, double u, Tolerance tol = {});

// Same infimum with the threshold given as log u; the predicate is
// log Phi(t) > log u. Used where Phi(u) itself would underflow.
InverseResult generalized_inverse_log(const YoungFunction& phi, double log_u, Tolerance tol = {});

struct SandwichViolation {
    double u = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string side;  // "Phi(Phi^-1(u)) <= u" or "u <= Phi^-1(Phi(u))"
};

struct SandwichReport {
    std::size_t checked = 0;
    double rtol = 0.0;
    std::vector<SandwichViolation> violations;

    bool pass() const { return violations.empty(); }
};

// Checks Phi(Phi^{-1}(u)) <= u <= Phi^{-1}(Phi(u)) on every grid point, using the
// bracket endpoint that is least favourable to each side. Brackets are refined
// to adjacent doubles; the left inequality allows the change of Phi across
// that final one-ulp bracket.
SandwichReport verify_inverse_sandwich(const YoungFunction& phi, std::span<const double> u_grid,
                                       double rtol = 1e-9);

struct YoungCertificate {
    std::size_t grid_points = 0;
    bool zero_at_origin = false;
    bool monotone = false;
    bool convex = false;
    bool unbounded = false;
    double worst_convexity_defect = 0.0;
    double worst_convexity_at_s = 0.0;
    double worst_convexity_at_t = 0.0;
    double worst_monotone_drop = 0.0;

    bool pass() const { return zero_at_origin && monotone && convex && unbounded; }
};

// Grid check of the Young axioms. The grid must be nonempty, strictly
// increasing and start at 0.
YoungCertificate certify_young(const YoungFunction& phi, std::span<const double> grid,
                               double rel_tol = 1e-10, double abs_tol = 1e-12);

std::vector<double> linear_grid(double lo, double hi, std::size_t count);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

} // namespace orlicz

#endif
