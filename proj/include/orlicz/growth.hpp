#ifndef ORLICZ_GROWTH_HPP
#define ORLICZ_GROWTH_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/young.hpp"

namespace orlicz {

// scale * r^exponent on [from, next from).
struct PowerPiece {
    double from = 0.0;
    double scale = 1.0;
    double exponent = 0.0;
};

// phi: (0, inf) -> (0, inf).
class GrowthFunction {
public:
    enum class Kind { power, piecewise, callable };

    static GrowthFunction power(double exponent, double scale = 1.0);
    // r^{-n/p}
    static GrowthFunction morrey(double p, int n);
    static GrowthFunction constant(double c);
    static GrowthFunction piecewise(std::vector<PowerPiece> pieces, std::string label = "piecewise");
    static GrowthFunction callable(std::function<double(double)> fn, std::string label);

    // r^e (2 + sin log r)
    static GrowthFunction oscillating(double exponent);
    // r^e (1 + |log r|)
    static GrowthFunction log_power(double exponent);

    Kind kind() const { return kind_; }
    double exponent() const { return exponent_; }
    double scale() const { return scale_; }
    const std::vector<PowerPiece>& pieces() const { return pieces_; }
    const std::string& label() const { return label_; }

    // Throws DomainError for r <= 0, NaN, or a non-positive value.
    double operator()(double r) const;
    double log_eval(double r) const;

private:
    GrowthFunction() = default;

    Kind kind_ = Kind::power;
    double exponent_ = 0.0;
    double scale_ = 1.0;
    std::vector<PowerPiece> pieces_;
    std::shared_ptr<const std::function<double(double)>> fn_;
    std::string label_;
};

struct ClassOptions {
    double epsilon = 1e-3;  // G0 proxy: phi(min) >= 1/eps and phi(max) <= eps
    double cap = 1e6;       // constants above this count as failure
};

struct ClassCertificate {
    std::string grid_spec;
    std::size_t grid_points = 0;
    double grid_min = 0.0;
    double grid_max = 0.0;

    bool in_G0 = false;
    double phi_at_min = 0.0;
    double phi_at_max = 0.0;
    double epsilon = 0.0;

    // Empirical constants, clamped to >= 1. Empty when above cap.
    std::optional<double> C1;
    std::optional<double> C2;
    std::optional<double> C3;
    double C1_empirical = 0.0;
    double C2_empirical = 0.0;
    double C3_empirical = 0.0;
    double cap = 0.0;

    double phi_half = 0.0;
    std::optional<std::pair<double, double>> doubling_pair;

    bool almost_decreasing() const { return C1.has_value(); }
    bool in_G1dec() const { return C1.has_value() && C2.has_value(); }
    bool in_G2dec() const { return in_G0 && in_G1dec() && C3.has_value(); }
};

// grid: >= 2 points, strictly increasing, positive, spanning >= 6 decades.
ClassCertificate certify_class(const GrowthFunction& phi, std::span<const double> grid, ClassOptions opt = {});

// Default 40-point log grid on [1e-6, 1e6].
std::vector<double> default_class_grid();

// (1/C1, C2 phi(1/2)); PreconditionError when C1 or C2 is missing.
std::pair<double, double> doubling_constants(const ClassCertificate& cert);

enum class PsiDirection { almost_increasing, almost_decreasing, constant, neither };

const char* to_string(PsiDirection d);

struct PsiOptions {
    double cap = 1e6;
    // A direction also has to survive re-evaluation on a grid with twice the
    // log-span: its constant may grow by at most this factor, and log A may
    // grow by at most half (a power-law drift doubles it).
    double growth_factor = 10.0;
    bool extend = true;
};

struct PsiProfile {
    int k = 1;
    std::vector<double> C_grid;
    std::string r_grid_spec;
    PsiDirection direction = PsiDirection::neither;
    // max_{r<s} Psi(r)/Psi(s) and max_{r<s} Psi(s)/Psi(r), maximized over C.
    double A_inc = 0.0;
    double A_dec = 0.0;
    double A_inc_extended = 0.0;
    double A_dec_extended = 0.0;
    double empirical_constant = 0.0;
    std::string diagnostic;

    bool increasing() const { return direction == PsiDirection::almost_increasing || direction == PsiDirection::constant; }
    bool decreasing() const { return direction == PsiDirection::almost_decreasing || direction == PsiDirection::constant; }
};

// log Psi_k(C r) = -log phi(r) - log Phi^{-1}(C r^k)
double log_psi(const GrowthFunction& phi, const YoungFunction& Phi, int k, double C, double r);

PsiProfile psi_monotonicity(const GrowthFunction& phi, const YoungFunction& Phi, int k,
                            std::span<const double> C_grid, std::span<const double> r_grid, PsiOptions opt = {});

// Wide grid used when no r grid is given: 201 log points on [1e-25, 1e25].
std::vector<double> default_psi_grid();
std::vector<double> default_psi_C_grid();

std::string describe_grid(std::span<const double> grid);

} // namespace orlicz

#endif
