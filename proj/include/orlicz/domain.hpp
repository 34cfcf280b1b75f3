#ifndef ORLICZ_DOMAIN_HPP
#define ORLICZ_DOMAIN_HPP

#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "orlicz/young.hpp"

namespace orlicz {

using Point = std::vector<double>;

// [lo, hi]; either end may be infinite.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi > lo ? hi - lo : 0.0; }
};

struct Box {
    std::vector<Interval> sides;

    Box() = default;
    explicit Box(std::vector<Interval> s) : sides(std::move(s)) {}

    std::size_t dim() const { return sides.size(); }
    double volume() const;
    bool is_empty() const;
    bool is_bounded() const;
};

double box_overlap(const Box& a, const Box& b);

// Open ball |x - a| < r.
struct Ball {
    Point center;
    double radius = 1.0;

    std::size_t dim() const { return center.size(); }
    double volume() const;
};

// Closed cube max_i |x_i - a_i| <= r; side length 2r.
struct Cube {
    Point center;
    double half_side = 1.0;

    std::size_t dim() const { return center.size(); }
    double volume() const;
    double side_length() const { return 2.0 * half_side; }
};

struct BoxRegion {
    std::size_t n = 0;
    std::vector<Box> boxes;

    static BoxRegion whole_space(std::size_t n);
    double measure() const;
};

using Region = std::variant<Ball, Cube, BoxRegion>;

// |B(0,1)| in R^n.
double unit_ball_volume(std::size_t n);

// |B ∩ box|. Exact in n = 1, closed form in n = 2, nested adaptive
// Gauss-Kronrod with kink breakpoints in n >= 3 (relative error well below 1e-8
// of |B|). Invariant under signed permutations of the coordinates.
double ball_box_volume(const Ball& ball, const Box& box);
double cube_box_volume(const Cube& cube, const Box& box);
double intersection_volume(const Region& region, const Box& box);
double region_measure(const Region& region);

struct Cell {
    Box box;
    double value = 0.0;
};

// Nonnegative finite combination of indicators of pairwise disjoint boxes.
class SimpleFunction {
public:
    explicit SimpleFunction(std::size_t n, std::vector<Cell> cells = {}, bool validate_disjoint = true);

    static SimpleFunction zero(std::size_t n) { return SimpleFunction(n); }
    static SimpleFunction indicator(const Box& box, double value = 1.0);

    std::size_t dim() const { return n_; }
    const std::vector<Cell>& cells() const { return cells_; }
    bool is_zero() const;

    double sup_norm() const;
    // Exact L^p norm; +inf if a nonzero cell has infinite volume.
    double lp_norm(double p) const;
    [[nodiscard]] SimpleFunction scaled(double c) const;

    // Sorted distinct finite cell endpoints along one axis.
    std::vector<double> axis_coords(std::size_t axis) const;
    // Sorted distinct positive cell values.
    std::vector<double> levels() const;
    // Indicator of {f >= level} as a union of cells.
    [[nodiscard]] SimpleFunction level_set_indicator(double level) const;

private:
    std::size_t n_ = 0;
    std::vector<Cell> cells_;
};

// (value, |cell ∩ A|) pairs for cells meeting A with positive measure, sorted by value descending.
struct Occupancy {
    std::vector<std::pair<double, double>> items;
    double volume = 0.0;  // |A|
};

Occupancy occupancy(const SimpleFunction& f, const Region& region);

// m(A, f, t) = |{x in A : f(x) > t}|.
double distribution(const SimpleFunction& f, const Region& region, double t);

// (1/|B|) sum Phi(value/lambda) |cell ∩ B|, with 0 * inf = 0.
double modular(const SimpleFunction& f, const Region& ball_or_cube, double lambda, const YoungFunction& Phi);
double modular(const Occupancy& occ, double lambda, const YoungFunction& Phi);

// Approximate discretization: samples fn at the centers of a uniform grid of
// cubes of side h covering `domain` and merges equal runs along the last axis.
// Zero samples are dropped.
SimpleFunction rasterize(const std::function<double(const Point&)>& fn, const Box& domain, double h);

} // namespace orlicz

#endif
