#ifndef ORLICZ_LINALG_HPP
#define ORLICZ_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace orlicz {

// Dense square matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& d);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t n() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    std::vector<double> operator*(const std::vector<double>& x) const;
    double max_abs() const;
    double determinant() const;
    Matrix inverse() const;  // RankDeficiencyError if singular

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

double max_abs_diff(const Matrix& a, const Matrix& b);

struct SvdResult {
    Matrix U;
    Matrix V;
    std::vector<double> sigma;  // ascending, positive
    int sweeps = 0;
};

// A = U diag(sigma) V with U, V orthogonal, by one-sided Jacobi rotations.
// n <= 8; RankDeficiencyError when sigma_min < 1e-12 sigma_max.
SvdResult svd_small(const Matrix& A);

} // namespace orlicz

#endif
