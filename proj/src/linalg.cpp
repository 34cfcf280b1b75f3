#include "orlicz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orlicz/errors.hpp"

namespace orlicz {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()), a_() {
    a_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_) throw UsageError("matrix must be square");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw UsageError("matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (o.n_ != n_) throw UsageError("matrix dimension mismatch");
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

std::vector<double> Matrix::operator*(const std::vector<double>& x) const {
    if (x.size() != n_) throw UsageError("matrix-vector dimension mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::determinant() const {
    Matrix lu = *this;
    double det = 1.0;
    for (std::size_t c = 0; c < n_; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n_; ++r)
            if (std::abs(lu(r, c)) > std::abs(lu(p, c))) p = r;
        if (lu(p, c) == 0.0) return 0.0;
        if (p != c) {
            for (std::size_t j = 0; j < n_; ++j) std::swap(lu(p, j), lu(c, j));
            det = -det;
        }
        det *= lu(c, c);
        for (std::size_t r = c + 1; r < n_; ++r) {
            double f = lu(r, c) / lu(c, c);
            for (std::size_t j = c; j < n_; ++j) lu(r, j) -= f * lu(c, j);
        }
    }
    return det;
}

Matrix Matrix::inverse() const {
    Matrix a = *this;
    Matrix inv = identity(n_);
    for (std::size_t c = 0; c < n_; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n_; ++r)
            if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
        if (a(p, c) == 0.0) throw RankDeficiencyError("matrix is singular");
        if (p != c)
            for (std::size_t j = 0; j < n_; ++j) {
                std::swap(a(p, j), a(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        double d = a(c, c);
        for (std::size_t j = 0; j < n_; ++j) {
            a(c, j) /= d;
            inv(c, j) /= d;
        }
        for (std::size_t r = 0; r < n_; ++r) {
            if (r == c) continue;
            double f = a(r, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.n() != b.n()) throw UsageError("matrix dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t j = 0; j < a.n(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

SvdResult svd_small(const Matrix& A) {
    const std::size_t n = A.n();
    if (n == 0 || n > 8) throw UsageError("svd_small supports 1 <= n <= 8");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(A(i, j))) throw DomainError("matrix entries must be finite");

    // Columns of B = A J become orthogonal; J accumulates the rotations.
    Matrix B = A;
    Matrix J = Matrix::identity(n);
    int sweep = 0;
    const double eps = 1e-15;
    for (; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    alpha += B(i, p) * B(i, p);
                    beta += B(i, q) * B(i, q);
                    gamma += B(i, p) * B(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    double bp = B(i, p), bq = B(i, q);
                    B(i, p) = c * bp - s * bq;
                    B(i, q) = s * bp + c * bq;
                    double jp = J(i, p), jq = J(i, q);
                    J(i, p) = c * jp - s * jq;
                    J(i, q) = s * jp + c * jq;
                }
            }
        if (!rotated) break;
    }

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += B(i, j) * B(i, j);
        norms[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });

    const double smax = norms[order.back()];
    const double smin = norms[order.front()];
    if (!(smax > 0.0) || smin < 1e-12 * smax) throw RankDeficiencyError("matrix is numerically singular (sigma_min < 1e-12 sigma_max)");

    SvdResult out;
    out.U = Matrix(n);
    out.V = Matrix(n);
    out.sigma.resize(n);
    out.sweeps = sweep;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t j = order[k];
        out.sigma[k] = norms[j];
        for (std::size_t i = 0; i < n; ++i) {
            out.U(i, k) = B(i, j) / norms[j];
            out.V(k, i) = J(i, j);  // V = J^T with rows permuted
        }
    }
    return out;
}

} // namespace orlicz
