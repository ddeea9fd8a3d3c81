#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "krigmean/errors.hpp"

namespace krigmean {

/// Minimal dense row-major matrix; all systems here are (n+1) x (n+1)
/// with n at most a few hundred.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept {
        return data_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }

    std::vector<double> multiply(std::span<const double> x) const {
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// LU factorization with partial pivoting (Doolittle, row swaps).
/// Factors once, then solves any number of right-hand sides; immutable
/// after construction.
class LuDecomposition {
public:
    explicit LuDecomposition(Matrix a, double pivot_tol = 1e-12)
        : lu_(std::move(a)), perm_(lu_.rows()) {
        const std::size_t n = lu_.rows();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                const double mag = std::abs(lu_(i, k));
                if (mag > best) {
                    best = mag;
                    p = i;
                }
            }
            if (!(best >= pivot_tol)) throw SingularSystem(k, best);
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j)
                    std::swap(lu_(k, j), lu_(p, j));
                std::swap(perm_[k], perm_[p]);
            }
            const double pivot = lu_(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                const double factor = lu_(i, k) / pivot;
                lu_(i, k) = factor;
                for (std::size_t j = k + 1; j < n; ++j)
                    lu_(i, j) -= factor * lu_(k, j);
            }
        }
    }

    std::size_t size() const noexcept { return lu_.rows(); }

    std::vector<double> solve(std::span<const double> rhs) const {
        const std::size_t n = lu_.rows();
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
        // forward: L y = P b  (L has unit diagonal)
        for (std::size_t i = 1; i < n; ++i) {
            double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
            x[i] = s;
        }
        // backward: U x = y
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
            x[i] = s / lu_(i, i);
        }
        return x;
    }

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues come back ascending with matching eigenvector columns.
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;  ///< column k is the eigenvector of values[k]
};

inline SymmetricEigen jacobi_eigen(Matrix a, int max_sweeps = 64) {
    const std::size_t n = a.rows();
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    auto off_diagonal_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            scale = std::max(scale, std::abs(a(i, j)));
    const double tol = 1e-14 * (scale > 0.0 ? scale : 1.0) *
                       static_cast<double>(n);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm() <= tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= tol / static_cast<double>(n * n))
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    SymmetricEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);

    // sort ascending, reorder eigenvector columns to match
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return out.values[x] < out.values[y];
    });
    SymmetricEigen sorted;
    sorted.values.resize(n);
    sorted.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted.values[k] = out.values[order[k]];
        for (std::size_t i = 0; i < n; ++i)
            sorted.vectors(i, k) = v(i, order[k]);
    }
    return sorted;
}

}  // namespace krigmean
