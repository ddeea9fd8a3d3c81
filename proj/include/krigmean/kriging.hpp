#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "krigmean/linalg.hpp"
#include "krigmean/model.hpp"

namespace krigmean {

/// Weights and Lagrange multiplier for one target index j; the weights
/// sum to 1 up to solver tolerance (last row of the system).
struct KrigingSolution {
    std::vector<double> weights;
    double mu;
    std::int64_t j;
    std::int64_t t;
};

/// Factored kriging matrix for a fixed (n, t, theta); solves any number
/// of target columns without refactoring. Immutable once built.
class KrigingFactor {
public:
    KrigingFactor(std::size_t n, const CorrelationModel& model,
                  double pivot_tol = 1e-12)
        : lu_(build_matrix(n, model), pivot_tol), n_(n), t_(model.t) {}

    std::size_t n() const noexcept { return n_; }
    std::int64_t t() const noexcept { return t_; }

    KrigingSolution solve(std::span<const double> target,
                          std::int64_t j) const {
        std::vector<double> x = lu_.solve(target);
        const double mu = x.back();
        x.pop_back();
        return KrigingSolution{std::move(x), mu, j, t_};
    }

private:
    LuDecomposition lu_;
    std::size_t n_;
    std::int64_t t_;
};

/// One-shot solve of a bordered system by LU with partial pivoting.
/// `t` is carried into the solution as bookkeeping only.
inline KrigingSolution solve(const KrigingSystem& system,
                             double pivot_tol = 1e-12, std::int64_t t = 0) {
    LuDecomposition lu(system.matrix, pivot_tol);
    std::vector<double> x = lu.solve(system.target);
    const double mu = x.back();
    x.pop_back();
    return KrigingSolution{std::move(x), mu, system.j, t};
}

}  // namespace krigmean
