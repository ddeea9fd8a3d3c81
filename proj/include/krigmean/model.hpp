#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "krigmean/errors.hpp"
#include "krigmean/linalg.hpp"

namespace krigmean {

/// The fitted decay exponent theta together with the time parameter t
/// that defines the negative correlation function.
struct CorrelationModel {
    double theta;  ///< positive, dimensionless
    std::int64_t t;  ///< sampling intervals, >= 2

    CorrelationModel(double theta_, std::int64_t t_) : theta(theta_), t(t_) {
        if (!(theta > 0.0))
            throw NumericError("decay exponent theta must be positive, got " +
                               std::to_string(theta));
        if (t < 2)
            throw NumericError("time parameter t must be >= 2, got " +
                               std::to_string(t));
    }
};

/// Negative correlation function:
///   rho(0) = +1,  rho(delta) = -t^(-theta (delta/t)^2) for delta > 0.
/// Values for delta > 0 lie in (-1, 0) and increase toward 0 as delta
/// grows; the jump at 0 is larger than 1.
inline double rho(std::int64_t delta, const CorrelationModel& model) {
    if (delta == 0) return 1.0;
    const double dt = static_cast<double>(delta) / static_cast<double>(model.t);
    return -std::exp(-model.theta * dt * dt *
                     std::log(static_cast<double>(model.t)));
}

/// The bordered (n+1) x (n+1) kriging system: correlations between the
/// n sample positions, a row/column of ones enforcing unit weight sum,
/// and the target column of correlations to position j.
struct KrigingSystem {
    Matrix matrix;               ///< symmetric, unit diagonal block, 0 corner
    std::vector<double> target;  ///< rho(|i-j|) for i = 1..n, then 1
    std::size_t n;
    std::int64_t j;
};

/// Correlation block plus border; depends on (n, t, theta) but not on j,
/// so a scan reuses one factorization across all target columns.
inline Matrix build_matrix(std::size_t n, const CorrelationModel& model) {
    Matrix a(n + 1, n + 1, 1.0);
    a(n, n) = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = 1.0;
        for (std::size_t k = i + 1; k < n; ++k) {
            const double r =
                rho(static_cast<std::int64_t>(k - i), model);
            a(i, k) = r;
            a(k, i) = r;
        }
    }
    return a;
}

/// Target column for index j: rho(|i-j|) over sample positions i = 1..n,
/// with the constraint entry 1 appended.
inline std::vector<double> build_target(std::size_t n, std::int64_t j,
                                        const CorrelationModel& model) {
    std::vector<double> b(n + 1, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t pos = static_cast<std::int64_t>(i) + 1;
        b[i] = rho(pos > j ? pos - j : j - pos, model);
    }
    return b;
}

inline KrigingSystem build_system(std::size_t n, std::int64_t j,
                                  const CorrelationModel& model) {
    if (j < static_cast<std::int64_t>(n) + 1)
        throw NumericError("target index j must exceed n");
    return KrigingSystem{build_matrix(n, model), build_target(n, j, model),
                         n, j};
}

}  // namespace krigmean
