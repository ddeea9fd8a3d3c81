#pragma once

#include <cstddef>
#include <vector>

#include "krigmean/errors.hpp"
#include "krigmean/series.hpp"

namespace krigmean {

/// Experimental semivariogram gamma(h) for h = 0..n-1, gamma(0) = 0.
struct EmpiricalVariogram {
    std::vector<double> gamma;

    std::size_t size() const noexcept { return gamma.size(); }
};

enum class CorrelogramKind {
    c1,  ///< variogram route: |rho(h)| = 1 - gamma(h)/sigma2
    c2   ///< covariance route: |rho(h)| = C(h)/C(0)
};

/// Lag-indexed empirical correlation |rho(h)| for h = 0..cutoff.
/// For c1 the values lie in [0, 1] and end at exactly 0; for c2 they are
/// the raw covariance ratios and may be negative.
struct Correlogram {
    CorrelogramKind kind;
    std::vector<double> rho_abs;
    std::size_t cutoff;
    double sigma2_hat;  ///< normalizer: gamma(d) for c1, C(0) for c2
};

/// gamma(h) = (1/2) (1/(n-h)) sum_{j=1}^{n-h} (v_j - v_{j+h})^2
inline EmpiricalVariogram semivariogram(const TimeSeries& ts) {
    const std::size_t n = ts.n();
    const auto& v = ts.values();
    EmpiricalVariogram vg;
    vg.gamma.assign(n, 0.0);
    for (std::size_t h = 1; h < n; ++h) {
        double sum = 0.0;
        for (std::size_t j = 0; j + h < n; ++j) {
            const double diff = v[j] - v[j + h];
            sum += diff * diff;
        }
        vg.gamma[h] = 0.5 * sum / static_cast<double>(n - h);
    }
    return vg;
}

/// Largest lag d such that gamma is non-decreasing over 0..d (ties count
/// as non-decreasing); d = n-1 when no descent occurs.
inline std::size_t monotone_cutoff(const EmpiricalVariogram& vg) {
    if (vg.size() < 2 || vg.gamma[1] <= 0.0)
        throw DegenerateVariogram(
            "gamma(1) = 0: constant series, correlogram undefined");
    std::size_t d = 1;
    while (d + 1 < vg.size() && vg.gamma[d + 1] >= vg.gamma[d]) ++d;
    return d;
}

/// First experimental correlogram: |rho(h)| = 1 - gamma(h)/sigma2 with
/// sigma2 = gamma(d), h = 0..d. Non-increasing by construction of d.
inline Correlogram correlogram_c1(const EmpiricalVariogram& vg,
                                  std::size_t d) {
    if (d < 1 || d >= vg.size())
        throw LagOutOfRange(d, vg.size() - 1);
    const double sigma2 = vg.gamma[d];
    if (sigma2 <= 0.0)
        throw DegenerateVariogram("gamma(d) = 0: correlogram undefined");
    Correlogram c{CorrelogramKind::c1, {}, d, sigma2};
    c.rho_abs.reserve(d + 1);
    for (std::size_t h = 0; h <= d; ++h)
        c.rho_abs.push_back(1.0 - vg.gamma[h] / sigma2);
    c.rho_abs.front() = 1.0;  // gamma(0) = 0 exactly
    c.rho_abs.back() = 0.0;   // sigma2 = gamma(d) exactly
    return c;
}

/// C(h) = (1/(n-h)) sum v_j v_{j+h} - (1/(n-h)^2) (sum v_j)(sum v_{j+h}),
/// sums over j = 1..n-h. Lag n-1 is excluded: a single overlapping pair
/// makes the formula identically zero.
inline double covariance_hat(const TimeSeries& ts, std::size_t h) {
    const std::size_t n = ts.n();
    if (h > n - 2) throw LagOutOfRange(h, n - 2);
    const auto& v = ts.values();
    const std::size_t m = n - h;
    double cross = 0.0, head = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        cross += v[j] * v[j + h];
        head += v[j];
        tail += v[j + h];
    }
    const double dm = static_cast<double>(m);
    return cross / dm - head * tail / (dm * dm);
}

/// Second experimental correlogram: |rho(h)| = C(h)/C(0) for h = 0..d.
/// The cutoff is the variogram's d; the caller clamps it to n-2 first.
inline Correlogram correlogram_c2(const TimeSeries& ts, std::size_t d) {
    if (d < 1 || d > ts.n() - 2) throw LagOutOfRange(d, ts.n() - 2);
    const double c0 = covariance_hat(ts, 0);
    if (c0 <= 0.0)
        throw DegenerateVariogram("C(0) <= 0: constant series");
    Correlogram c{CorrelogramKind::c2, {}, d, c0};
    c.rho_abs.reserve(d + 1);
    c.rho_abs.push_back(1.0);  // C(0)/C(0)
    for (std::size_t h = 1; h <= d; ++h)
        c.rho_abs.push_back(covariance_hat(ts, h) / c0);
    return c;
}

}  // namespace krigmean
