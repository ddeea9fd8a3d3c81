#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "krigmean/errors.hpp"
#include "krigmean/kriging.hpp"
#include "krigmean/series.hpp"

#include "json.hpp"

namespace krigmean {

/// Why a confidence interval could not be formed.
enum class CiFlaw {
    none,
    negative_variance,  ///< estimation variance came out below zero
    negative_sigma2,    ///< weighted variance negative (negative weights)
    both
};

inline const char* to_string(CiFlaw flaw) {
    switch (flaw) {
        case CiFlaw::none: return "none";
        case CiFlaw::negative_variance: return "negative_variance";
        case CiFlaw::negative_sigma2: return "negative_sigma2";
        case CiFlaw::both: return "both";
    }
    return "?";
}

/// The weighted-mean estimate at one (t, j), with the constraint value,
/// the estimation variance and the 95% confidence interval. A negative
/// variance or weighted variance invalidates the interval but not the
/// estimate itself; nothing is clamped.
struct MeanEstimate {
    double m_hat = 0.0;        ///< sum_i w_i v_i (quote units)
    double sigma2_hat = 0.0;   ///< sum_i w_i v_i^2 - m_hat^2
    double variance = 0.0;     ///< -sigma2_hat (sum_i w_i rho_ij - mu)
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool ci_valid = false;
    CiFlaw ci_flaw = CiFlaw::none;
    double constraint_g = 0.0;  ///< sum_i w_i rho_ij + mu
    std::int64_t t = 0;
    std::int64_t j = 0;
};

/// 95% normal quantile, fixed; the confidence level is not configurable.
inline constexpr double ci_quantile = 1.96;

/// Left side of the root condition: g = sum_i w_i rho_ij + mu.
/// `target_rho` is the first n entries of the system's target column.
inline double constraint_value(const KrigingSolution& sol,
                               std::span<const double> target_rho) {
    double s = 0.0;
    for (std::size_t i = 0; i < sol.weights.size(); ++i)
        s += sol.weights[i] * target_rho[i];
    return s + sol.mu;
}

/// Mean squared error of mean estimation: -sigma2 (sum_i w_i rho_ij - mu).
/// Can be negative away from the constraint root; the caller decides
/// what to accept.
inline double estimation_variance(const KrigingSolution& sol,
                                  std::span<const double> target_rho,
                                  double sigma2) {
    double s = 0.0;
    for (std::size_t i = 0; i < sol.weights.size(); ++i)
        s += sol.weights[i] * target_rho[i];
    return -sigma2 * (s - sol.mu);
}

inline MeanEstimate mean_estimate(const KrigingSolution& sol,
                                  const TimeSeries& ts,
                                  std::span<const double> target_rho) {
    if (sol.weights.size() != ts.n())
        throw NumericError("weight count " +
                           std::to_string(sol.weights.size()) +
                           " does not match series length " +
                           std::to_string(ts.n()));
    MeanEstimate est;
    est.t = sol.t;
    est.j = sol.j;

    double wv = 0.0, wv2 = 0.0;
    for (std::size_t i = 0; i < ts.n(); ++i) {
        wv += sol.weights[i] * ts[i];
        wv2 += sol.weights[i] * ts[i] * ts[i];
    }
    est.m_hat = wv;
    est.sigma2_hat = wv2 - wv * wv;
    est.variance = estimation_variance(sol, target_rho, est.sigma2_hat);
    est.constraint_g = constraint_value(sol, target_rho);

    const bool var_ok = est.variance >= 0.0;
    const bool s2_ok = est.sigma2_hat >= 0.0;
    est.ci_valid = var_ok && s2_ok;
    if (est.ci_valid) {
        const double half = ci_quantile * std::sqrt(est.variance);
        est.ci_low = est.m_hat - half;
        est.ci_high = est.m_hat + half;
        est.ci_flaw = CiFlaw::none;
    } else {
        est.ci_low = est.m_hat;
        est.ci_high = est.m_hat;
        est.ci_flaw = !var_ok && !s2_ok ? CiFlaw::both
                      : !var_ok         ? CiFlaw::negative_variance
                                        : CiFlaw::negative_sigma2;
    }
    return est;
}

inline void to_json(nlohmann::json& out, const MeanEstimate& est) {
    out = nlohmann::json{{"m_hat", est.m_hat},
                         {"sigma2_hat", est.sigma2_hat},
                         {"variance", est.variance},
                         {"ci_low", est.ci_low},
                         {"ci_high", est.ci_high},
                         {"ci_valid", est.ci_valid},
                         {"ci_flaw", to_string(est.ci_flaw)},
                         {"constraint_g", est.constraint_g},
                         {"t", est.t},
                         {"j", est.j}};
}

}  // namespace krigmean
