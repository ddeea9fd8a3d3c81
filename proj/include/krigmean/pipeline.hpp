#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "krigmean/empirical.hpp"
#include "krigmean/errors.hpp"
#include "krigmean/fit.hpp"
#include "krigmean/scan.hpp"
#include "krigmean/series.hpp"

namespace krigmean {

/// How the two experimental correlograms feed the one-parameter fit.
enum class FitPooling {
    pooled,    ///< one point set holding both correlograms (default)
    averaged,  ///< average the two values at each lag
    c1_only,
    c2_only
};

inline const char* to_string(FitPooling mode) {
    switch (mode) {
        case FitPooling::pooled: return "pooled";
        case FitPooling::averaged: return "averaged";
        case FitPooling::c1_only: return "c1";
        case FitPooling::c2_only: return "c2";
    }
    return "?";
}

struct PipelineOptions {
    FitPooling pooling = FitPooling::pooled;
    FitOptions fit;
    ScanConfig scan;  ///< j_max = 0 means "use n + 3 * s_max"
};

/// Everything the pipeline computed on the way to the estimate.
struct PipelineResult {
    EmpiricalVariogram variogram;
    std::size_t d;
    double sigma2_hat;
    Correlogram c1;
    Correlogram c2;
    std::vector<FitPoint> fit_points;
    FitResult fit;
    ScanResult scan;
};

/// Collects the fit input from both correlograms, h = 1..cutoff each.
/// `averaged` uses the mean of the two values where both lags exist and
/// the single defined value beyond the shorter cutoff.
inline std::vector<FitPoint> assemble_fit_points(const Correlogram& c1,
                                                 const Correlogram& c2,
                                                 FitPooling mode) {
    std::vector<FitPoint> points;
    switch (mode) {
        case FitPooling::pooled:
            for (std::size_t h = 1; h <= c1.cutoff; ++h)
                points.push_back({h, c1.rho_abs[h]});
            for (std::size_t h = 1; h <= c2.cutoff; ++h)
                points.push_back({h, c2.rho_abs[h]});
            break;
        case FitPooling::averaged: {
            const std::size_t shared = std::min(c1.cutoff, c2.cutoff);
            for (std::size_t h = 1; h <= shared; ++h)
                points.push_back(
                    {h, 0.5 * (c1.rho_abs[h] + c2.rho_abs[h])});
            const Correlogram& longer =
                c1.cutoff >= c2.cutoff ? c1 : c2;
            for (std::size_t h = shared + 1; h <= longer.cutoff; ++h)
                points.push_back({h, longer.rho_abs[h]});
            break;
        }
        case FitPooling::c1_only:
            for (std::size_t h = 1; h <= c1.cutoff; ++h)
                points.push_back({h, c1.rho_abs[h]});
            break;
        case FitPooling::c2_only:
            for (std::size_t h = 1; h <= c2.cutoff; ++h)
                points.push_back({h, c2.rho_abs[h]});
            break;
    }
    return points;
}

/// Full chain: variogram -> cutoff -> correlograms -> theta fit -> scan.
inline PipelineResult run_pipeline(const TimeSeries& ts,
                                   const PipelineOptions& opts = {}) {
    EmpiricalVariogram vg = semivariogram(ts);
    const std::size_t d = monotone_cutoff(vg);
    const double sigma2_hat = vg.gamma[d];
    Correlogram c1 = correlogram_c1(vg, d);
    // C2 shares the variogram cutoff, clamped where its formula stops
    // being meaningful
    Correlogram c2 = correlogram_c2(ts, std::min(d, ts.n() - 2));
    std::vector<FitPoint> points =
        assemble_fit_points(c1, c2, opts.pooling);
    FitResult fit = lm_fit_theta(points, ts.n(), opts.fit);

    ScanConfig cfg = opts.scan;
    if (cfg.j_max == 0)
        cfg.j_max = static_cast<std::int64_t>(ts.n()) + 3 * cfg.s_max;
    ScanResult scanned = scan(ts, fit.theta, cfg);
    return PipelineResult{std::move(vg),     d,
                          sigma2_hat,        std::move(c1),
                          std::move(c2),     std::move(points),
                          fit,               std::move(scanned)};
}

}  // namespace krigmean
