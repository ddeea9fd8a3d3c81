#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "krigmean/csv.hpp"
#include "krigmean/errors.hpp"
#include "krigmean/estimator.hpp"
#include "krigmean/kriging.hpp"
#include "krigmean/model.hpp"
#include "krigmean/series.hpp"

namespace krigmean {

struct ScanConfig {
    std::int64_t s_max = 100;   ///< t runs over n+1 .. n+s_max
    std::int64_t j_max = 0;     ///< target index bound, >= n+1
    double epsilon = 1e-4;      ///< tolerance on |g|
    bool require_nonneg_variance = true;
    bool sign_change_fallback = false;
};

struct TraceRecord {
    std::int64_t t;
    std::int64_t j;
    double g;
    double m_hat;
    double variance;
    double ci_low;
    double ci_high;
    bool ci_valid;
};

/// Outcome of the (t, j) search. `accepted` holds the first pair, in
/// ascending (t, j) order, whose constraint value passed the tolerance;
/// the trace lists every pair visited up to and including that one.
struct ScanResult {
    std::optional<MeanEstimate> accepted;
    std::vector<TraceRecord> trace;
    double classic_value = std::numeric_limits<double>::quiet_NaN();

    // inputs echoed for plot emission
    TimeSeries series;
    double theta = 0.0;
    double epsilon = 0.0;
    std::int64_t j_max = 0;
};

namespace detail {

inline bool acceptable(const MeanEstimate& est, const ScanConfig& cfg) {
    if (!(std::abs(est.constraint_g) <= cfg.epsilon)) return false;
    if (cfg.require_nonneg_variance &&
        (est.variance < 0.0 || est.sigma2_hat < 0.0))
        return false;
    return true;
}

inline bool fallback_acceptable(const MeanEstimate& est,
                                const ScanConfig& cfg) {
    if (cfg.require_nonneg_variance &&
        (est.variance < 0.0 || est.sigma2_hat < 0.0))
        return false;
    return true;
}

}  // namespace detail

/// Searches t = n+1..n+s_max (outer, ascending) and j = n+1..j_max
/// (inner, ascending) for the first pair where |g(t, j)| <= epsilon,
/// optionally also requiring a non-negative variance so the printed
/// interval is real-valued. One matrix factorization is shared by all
/// j at a given t; only the target column changes.
///
/// Finding no root is a normal outcome, encoded as an empty `accepted`
/// with the full trace retained.
inline ScanResult scan(const TimeSeries& ts, double theta,
                       const ScanConfig& cfg) {
    const std::int64_t n = static_cast<std::int64_t>(ts.n());
    if (cfg.s_max < 1)
        throw std::invalid_argument("scan: s_max must be >= 1");
    if (cfg.j_max < n + 1)
        throw std::invalid_argument("scan: j_max must be >= n+1");
    if (!(cfg.epsilon >= 0.0))
        throw std::invalid_argument("scan: epsilon must be non-negative");

    ScanResult result{std::nullopt, {}, std::numeric_limits<double>::quiet_NaN(),
                      ts, theta, cfg.epsilon, cfg.j_max};
    result.trace.reserve(static_cast<std::size_t>(
        std::min<std::int64_t>(cfg.s_max * (cfg.j_max - n), 1 << 20)));

    for (std::int64_t t = n + 1; t <= n + cfg.s_max; ++t) {
        const CorrelationModel model(theta, t);
        std::optional<KrigingFactor> factor;
        try {
            factor.emplace(static_cast<std::size_t>(n), model);
        } catch (const SingularSystem& e) {
            throw SingularSystem(e.pivot_index(), e.pivot_magnitude(),
                                 " (t=" + std::to_string(t) + ")");
        }

        std::optional<MeanEstimate> prev;
        for (std::int64_t j = n + 1; j <= cfg.j_max; ++j) {
            const std::vector<double> target =
                build_target(static_cast<std::size_t>(n), j, model);
            const KrigingSolution sol = factor->solve(target, j);
            const std::span<const double> target_rho(target.data(),
                                                     ts.n());
            const MeanEstimate est = mean_estimate(sol, ts, target_rho);
            result.trace.push_back({t, j, est.constraint_g, est.m_hat,
                                    est.variance, est.ci_low, est.ci_high,
                                    est.ci_valid});

            if (detail::acceptable(est, cfg)) {
                result.accepted = est;
                result.classic_value = est.m_hat;
                return result;
            }
            // integer j cannot bisect; optionally take the smaller-|g|
            // endpoint of a sign change that straddled the tolerance
            if (cfg.sign_change_fallback && prev &&
                std::signbit(est.constraint_g) !=
                    std::signbit(prev->constraint_g)) {
                const MeanEstimate& closer =
                    std::abs(est.constraint_g) <=
                            std::abs(prev->constraint_g)
                        ? est
                        : *prev;
                if (detail::fallback_acceptable(closer, cfg)) {
                    result.accepted = closer;
                    result.classic_value = closer.m_hat;
                    return result;
                }
            }
            prev = est;
        }
    }
    return result;
}

/// Constraint profile g(j) over j = j_first..j_last at fixed t; the
/// diagnostic companion to `scan`, sharing its system construction.
inline std::vector<std::pair<std::int64_t, double>> g_profile(
    std::size_t n, double theta, std::int64_t t, std::int64_t j_first,
    std::int64_t j_last) {
    const CorrelationModel model(theta, t);
    const KrigingFactor factor(n, model);
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(static_cast<std::size_t>(
        std::max<std::int64_t>(0, j_last - j_first + 1)));
    for (std::int64_t j = j_first; j <= j_last; ++j) {
        const std::vector<double> target = build_target(n, j, model);
        const KrigingSolution sol = factor.solve(target, j);
        out.emplace_back(
            j, constraint_value(sol, std::span<const double>(target.data(),
                                                             n)));
    }
    return out;
}

/// Writes the four plot series behind a scan:
///   series.csv    index,value[,date]   the observed series
///   estimator.csv j,m_hat,ci_low,ci_high,g   per-j estimates at the
///                 accepted t (or the last t scanned when nothing was
///                 accepted)
///   classic.csv   j,value   the accepted estimate as a constant line
///   meta.csv      n,theta,t_final,j_final,epsilon   (0,0 when no pair
///                 was accepted)
inline void emit_plot_data(const ScanResult& result,
                           const std::string& out_dir) {
    if (result.trace.empty())
        throw std::invalid_argument("emit_plot_data: empty trace");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
    const auto path = [&](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    const auto fmt = csv::format_double;

    const TimeSeries& ts = result.series;
    {
        csv::Writer w(path("series.csv"));
        const bool dated = ts.has_labels();
        w.row(dated ? std::vector<std::string>{"index", "value", "date"}
                    : std::vector<std::string>{"index", "value"});
        for (std::size_t i = 0; i < ts.n(); ++i) {
            std::vector<std::string> cells{std::to_string(i + 1),
                                           fmt(ts[i])};
            if (dated) cells.push_back(ts.labels()[i]);
            w.row(cells);
        }
    }
    {
        const std::int64_t t_show = result.accepted
                                        ? result.accepted->t
                                        : result.trace.back().t;
        csv::Writer w(path("estimator.csv"));
        w.row({"j", "m_hat", "ci_low", "ci_high", "g"});
        for (const TraceRecord& rec : result.trace) {
            if (rec.t != t_show) continue;
            w.row({std::to_string(rec.j), fmt(rec.m_hat), fmt(rec.ci_low),
                   fmt(rec.ci_high), fmt(rec.g)});
        }
    }
    {
        csv::Writer w(path("classic.csv"));
        w.row({"j", "value"});
        const std::int64_t n = static_cast<std::int64_t>(ts.n());
        for (std::int64_t j = n + 1; j <= result.j_max; ++j)
            w.row({std::to_string(j), fmt(result.classic_value)});
    }
    {
        csv::Writer w(path("meta.csv"));
        w.row({"n", "theta", "t_final", "j_final", "epsilon"});
        w.row({std::to_string(ts.n()), fmt(result.theta),
               std::to_string(result.accepted ? result.accepted->t : 0),
               std::to_string(result.accepted ? result.accepted->j : 0),
               fmt(result.epsilon)});
    }
}

}  // namespace krigmean
