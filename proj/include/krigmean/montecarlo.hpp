#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "krigmean/csv.hpp"
#include "krigmean/errors.hpp"
#include "krigmean/linalg.hpp"
#include "krigmean/pipeline.hpp"
#include "krigmean/series.hpp"

#include "json.hpp"

namespace krigmean {

enum class CorrKind {
    white_noise,
    gaussian_decay  ///< valid positive-definite correlation exp(-(h/a)^2)
};

struct SyntheticSpec {
    std::size_t n = 0;
    double mean = 0.0;
    double sigma2 = 1.0;
    CorrKind kind = CorrKind::white_noise;
    double a = 1.0;  ///< gaussian_decay range parameter
    std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t state = master ^ (index + 1) * 0xD1B54A32D192ED03ULL;
    return splitmix64(state);
}

/// Standard normal draws via Box-Muller on mt19937_64 uniforms; the
/// stdlib's normal_distribution is implementation-defined, this is not,
/// so frozen regression values survive a toolchain change.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr double pi = 3.141592653589793238462643383279502884;

    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace detail

/// Factored covariance of a SyntheticSpec; draw any number of series
/// without refactoring. The factorization is a symmetric eigensystem
/// with eigenvalues clamped at zero, which tolerates the numerically
/// semi-definite matrices the Gaussian correlation produces at larger
/// range parameters.
class SeriesSampler {
public:
    explicit SeriesSampler(const SyntheticSpec& spec) : spec_(spec) {
        if (spec.n < TimeSeries::min_length)
            throw TooShort(spec.n, TimeSeries::min_length);
        if (!(spec.sigma2 > 0.0))
            throw std::invalid_argument("sigma2 must be positive");
        if (spec.kind == CorrKind::white_noise) return;

        if (!(spec.a > 0.0))
            throw std::invalid_argument("gaussian_decay needs a > 0");
        const std::size_t n = spec.n;
        Matrix cov(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const double h =
                    static_cast<double>(i > k ? i - k : k - i) / spec.a;
                cov(i, k) = spec.sigma2 * std::exp(-h * h);
            }
        SymmetricEigen eig = jacobi_eigen(std::move(cov));
        const double lambda_max = eig.values.back();
        if (eig.values.front() < -1e-8 * std::max(lambda_max, 0.0))
            throw NotPositiveDefinite(
                "covariance has eigenvalue " +
                std::to_string(eig.values.front()));
        factor_ = Matrix(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const double scale =
                std::sqrt(std::max(eig.values[k], 0.0));
            for (std::size_t i = 0; i < n; ++i)
                factor_(i, k) = eig.vectors(i, k) * scale;
        }
    }

    TimeSeries sample(std::uint64_t seed) const {
        const std::size_t n = spec_.n;
        detail::NormalSampler normal(seed);
        std::vector<double> z(n);
        for (double& zi : z) zi = normal.next();

        std::vector<double> v(n, spec_.mean);
        if (spec_.kind == CorrKind::white_noise) {
            const double sd = std::sqrt(spec_.sigma2);
            for (std::size_t i = 0; i < n; ++i) v[i] += sd * z[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    s += factor_(i, k) * z[k];
                v[i] += s;
            }
        }
        return TimeSeries(std::move(v));
    }

private:
    SyntheticSpec spec_;
    Matrix factor_;
};

/// One draw with the spec's mean and covariance, reproducible from seed.
inline TimeSeries generate_series(const SyntheticSpec& spec) {
    return SeriesSampler(spec).sample(spec.seed);
}

/// Bias, RMSE and interval coverage of the full pipeline measured over
/// repeated synthetic draws.
struct CoverageReport {
    SyntheticSpec spec;
    int trials = 0;
    int accepted_trials = 0;   ///< scan found a root
    int no_root_trials = 0;
    int failed_trials = 0;     ///< pipeline error aborted the trial
    double bias = 0.0;         ///< mean(m_hat - true mean), accepted trials
    double rmse = 0.0;
    int ci_valid_trials = 0;
    double ci_coverage_fraction = 0.0;  ///< over valid-CI trials
    double baseline_bias = 0.0;  ///< plain average over all drawn series
    double baseline_rmse = 0.0;
};

inline void to_json(nlohmann::json& out, const CoverageReport& r) {
    out = nlohmann::json{
        {"n", r.spec.n},
        {"true_mean", r.spec.mean},
        {"sigma2", r.spec.sigma2},
        {"corr_model", r.spec.kind == CorrKind::white_noise
                           ? "white_noise"
                           : "gaussian_decay"},
        {"a", r.spec.a},
        {"seed", r.spec.seed},
        {"trials", r.trials},
        {"accepted_trials", r.accepted_trials},
        {"no_root_trials", r.no_root_trials},
        {"failed_trials", r.failed_trials},
        {"bias", r.bias},
        {"rmse", r.rmse},
        {"ci_valid_trials", r.ci_valid_trials},
        {"ci_coverage_fraction", r.ci_coverage_fraction},
        {"baseline_bias", r.baseline_bias},
        {"baseline_rmse", r.baseline_rmse}};
}

/// Runs the pipeline on `trials` fresh draws; per-trial seeds derive
/// deterministically from the master seed, so the report is a pure
/// function of (spec, trials, cfg). Pipeline errors abort only their
/// own trial. `per_trial_csv`, when non-empty, receives one row per
/// trial.
inline CoverageReport coverage_experiment(
    const SyntheticSpec& spec, int trials, const PipelineOptions& cfg,
    const std::string& per_trial_csv = "") {
    if (trials < 100)
        throw std::invalid_argument("coverage: need trials >= 100, got " +
                                    std::to_string(trials));
    const SeriesSampler sampler(spec);

    CoverageReport report;
    report.spec = spec;
    report.trials = trials;

    std::optional<csv::Writer> log;
    if (!per_trial_csv.empty()) {
        log.emplace(per_trial_csv);
        log->row({"trial", "seed", "outcome", "m_hat", "ci_low", "ci_high",
                  "ci_valid", "baseline_mean"});
    }

    double sum_err = 0.0, sum_err2 = 0.0;
    double base_sum_err = 0.0, base_sum_err2 = 0.0;
    int base_count = 0;
    int covered = 0;

    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed =
            detail::derive_seed(spec.seed, static_cast<std::uint64_t>(trial));
        std::string outcome;
        double m_hat = 0.0, ci_low = 0.0, ci_high = 0.0;
        bool ci_valid = false;
        double baseline = 0.0;
        try {
            const TimeSeries ts = sampler.sample(seed);
            for (double v : ts.values()) baseline += v;
            baseline /= static_cast<double>(ts.n());
            base_sum_err += baseline - spec.mean;
            base_sum_err2 +=
                (baseline - spec.mean) * (baseline - spec.mean);
            ++base_count;

            const PipelineResult run = run_pipeline(ts, cfg);
            if (run.scan.accepted) {
                const MeanEstimate& est = *run.scan.accepted;
                ++report.accepted_trials;
                const double err = est.m_hat - spec.mean;
                sum_err += err;
                sum_err2 += err * err;
                m_hat = est.m_hat;
                ci_low = est.ci_low;
                ci_high = est.ci_high;
                ci_valid = est.ci_valid;
                if (est.ci_valid) {
                    ++report.ci_valid_trials;
                    if (est.ci_low <= spec.mean && spec.mean <= est.ci_high)
                        ++covered;
                }
                outcome = "accepted";
            } else {
                ++report.no_root_trials;
                outcome = "no_root";
            }
        } catch (const Error&) {
            ++report.failed_trials;
            outcome = "failed";
        }
        if (log)
            log->row({std::to_string(trial), std::to_string(seed), outcome,
                      csv::format_double(m_hat), csv::format_double(ci_low),
                      csv::format_double(ci_high),
                      ci_valid ? "1" : "0",
                      csv::format_double(baseline)});
    }

    if (report.accepted_trials > 0) {
        const double k = static_cast<double>(report.accepted_trials);
        report.bias = sum_err / k;
        report.rmse = std::sqrt(sum_err2 / k);
    }
    if (report.ci_valid_trials > 0)
        report.ci_coverage_fraction =
            static_cast<double>(covered) /
            static_cast<double>(report.ci_valid_trials);
    if (base_count > 0) {
        report.baseline_bias = base_sum_err / base_count;
        report.baseline_rmse = std::sqrt(base_sum_err2 / base_count);
    }
    return report;
}

}  // namespace krigmean
