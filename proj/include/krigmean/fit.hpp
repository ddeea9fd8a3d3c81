#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "krigmean/errors.hpp"

namespace krigmean {

/// One correlogram sample (h, |rho(h)|) entering the fit.
struct FitPoint {
    std::size_t h;
    double r;
};

struct FitResult {
    double theta = 0.0;
    int iterations = 0;
    double final_sse = 0.0;
    bool converged = false;
};

struct FitOptions {
    double init_theta = 1.0;
    double tol = 1e-10;
    int max_iter = 200;
};

namespace detail {

/// Model value n^(-theta (h/n)^2) written as exp(-theta x), x = (h/n)^2 ln n.
inline double model_exponent(std::size_t h, std::size_t n) {
    const double hn = static_cast<double>(h) / static_cast<double>(n);
    return hn * hn * std::log(static_cast<double>(n));
}

}  // namespace detail

/// Fits the decay exponent theta of |rho(h)| = n^(-theta (h/n)^2) to the
/// given correlogram points by Levenberg-Marquardt in the linear domain.
///
/// Damping follows the standard Marquardt schedule: lambda starts at 1e-3,
/// shrinks x10 on an accepted step and grows x10 on a rejected one.
/// Points at h = 0 are dropped (model value is 1 for every theta there);
/// non-positive r values are kept, the model approaches them from above.
inline FitResult lm_fit_theta(std::span<const FitPoint> points,
                              std::size_t n,
                              const FitOptions& opts = {}) {
    std::vector<double> x, r;
    for (const auto& p : points) {
        if (p.h == 0) continue;
        x.push_back(detail::model_exponent(p.h, n));
        r.push_back(p.r);
    }
    if (x.empty())
        throw NoInformativePoints("no fit points with h >= 1");

    auto sse_at = [&](double theta) {
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double e = r[k] - std::exp(-theta * x[k]);
            s += e * e;
        }
        return s;
    };

    double theta = opts.init_theta;
    double sse = sse_at(theta);
    if (!std::isfinite(sse))
        throw NonFiniteResidual("residuals non-finite at initial theta");

    double lambda = 1e-3;
    FitResult result;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        result.iterations = iter + 1;
        double jtj = 0.0, jte = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double f = std::exp(-theta * x[k]);
            const double jac = -x[k] * f;  // df/dtheta
            jtj += jac * jac;
            jte += jac * (r[k] - f);
        }
        // flat region: the model has underflowed to 0 at every point and
        // the SSE is stationary in theta
        const double step = jtj > 0.0 ? jte / (jtj * (1.0 + lambda)) : 0.0;
        if (std::abs(step) < opts.tol) {
            result.converged = true;
            break;
        }
        const double trial_sse = sse_at(theta + step);
        if (std::isfinite(trial_sse) && trial_sse < sse) {
            theta += step;
            sse = trial_sse;
            lambda *= 0.1;
        } else {
            lambda *= 10.0;
        }
    }
    result.theta = theta;
    result.final_sse = sse;
    return result;
}

/// Exact least-squares solution for theta in the log domain:
/// ln r = -theta x with x = (h/n)^2 ln n, so theta = -sum(x ln r)/sum(x^2).
/// Non-positive r values carry no log and are dropped. On data generated
/// exactly from the model this equals the Levenberg-Marquardt answer,
/// which is what the tests use it for.
inline double theta_log_closed_form(std::span<const FitPoint> points,
                                    std::size_t n) {
    double num = 0.0, den = 0.0;
    for (const auto& p : points) {
        if (p.h == 0 || p.r <= 0.0) continue;
        const double x = detail::model_exponent(p.h, n);
        num += x * std::log(p.r);
        den += x * x;
    }
    if (den == 0.0)
        throw NoInformativePoints("no positive fit points with h >= 1");
    return -num / den;
}

}  // namespace krigmean
