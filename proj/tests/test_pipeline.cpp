#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "krigmean/montecarlo.hpp"
#include "krigmean/pipeline.hpp"

using namespace krigmean;
using Catch::Matchers::WithinAbs;

namespace {

Correlogram fake(CorrelogramKind kind, std::vector<double> values,
                 std::size_t cutoff) {
    return Correlogram{kind, std::move(values), cutoff, 1.0};
}

}  // namespace

TEST_CASE("pooled assembly concatenates both correlograms") {
    const auto c1 = fake(CorrelogramKind::c1, {1.0, 0.8, 0.4, 0.0}, 3);
    const auto c2 = fake(CorrelogramKind::c2, {1.0, 0.7}, 1);
    const auto points = assemble_fit_points(c1, c2, FitPooling::pooled);
    REQUIRE(points.size() == 4);  // h=1..3 from c1, h=1 from c2
    CHECK(points[0].h == 1);
    CHECK(points[0].r == 0.8);
    CHECK(points[3].h == 1);
    CHECK(points[3].r == 0.7);
}

TEST_CASE("averaged assembly means shared lags and keeps the tail") {
    const auto c1 = fake(CorrelogramKind::c1, {1.0, 0.8, 0.4, 0.0}, 3);
    const auto c2 = fake(CorrelogramKind::c2, {1.0, 0.6}, 1);
    const auto points = assemble_fit_points(c1, c2, FitPooling::averaged);
    REQUIRE(points.size() == 3);
    CHECK(points[0].h == 1);
    CHECK_THAT(points[0].r, WithinAbs(0.7, 1e-15));  // (0.8 + 0.6) / 2
    CHECK(points[1].h == 2);
    CHECK(points[1].r == 0.4);  // c1 alone beyond c2's cutoff
    CHECK(points[2].h == 3);
    CHECK(points[2].r == 0.0);
}

TEST_CASE("single-correlogram assembly picks the requested side") {
    const auto c1 = fake(CorrelogramKind::c1, {1.0, 0.8, 0.4}, 2);
    const auto c2 = fake(CorrelogramKind::c2, {1.0, 0.6}, 1);
    const auto only1 = assemble_fit_points(c1, c2, FitPooling::c1_only);
    const auto only2 = assemble_fit_points(c1, c2, FitPooling::c2_only);
    REQUIRE(only1.size() == 2);
    REQUIRE(only2.size() == 1);
    CHECK(only1[1].r == 0.4);
    CHECK(only2[0].r == 0.6);
}

TEST_CASE("pipeline wires the stages together") {
    const SyntheticSpec spec{24, 80.0, 16.0, CorrKind::gaussian_decay, 8.0,
                             11};
    const TimeSeries ts = generate_series(spec);

    PipelineOptions opts;
    opts.scan.s_max = 30;
    opts.scan.epsilon = 0.05;
    opts.scan.require_nonneg_variance = false;
    const PipelineResult run = run_pipeline(ts, opts);

    CHECK(run.d >= 1);
    CHECK(run.sigma2_hat == run.variogram.gamma[run.d]);
    CHECK(run.c1.cutoff == run.d);
    CHECK(run.c2.cutoff == std::min(run.d, ts.n() - 2));
    CHECK(run.fit_points.size() == run.c1.cutoff + run.c2.cutoff);
    CHECK(run.fit.theta > 0.0);
    // j_max = 0 resolves to n + 3 * s_max
    CHECK(run.scan.j_max ==
          static_cast<std::int64_t>(ts.n()) + 3 * opts.scan.s_max);
    REQUIRE(run.scan.accepted.has_value());
    CHECK(std::abs(run.scan.accepted->constraint_g) <= 0.05);
}

TEST_CASE("pipeline propagates the degenerate-series error") {
    const TimeSeries flat{{4.0, 4.0, 4.0, 4.0, 4.0}};
    CHECK_THROWS_AS(run_pipeline(flat), DegenerateVariogram);
}

TEST_CASE("fit mode changes the fitted exponent") {
    const SyntheticSpec spec{24, 80.0, 16.0, CorrKind::gaussian_decay, 8.0,
                             11};
    const TimeSeries ts = generate_series(spec);
    const auto vg = semivariogram(ts);
    const std::size_t d = monotone_cutoff(vg);
    const auto c1 = correlogram_c1(vg, d);
    const auto c2 = correlogram_c2(ts, std::min(d, ts.n() - 2));

    const double pooled = lm_fit_theta(
        assemble_fit_points(c1, c2, FitPooling::pooled), ts.n()).theta;
    const double via_c1 = lm_fit_theta(
        assemble_fit_points(c1, c2, FitPooling::c1_only), ts.n()).theta;
    const double via_c2 = lm_fit_theta(
        assemble_fit_points(c1, c2, FitPooling::c2_only), ts.n()).theta;

    CHECK(pooled > 0.0);
    CHECK(via_c1 > 0.0);
    CHECK(via_c2 > 0.0);
    // pooled sits between the two single-source fits for this fixture
    CHECK(pooled >= std::min(via_c1, via_c2));
    CHECK(pooled <= std::max(via_c1, via_c2));
}
