// Command-line front end: variography, correlogram export, theta fit,
// the full mean-estimation pipeline and the Monte Carlo coverage harness.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "krigmean/krigmean.hpp"

namespace {

// exit code taxonomy, also documented in the README
constexpr int exit_ok = 0;
constexpr int exit_no_root = 1;
constexpr int exit_usage = 2;
constexpr int exit_data = 3;
constexpr int exit_numeric = 4;

struct InputOptions {
    std::string path;
    std::string format = "plain";
    std::vector<long long> window;  // start,len (1-based)
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("-i,--input", in.path, "input series file")
        ->required();
    cmd->add_option("--format", in.format,
                    "input layout: plain (one value per line) or dated "
                    "(CSV date,close)")
        ->check(CLI::IsMember({"plain", "dated"}));
    cmd->add_option("--window", in.window,
                    "start,len: 1-based window of the series to use "
                    "(default: all of it)")
        ->delimiter(',')
        ->expected(0, 2);
}

krigmean::TimeSeries load_input(const InputOptions& in) {
    const auto format = in.format == "dated"
                            ? krigmean::SeriesFormat::dated
                            : krigmean::SeriesFormat::plain;
    krigmean::TimeSeries ts = krigmean::load_series(in.path, format);
    if (in.window.empty()) return ts;
    if (in.window.size() != 2 || in.window[0] < 1 || in.window[1] < 1)
        throw CLI::ValidationError("--window", "expected start,len >= 1");
    return ts.window(static_cast<std::size_t>(in.window[0]),
                     static_cast<std::size_t>(in.window[1]));
}

struct FitFlags {
    std::string mode = "pooled";
    krigmean::FitOptions opts;
};

void add_fit_options(CLI::App* cmd, FitFlags& fit) {
    cmd->add_option("--fit-mode", fit.mode,
                    "correlogram pooling for the theta fit")
        ->check(CLI::IsMember({"pooled", "averaged", "c1", "c2"}));
    cmd->add_option("--init-theta", fit.opts.init_theta,
                    "starting theta for the fit");
    cmd->add_option("--fit-tol", fit.opts.tol,
                    "step-size convergence tolerance");
    cmd->add_option("--max-iter", fit.opts.max_iter,
                    "iteration cap for the fit");
}

krigmean::FitPooling parse_pooling(const std::string& mode) {
    if (mode == "averaged") return krigmean::FitPooling::averaged;
    if (mode == "c1") return krigmean::FitPooling::c1_only;
    if (mode == "c2") return krigmean::FitPooling::c2_only;
    return krigmean::FitPooling::pooled;
}

struct ScanFlags {
    krigmean::ScanConfig cfg;
    bool allow_negative_variance = false;
};

void add_scan_options(CLI::App* cmd, ScanFlags& scan) {
    cmd->add_option("--s-max", scan.cfg.s_max,
                    "scan t = n+1 .. n+s_max");
    cmd->add_option("--j-max", scan.cfg.j_max,
                    "largest target index j (0: use n + 3*s_max)");
    cmd->add_option("--epsilon", scan.cfg.epsilon,
                    "acceptance tolerance on |g|");
    cmd->add_flag("--allow-negative-variance",
                  scan.allow_negative_variance,
                  "accept roots whose variance terms are negative "
                  "(interval is then marked invalid)");
    cmd->add_flag("--sign-change-fallback", scan.cfg.sign_change_fallback,
                  "accept the smaller-|g| endpoint of a sign change that "
                  "straddles the tolerance");
}

void write_lag_csv(const std::string& path, const char* value_name,
                   const std::vector<double>& values, std::size_t count) {
    krigmean::csv::Writer w(path);
    w.row({"h", value_name});
    for (std::size_t h = 0; h < count; ++h)
        w.row({std::to_string(h), krigmean::csv::format_double(values[h])});
}

std::string join_path(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

int cmd_variogram(const InputOptions& in, const std::string& out_dir) {
    const krigmean::TimeSeries ts = load_input(in);
    const auto vg = krigmean::semivariogram(ts);
    const std::size_t d = krigmean::monotone_cutoff(vg);
    std::filesystem::create_directories(out_dir);
    write_lag_csv(join_path(out_dir, "variogram.csv"), "gamma", vg.gamma,
                  vg.size());
    std::printf("d=%zu sigma2=%s\n", d,
                krigmean::csv::format_double(vg.gamma[d]).c_str());
    return exit_ok;
}

int cmd_correlogram(const InputOptions& in, const std::string& out_dir) {
    const krigmean::TimeSeries ts = load_input(in);
    const auto vg = krigmean::semivariogram(ts);
    const std::size_t d = krigmean::monotone_cutoff(vg);
    const auto c1 = krigmean::correlogram_c1(vg, d);
    const auto c2 =
        krigmean::correlogram_c2(ts, std::min(d, ts.n() - 2));
    std::filesystem::create_directories(out_dir);
    write_lag_csv(join_path(out_dir, "correlogram_c1.csv"), "rho_abs",
                  c1.rho_abs, c1.rho_abs.size());
    write_lag_csv(join_path(out_dir, "correlogram_c2.csv"), "rho_abs",
                  c2.rho_abs, c2.rho_abs.size());
    std::printf("d=%zu sigma2=%s\n", d,
                krigmean::csv::format_double(c1.sigma2_hat).c_str());
    return exit_ok;
}

int cmd_fit(const InputOptions& in, const FitFlags& fit) {
    const krigmean::TimeSeries ts = load_input(in);
    const auto vg = krigmean::semivariogram(ts);
    const std::size_t d = krigmean::monotone_cutoff(vg);
    const auto c1 = krigmean::correlogram_c1(vg, d);
    const auto c2 =
        krigmean::correlogram_c2(ts, std::min(d, ts.n() - 2));
    const auto points = krigmean::assemble_fit_points(
        c1, c2, parse_pooling(fit.mode));
    const auto result = krigmean::lm_fit_theta(points, ts.n(), fit.opts);

    nlohmann::json out{{"theta", result.theta},
                       {"iterations", result.iterations},
                       {"final_sse", result.final_sse},
                       {"converged", result.converged},
                       {"d", d},
                       {"points", points.size()},
                       {"mode", fit.mode}};
    std::cout << out.dump() << '\n';
    return exit_ok;
}

int cmd_estimate(const InputOptions& in, const FitFlags& fit,
                 const ScanFlags& scan, const std::string& out_dir,
                 std::string label) {
    const krigmean::TimeSeries ts = load_input(in);
    krigmean::PipelineOptions opts;
    opts.pooling = parse_pooling(fit.mode);
    opts.fit = fit.opts;
    opts.scan = scan.cfg;
    opts.scan.require_nonneg_variance = !scan.allow_negative_variance;

    const krigmean::PipelineResult run = krigmean::run_pipeline(ts, opts);
    krigmean::emit_plot_data(run.scan, out_dir);

    if (label.empty())
        label = std::filesystem::path(in.path).stem().string();

    if (!run.scan.accepted) {
        std::fprintf(stderr,
                     "no (t, j) with |g| <= %g found for t <= n+%lld, "
                     "j <= %lld (theta=%.5f); trace written to %s\n",
                     run.scan.epsilon,
                     static_cast<long long>(opts.scan.s_max),
                     static_cast<long long>(run.scan.j_max),
                     run.fit.theta, out_dir.c_str());
        return exit_no_root;
    }

    const krigmean::MeanEstimate& est = *run.scan.accepted;
    std::printf("%s, %zu, %.5f, %lld, %lld, %.2f\n", label.c_str(), ts.n(),
                run.fit.theta, static_cast<long long>(est.t),
                static_cast<long long>(est.j), est.m_hat);
    nlohmann::json out = est;
    std::cout << out.dump() << '\n';
    return exit_ok;
}

struct CoverageFlags {
    krigmean::SyntheticSpec spec;
    int trials = 500;
    std::string model = "white_noise";
    std::string per_trial_csv;
};

int cmd_coverage(const CoverageFlags& cov, const FitFlags& fit,
                 const ScanFlags& scan) {
    krigmean::SyntheticSpec spec = cov.spec;
    spec.kind = cov.model == "gaussian_decay"
                    ? krigmean::CorrKind::gaussian_decay
                    : krigmean::CorrKind::white_noise;
    krigmean::PipelineOptions opts;
    opts.pooling = parse_pooling(fit.mode);
    opts.fit = fit.opts;
    opts.scan = scan.cfg;
    opts.scan.require_nonneg_variance = !scan.allow_negative_variance;

    const auto report = krigmean::coverage_experiment(
        spec, cov.trials, opts, cov.per_trial_csv);
    nlohmann::json out = report;
    std::cout << out.dump() << '\n';
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "mean estimation for stationary series by kriging with a "
        "negative correlation model"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value config file; sections per subcommand");

    InputOptions in;
    std::string out_dir = ".";
    FitFlags fit;
    ScanFlags scan;
    std::string label;
    CoverageFlags cov;

    auto* variogram =
        app.add_subcommand("variogram",
                           "experimental semivariogram and its cutoff");
    add_input_options(variogram, in);
    variogram->add_option("--out-dir", out_dir, "output directory");

    auto* correlogram = app.add_subcommand(
        "correlogram", "both experimental correlograms up to the cutoff");
    add_input_options(correlogram, in);
    correlogram->add_option("--out-dir", out_dir, "output directory");

    auto* fit_cmd =
        app.add_subcommand("fit", "decay exponent theta of the "
                                  "correlation model");
    add_input_options(fit_cmd, in);
    add_fit_options(fit_cmd, fit);

    auto* estimate = app.add_subcommand(
        "estimate", "full pipeline: variogram, fit, constraint scan, "
                    "mean estimate with interval");
    add_input_options(estimate, in);
    add_fit_options(estimate, fit);
    add_scan_options(estimate, scan);
    estimate->add_option("--out-dir", out_dir, "plot CSV directory");
    estimate->add_option("--label", label,
                         "dataset name for the summary row "
                         "(default: input file stem)");

    auto* coverage = app.add_subcommand(
        "coverage", "bias / RMSE / interval coverage on synthetic draws");
    add_fit_options(coverage, fit);
    add_scan_options(coverage, scan);
    coverage->add_option("--trials", cov.trials, "number of trials")
        ->check(CLI::Range(100, 1000000));
    coverage->add_option("--n", cov.spec.n, "series length per trial")
        ->required();
    coverage->add_option("--mean", cov.spec.mean, "true mean");
    coverage->add_option("--sigma2", cov.spec.sigma2, "field variance");
    coverage
        ->add_option("--model", cov.model, "correlation of the draws")
        ->check(CLI::IsMember({"white_noise", "gaussian_decay"}));
    coverage->add_option("--a", cov.spec.a,
                         "gaussian_decay range parameter");
    coverage->add_option("--seed", cov.spec.seed, "master seed");
    coverage->add_option("--per-trial-csv", cov.per_trial_csv,
                         "write one CSV row per trial");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (variogram->parsed()) return cmd_variogram(in, out_dir);
        if (correlogram->parsed()) return cmd_correlogram(in, out_dir);
        if (fit_cmd->parsed()) return cmd_fit(in, fit);
        if (estimate->parsed())
            return cmd_estimate(in, fit, scan, out_dir, label);
        if (coverage->parsed()) return cmd_coverage(cov, fit, scan);
    } catch (const krigmean::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return exit_data;
    } catch (const krigmean::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_data;
    } catch (const krigmean::NumericError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return exit_numeric;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numeric;
    }
    return exit_usage;
}
