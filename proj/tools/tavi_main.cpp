#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tavi/harness.hpp"
#include "tavi/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunError = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitVerifyFailed = 3;

std::string read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw tavi::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& out_path,
            const std::string& format_name) {
    const tavi::RunConfig base = tavi::parse_config(read_config_file(config_path));
    tavi::RunConfig cfg = base;
    cfg.output_path.clear(); // writing handled here so --format applies
    const tavi::RunResult result = tavi::run_trajectory(cfg);

    const tavi::TraceFormat format =
        format_name == "json" ? tavi::TraceFormat::Json : tavi::TraceFormat::Csv;
    const std::string target = !out_path.empty() ? out_path : base.output_path;
    if (!target.empty())
        tavi::write_trace(result.trace, target, format);
    else
        std::cout << tavi::format_trace(result.trace, format);

    std::fprintf(stderr, "%s after %ld iterations, f_err = %.6g, wall = %.3fs\n",
                 result.converged ? "converged" : "stopped", result.iterations,
                 result.final_f_err, result.wall_seconds);
    return kExitOk;
}

int cmd_compare(const std::string& config_path) {
    const std::vector<tavi::RunConfig> cfgs =
        tavi::parse_compare_config(read_config_file(config_path));
    const tavi::ComparisonReport report = tavi::compare_runs(cfgs);

    std::printf("%-16s %-10s %12s %14s %10s\n", "method", "converged", "iterations",
                "final_f_err", "wall_s");
    for (std::size_t i = 0; i < report.summaries.size(); ++i) {
        const tavi::RunSummary& s = report.summaries[i];
        std::printf("%-16s %-10s %12ld %14.6g %10.3f\n", s.label.c_str(),
                    s.converged ? "yes" : "no", s.iterations, s.final_f_err, s.wall_seconds);
        if (!cfgs[i].output_path.empty())
            std::fprintf(stderr, "trace written to %s\n", cfgs[i].output_path.c_str());
    }
    return kExitOk;
}

int cmd_verify(bool quick) {
    const std::vector<tavi::CheckResult> results = tavi::verification_suite(quick);
    bool all_passed = true;
    for (const tavi::CheckResult& r : results) {
        std::printf("%s  %-42s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all_passed = all_passed && r.passed;
    }
    return all_passed ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-adaptive variational integrators for Bregman accelerated optimization"};
    app.require_subcommand(1);

    std::string run_config, run_out, run_format = "csv";
    CLI::App* run = app.add_subcommand("run", "run one configuration and emit its trace");
    run->add_option("--config", run_config, "JSON run configuration")->required();
    run->add_option("--out", run_out, "trace output path (default: stdout)");
    run->add_option("--format", run_format, "trace format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string compare_config;
    CLI::App* compare =
        app.add_subcommand("compare", "run several configurations on one problem");
    compare->add_option("--config", compare_config, "JSON with {\"runs\": [...]}")->required();

    bool quick = false;
    CLI::App* verify = app.add_subcommand("verify", "run the residual and property checks");
    verify->add_flag("--quick", quick, "shorter trajectories");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (run->parsed())
            return cmd_run(run_config, run_out, run_format);
        if (compare->parsed())
            return cmd_compare(compare_config);
        return cmd_verify(quick);
    } catch (const tavi::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const tavi::Error& e) {
        std::fprintf(stderr, "run error: %s\n", e.what());
        return kExitRunError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRunError;
    }
}
