// urel: verify scenario files, run randomized sweeps, and replay the built-in demos.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "urel/cli.hpp"

namespace {

using namespace urel::cli;

int emit(const Report& report, Format format, const std::string& output)
{
    const std::string text = render(report, format);
    if (output.empty() || output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) throw InputError(output + ": cannot open for writing");
        out << text;
    }
    for (const auto& f : report.failures) std::cerr << "verification failure: " << f << "\n";
    return report.exit_code();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Error and uncertainty relations for finite-dimensional quantum measurements"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ToleranceFlags tol;
    std::string format = "json";
    std::string output;
    std::uint64_t seed = 1;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--tol-rank", tol.rank_tol, "Relative rank cutoff for Gram eigenvalues and singular values");
        sub->add_option("--tol-eq", tol.eq_tol, "Threshold under which a seminorm or range residual counts as zero");
        sub->add_option("--tol-ineq", tol.ineq_tol, "Negative slack an inequality may show and still hold");
        sub->add_option("--format", format, "Report format: json, csv or text")->capture_default_str();
        sub->add_option("--output", output, "Write the report here instead of stdout");
    };

    std::string scenario_path;
    CLI::App* verify = app.add_subcommand("verify", "Run the tasks of a scenario file");
    verify->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
    common(verify);

    SweepOptions sweep_opt;
    std::string dims = "2-4";
    std::string outcomes = "1-8";
    CLI::App* sweep = app.add_subcommand("sweep", "Random instances through the full relation and invariant suites");
    sweep->add_option("--count", sweep_opt.count, "Number of instances")->capture_default_str();
    sweep->add_option("--seed", seed, "Master seed")->capture_default_str();
    sweep->add_option("--dims", dims, "Hilbert-space dimensions, e.g. 2-5 or 2,3")->capture_default_str();
    sweep->add_option("--outcomes", outcomes, "Outcome counts per factor, e.g. 1-8")->capture_default_str();
    sweep->add_option("--threads", sweep_opt.workers, "Worker threads (0 = hardware concurrency)");
    common(sweep);

    std::string demo_name;
    CLI::App* demo = app.add_subcommand("demo", "Run a built-in worked example");
    demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(demo_names()));
    demo->add_option("--seed", seed, "Seed for randomized demos")->capture_default_str();
    common(demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        const Format fmt = parse_format(format);
        if (*verify) {
            return emit(run_verify(load_scenario(scenario_path), tol), fmt, output);
        }
        if (*sweep) {
            sweep_opt.seed = seed;
            sweep_opt.dims = parse_int_list(dims, "--dims");
            sweep_opt.outcomes = parse_int_list(outcomes, "--outcomes");
            sweep_opt.tol = tol;
            return emit(run_sweep(sweep_opt), fmt, output);
        }
        return emit(run_demo(demo_name, seed, tol), fmt, output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
}
