#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcfk/cli.hpp"

namespace {

double parse_lambda_value(const std::string& text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + text.size() || text.empty())
        throw CLI::ValidationError("lambda", "expected a number or 'inf', got '" + text + "'");
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive quasicontinuum solver for a harmonic dislocation chain"};
    app.require_subcommand(1);

    qcfk::RunOptions run_options;
    std::string run_lambda;
    std::string run_oracle;
    std::string run_out;
    CLI::App* run = app.add_subcommand("run", "Run the adaptive loop and write its artifacts");
    run->add_option("--config", run_options.config_path, "Config file, one key = value per line");
    run->add_option("--tau-gl", run_options.tau_gl, "Override the global error tolerance");
    run->add_option("--lambda", run_lambda, "Override the partial refinement factor (>= 2 or inf)");
    run->add_option("--oracle", run_oracle, "Compute exact errors alongside the estimate")
        ->check(CLI::IsMember({"on", "off"}));
    run->add_option("--out", run_out, "Output directory");

    qcfk::EfficiencyOptions eff_options;
    std::vector<std::string> eff_lambdas;
    std::string eff_out;
    std::optional<double> eff_sweep;
    CLI::App* eff = app.add_subcommand(
        "efficiency", "Evaluate the estimator across stopping tolerances and lambda values");
    eff->add_option("--config", eff_options.config_path, "Config file, one key = value per line");
    eff->add_option("--tolerances", eff_options.tolerances,
                    "Stopping tolerances whose final meshes are compared")
        ->delimiter(',');
    eff->add_option("--lambdas", eff_lambdas, "Partial refinement factors (numbers or inf)")
        ->delimiter(',');
    eff->add_option("--sweep-tolerance", eff_sweep,
                    "Tolerance for the per-lambda convergence sweep");
    eff->add_option("--out", eff_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? qcfk::exit_ok : qcfk::exit_usage;
    }

    try {
        if (run->parsed()) {
            if (!run_lambda.empty()) run_options.lambda = parse_lambda_value(run_lambda);
            if (!run_oracle.empty()) run_options.oracle = run_oracle == "on";
            if (!run_out.empty()) run_options.out_dir = run_out;
            return qcfk::cmd_run(run_options, std::cout, std::cerr);
        }
        for (const std::string& text : eff_lambdas)
            eff_options.lambdas.push_back(parse_lambda_value(text));
        eff_options.sweep_tolerance = eff_sweep;
        if (!eff_out.empty()) eff_options.out_dir = eff_out;
        return qcfk::cmd_efficiency(eff_options, std::cout, std::cerr);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qcfk::exit_usage;
    }
}
