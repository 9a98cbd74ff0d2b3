#include "qcfk/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qcfk/adapt.hpp"
#include "qcfk/checks.hpp"
#include "qcfk/estimator.hpp"
#include "qcfk/oracle.hpp"
#include "qcfk/text_format.hpp"

namespace qcfk {

namespace {

RunConfig load_config(const std::string& path) {
    if (path.empty()) return parse_config("");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw ConfigError("cannot read config file '" + path + "'");
    return parse_config(buf.str());
}

bool write_text_file(const std::filesystem::path& path, const std::string& content,
                     std::ostream& err) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out.good()) {
        err << "error: cannot write '" << path.string() << "'\n";
        return false;
    }
    return true;
}

bool prepare_out_dir(const std::string& dir, std::ostream& err) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        err << "error: cannot create output directory '" << dir << "': " << ec.message() << "\n";
        return false;
    }
    return true;
}

std::string format_lambda(double lambda) {
    return std::isinf(lambda) ? "inf" : format_double(lambda);
}

std::string trace_csv(const RunResult& result) {
    std::string s = "iteration,dof,min_nu,max_nu,eta,sum_eta_qc,exact_error\n";
    for (const TraceRow& row : result.rows) {
        s += std::to_string(row.iteration) + ',' + std::to_string(row.dof) + ',' +
             std::to_string(row.min_nu) + ',' + std::to_string(row.max_nu) + ',' +
             format_double(row.eta) + ',' + format_double(row.sum_eta_qc) + ',';
        if (row.exact_error) s += format_double(*row.exact_error);
        s += '\n';
    }
    return s;
}

std::string mesh_csv(const TraceRow& row) {
    std::string s = "j,ell_j,nu_j,eta_qc_j\n";
    for (std::size_t j = 0; j + 1 < row.mesh.node_count(); ++j) {
        s += std::to_string(row.mesh.node_label(j)) + ',' +
             std::to_string(row.mesh.node(j)) + ',' + std::to_string(row.mesh.nu(j)) + ',' +
             format_double(row.eta_qc[j]) + '\n';
    }
    return s;
}

const char* status_name(RunStatus status) {
    switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::iteration_limit: return "max_iterations";
    case RunStatus::stalled: return "stalled";
    }
    return "unknown";
}

nlohmann::ordered_json config_echo(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["k0"] = cfg.params.k0;
    j["k1"] = cfg.params.k1;
    j["k2"] = cfg.params.k2;
    j["a0"] = cfg.params.a0;
    j["M"] = cfg.params.M;
    j["atomistic_lo"] = cfg.atomistic_lo;
    j["atomistic_hi"] = cfg.atomistic_hi;
    j["bc_l1"] = cfg.bc.l1;
    j["bc_l2"] = cfg.bc.l2;
    j["bc_r2"] = cfg.bc.r2;
    j["bc_r1"] = cfg.bc.r1;
    j["tau_gl"] = cfg.adapt.tau_gl;
    j["tau_fac"] = cfg.adapt.tau_fac;
    if (std::isinf(cfg.adapt.lambda)) j["lambda"] = "inf";
    else j["lambda"] = cfg.adapt.lambda;
    j["max_iterations"] = cfg.adapt.max_iterations;
    j["oracle"] = cfg.oracle ? "on" : "off";
    j["out_dir"] = cfg.out_dir;
    std::string formats;
    if (cfg.write_csv) formats = "csv";
    if (cfg.write_json) formats += formats.empty() ? "json" : ",json";
    j["formats"] = formats;
    return j;
}

} // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_config(options.config_path);
        if (options.tau_gl) cfg.adapt.tau_gl = *options.tau_gl;
        if (options.lambda) cfg.adapt.lambda = *options.lambda;
        if (options.oracle) {
            cfg.oracle = *options.oracle;
            cfg.adapt.compute_exact_error = cfg.oracle;
        }
        if (options.out_dir) cfg.out_dir = *options.out_dir;
        cfg.validate();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        const Partition part = cfg.partition();
        const GoalFunctional goal = dislocation_goal(cfg.params.M);
        const Mesh start = initial_mesh(cfg.params, part);
        const RunResult result = run_adaptive(cfg.params, part, start, goal, cfg.adapt, cfg.bc);
        const TraceRow& last = result.rows.back();

        if (!prepare_out_dir(cfg.out_dir, err)) return exit_usage;
        const std::filesystem::path dir(cfg.out_dir);
        if (cfg.write_csv) {
            if (!write_text_file(dir / "trace.csv", trace_csv(result), err)) return exit_usage;
            for (const TraceRow& row : result.rows) {
                const std::string name = "mesh_" + std::to_string(row.iteration) + ".csv";
                if (!write_text_file(dir / name, mesh_csv(row), err)) return exit_usage;
            }
        }
        if (cfg.write_json) {
            nlohmann::ordered_json j;
            j["status"] = status_name(result.status);
            j["iterations"] = result.rows.size();
            j["dof"] = last.dof;
            j["final_eta"] = last.eta;
            j["final_sum_eta_qc"] = last.sum_eta_qc;
            if (last.exact_error) j["final_exact_error"] = *last.exact_error;
            if (cfg.oracle) {
                const MeshEvaluation ev =
                    evaluate_mesh(QuadraticEnergy(cfg.params, part, PhantomPolicy::drop),
                                  last.mesh, cfg.adapt.lambda, goal, cfg.bc);
                const OracleReport oracle =
                    oracle_report(cfg.params, part, last.mesh, ev.qc_primal, goal, cfg.bc);
                j["modeling_error"] = oracle.modeling_error;
                j["coarsening_error"] = oracle.coarsening_error;
                j["triangle_bound"] = oracle.triangle_bound;
            }
            j["config"] = config_echo(cfg);
            if (!write_text_file(dir / "summary.json", j.dump(2) + "\n", err)) return exit_usage;
        }

        out << "status " << status_name(result.status) << ", iterations " << result.rows.size()
            << ", dof " << last.dof << ", eta " << format_double(last.eta) << "\n";
        return result.status == RunStatus::converged ? exit_ok : exit_not_converged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

int cmd_efficiency(const EfficiencyOptions& options, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::vector<double> lambdas = options.lambdas;
    if (lambdas.empty())
        lambdas = {2.0, 4.0, 8.0, std::numeric_limits<double>::infinity()};
    try {
        cfg = load_config(options.config_path);
        if (options.out_dir) cfg.out_dir = *options.out_dir;
        cfg.validate();
        if (options.tolerances.empty()) throw ConfigError("efficiency needs at least one tolerance");
        for (double tau : options.tolerances)
            if (!(tau > 0.0)) throw ConfigError("tolerances must be positive");
        for (double lambda : lambdas)
            if (!(lambda >= 2.0)) throw ConfigError("lambdas must be at least 2 (inf allowed)");
        if (options.sweep_tolerance && !(*options.sweep_tolerance > 0.0))
            throw ConfigError("sweep tolerance must be positive");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        const Partition part = cfg.partition();
        const GoalFunctional goal = dislocation_goal(cfg.params.M);
        const Mesh start = initial_mesh(cfg.params, part);
        const QuadraticEnergy quad(cfg.params, part, PhantomPolicy::drop);
        bool all_converged = true;

        std::string efficiency = "mesh_id,lambda,eta,sum_eta_qc,exact_error,ratio_eta,ratio_sum\n";
        for (std::size_t m = 0; m < options.tolerances.size(); ++m) {
            AdaptConfig gen = cfg.adapt;
            gen.tau_gl = options.tolerances[m];
            gen.compute_exact_error = false;
            const RunResult run = run_adaptive(cfg.params, part, start, goal, gen, cfg.bc);
            all_converged = all_converged && run.status == RunStatus::converged;
            const Mesh& mesh = run.rows.back().mesh;
            out << "mesh " << m + 1 << ": tolerance " << format_double(gen.tau_gl) << ", dof "
                << mesh.node_count() << "\n";

            double exact = 0.0;
            for (std::size_t li = 0; li < lambdas.size(); ++li) {
                const MeshEvaluation ev = evaluate_mesh(quad, mesh, lambdas[li], goal, cfg.bc);
                if (li == 0)
                    exact = exact_goal_error(quad, mesh, ev.qc_primal, goal, cfg.bc).primal_route;
                double sum_eta_qc = 0.0;
                for (double v : ev.report.eta_qc) sum_eta_qc += v;
                efficiency += std::to_string(m + 1) + ',' + format_lambda(lambdas[li]) + ',' +
                              format_double(ev.report.eta) + ',' + format_double(sum_eta_qc) +
                              ',' + format_double(std::abs(exact)) + ',' +
                              format_double(ev.report.eta / exact) + ',' +
                              format_double(sum_eta_qc / std::abs(exact)) + '\n';
            }
        }

        std::string sweep_csv = "lambda,iteration,dof,exact_error,eta\n";
        const double sweep_tau = options.sweep_tolerance.value_or(4.2e-10);
        for (double lambda : lambdas) {
            AdaptConfig sweep = cfg.adapt;
            sweep.tau_gl = sweep_tau;
            sweep.lambda = lambda;
            sweep.compute_exact_error = true;
            const RunResult run = run_adaptive(cfg.params, part, start, goal, sweep, cfg.bc);
            all_converged = all_converged && run.status == RunStatus::converged;
            out << "lambda " << format_lambda(lambda) << ": " << run.rows.size()
                << " iterations, dof " << run.rows.back().dof << "\n";
            for (const TraceRow& row : run.rows) {
                sweep_csv += format_lambda(lambda) + ',' + std::to_string(row.iteration) + ',' +
                             std::to_string(row.dof) + ',' +
                             format_double(row.exact_error.value_or(0.0)) + ',' +
                             format_double(row.eta) + '\n';
            }
        }

        if (!prepare_out_dir(cfg.out_dir, err)) return exit_usage;
        const std::filesystem::path dir(cfg.out_dir);
        if (!write_text_file(dir / "efficiency.csv", efficiency, err)) return exit_usage;
        if (!write_text_file(dir / "mesh_efficiency.csv", sweep_csv, err)) return exit_usage;
        return all_converged ? exit_ok : exit_not_converged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

} // namespace qcfk
