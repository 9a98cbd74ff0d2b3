// Python bindings for the adaptive quasicontinuum solver.  The surface is
// deliberately small: run the adaptive loop, evaluate one mesh, and expose
// the partial refinement rule for inspection.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qcfk/adapt.hpp"
#include "qcfk/config.hpp"
#include "qcfk/estimator.hpp"
#include "qcfk/mesh.hpp"
#include "qcfk/model.hpp"
#include "qcfk/oracle.hpp"

namespace py = pybind11;

namespace {

const char* status_name(qcfk::RunStatus status) {
    switch (status) {
    case qcfk::RunStatus::converged: return "converged";
    case qcfk::RunStatus::iteration_limit: return "iteration_limit";
    case qcfk::RunStatus::stalled: return "stalled";
    }
    return "unknown";
}

qcfk::RunConfig make_config(const std::string& text, std::optional<double> tau_gl,
                            std::optional<double> lambda, std::optional<bool> oracle) {
    qcfk::RunConfig cfg = qcfk::parse_config(text);
    if (tau_gl) cfg.adapt.tau_gl = *tau_gl;
    if (lambda) cfg.adapt.lambda = *lambda;
    if (oracle) {
        cfg.oracle = *oracle;
        cfg.adapt.compute_exact_error = *oracle;
    }
    cfg.validate();
    return cfg;
}

py::dict run(const std::string& config_text, std::optional<double> tau_gl,
             std::optional<double> lambda, std::optional<bool> oracle) {
    qcfk::RunConfig cfg = make_config(config_text, tau_gl, lambda, oracle);
    qcfk::Partition part = cfg.partition();
    qcfk::GoalFunctional goal = qcfk::dislocation_goal(cfg.params.M);
    qcfk::Mesh start = qcfk::initial_mesh(cfg.params, part);
    qcfk::RunResult result =
        qcfk::run_adaptive(cfg.params, part, start, goal, cfg.adapt, cfg.bc);

    py::list rows;
    for (const qcfk::TraceRow& row : result.rows) {
        py::dict d;
        d["iteration"] = row.iteration;
        d["dof"] = row.dof;
        d["min_nu"] = row.min_nu;
        d["max_nu"] = row.max_nu;
        d["eta"] = row.eta;
        d["sum_eta_qc"] = row.sum_eta_qc;
        if (row.exact_error) {
            d["exact_error"] = *row.exact_error;
        }
        d["repatoms"] = row.mesh.repatoms();
        rows.append(d);
    }
    py::dict out;
    out["status"] = status_name(result.status);
    out["iterations"] = result.rows.size();
    out["rows"] = rows;
    return out;
}

py::dict evaluate(const std::string& config_text, std::optional<std::vector<int>> repatoms,
                  std::optional<double> lambda, std::optional<bool> oracle) {
    qcfk::RunConfig cfg = make_config(config_text, std::nullopt, lambda, oracle);
    qcfk::Partition part = cfg.partition();
    qcfk::GoalFunctional goal = qcfk::dislocation_goal(cfg.params.M);
    qcfk::QuadraticEnergy quad = qcfk::assemble_quadratic(cfg.params, part);
    qcfk::Mesh mesh = repatoms
                          ? qcfk::Mesh(qcfk::MeshLevel::qc, cfg.params.M, *repatoms)
                          : qcfk::initial_mesh(cfg.params, part);
    qcfk::MeshEvaluation eval =
        qcfk::evaluate_mesh(quad, mesh, cfg.adapt.lambda, goal, cfg.bc);

    double sum_eta_qc = 0.0;
    for (double v : eval.report.eta_qc) {
        sum_eta_qc += v;
    }

    py::dict out;
    out["dof"] = mesh.node_count();
    out["repatoms"] = mesh.repatoms();
    out["eta"] = eval.report.eta;
    out["sum_eta_qc"] = sum_eta_qc;
    out["eta_qc"] = eval.report.eta_qc;
    if (cfg.oracle) {
        qcfk::GoalErrorBreakdown exact =
            qcfk::exact_goal_error(quad, mesh, eval.qc_primal, goal, cfg.bc);
        out["exact_error"] = std::abs(exact.primal_route);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Goal-oriented adaptive quasicontinuum solver for a harmonic "
              "dislocation chain";

    py::register_exception<qcfk::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("run", &run, py::arg("config_text") = std::string(),
          py::arg("tau_gl") = std::nullopt, py::arg("lambda_") = std::nullopt,
          py::arg("oracle") = std::nullopt,
          "Run the adaptive loop and return the trace as a dict.  config_text\n"
          "uses the same key = value format as the CLI; keyword arguments\n"
          "override it.  lambda_ may be math.inf for full refinement.");

    m.def("evaluate", &evaluate, py::arg("config_text") = std::string(),
          py::arg("repatoms") = std::nullopt, py::arg("lambda_") = std::nullopt,
          py::arg("oracle") = std::nullopt,
          "Evaluate the error estimator on one mesh (the initial mesh unless\n"
          "repatoms is given) and return eta, the per-interval indicators and\n"
          "optionally the exact goal error.");

    m.def("partial_refine_widths", &qcfk::partial_refine_widths, py::arg("nu"),
          py::arg("lambda_"),
          "Sub-interval widths produced by partially refining one interval of\n"
          "size nu with refinement parameter lambda_.");
}
