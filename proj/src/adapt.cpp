#include "qcfk/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcfk/checks.hpp"
#include "qcfk/oracle.hpp"

namespace qcfk {

void AdaptConfig::validate() const {
    require(tau_gl > 0.0, "tau_gl must be positive");
    require(tau_fac > 1.0, "tau_fac must exceed 1");
    require(lambda >= 2.0, "lambda must be at least 2 (infinity allowed)");
    require(max_iterations >= 1, "max_iterations must be positive");
}

std::vector<std::size_t> mark(const EstimatorReport& report, double tau_fac, const Mesh& mesh) {
    require(report.eta_qc.size() == mesh.interval_count(), "report does not match the mesh");
    require(tau_fac > 1.0, "tau_fac must exceed 1");
    const double top = *std::max_element(report.eta_qc.begin(), report.eta_qc.end());
    std::vector<std::size_t> marked;
    if (top == 0.0) return marked;
    const double threshold = top / tau_fac;
    for (std::size_t j = 0; j < report.eta_qc.size(); ++j)
        if (report.eta_qc[j] >= threshold && mesh.nu(j) >= 2) marked.push_back(j);
    return marked;
}

std::pair<int, int> coarsenable_nu_range(const Mesh& mesh, const Partition& part) {
    require(part.has_block(), "element-size range needs an atomistic block");
    const int M = mesh.M();
    const int left_end = part.block_first() - 2;
    const int right_begin = part.block_last() + 2;
    int lo = std::numeric_limits<int>::max();
    int hi = 0;
    for (std::size_t j = 0; j + 1 < mesh.node_count(); ++j) {
        const bool in_left = mesh.node(j) >= -M + 2 && mesh.node(j + 1) <= left_end;
        const bool in_right = mesh.node(j) >= right_begin && mesh.node(j + 1) <= M - 1;
        if (in_left || in_right) {
            lo = std::min(lo, mesh.nu(j));
            hi = std::max(hi, mesh.nu(j));
        }
    }
    if (hi == 0) return {0, 0};
    return {lo, hi};
}

RunResult run_adaptive(const ModelParams& params, const Partition& part, const Mesh& start,
                       const GoalFunctional& goal, const AdaptConfig& config,
                       const BoundaryValues& bc) {
    params.validate();
    config.validate();
    goal.validate();
    require(start.level() == MeshLevel::qc, "the adaptive loop works on a qc mesh");
    const QuadraticEnergy quad(params, part, PhantomPolicy::drop);

    RunResult out;
    Mesh mesh = start;
    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        const MeshEvaluation ev = evaluate_mesh(quad, mesh, config.lambda, goal, bc);
        double sum_eta_qc = 0.0;
        for (double v : ev.report.eta_qc) sum_eta_qc += v;
        std::optional<double> exact;
        if (config.compute_exact_error)
            exact = std::abs(
                exact_goal_error(quad, mesh, ev.qc_primal, goal, bc).primal_route);
        const auto [min_nu, max_nu] = coarsenable_nu_range(mesh, part);
        out.rows.push_back({iteration, mesh.node_count(), min_nu, max_nu, ev.report.eta,
                            sum_eta_qc, exact, mesh, ev.report.eta_qc});

        if (std::abs(ev.report.eta) <= config.tau_gl) {
            out.status = RunStatus::converged;
            return out;
        }
        const std::vector<std::size_t> marked = mark(ev.report, config.tau_fac, mesh);
        if (marked.empty()) {
            out.status = RunStatus::stalled;
            return out;
        }
        mesh = bisect(mesh, marked);
    }
    out.status = RunStatus::iteration_limit;
    return out;
}

} // namespace qcfk
