#pragma once

#include <optional>
#include <vector>

#include "qcfk/estimator.hpp"
#include "qcfk/mesh.hpp"
#include "qcfk/model.hpp"

namespace qcfk {

struct AdaptConfig {
    double tau_gl = 1e-5;
    double tau_fac = 10.0;
    double lambda = 2.0; // may be +infinity
    int max_iterations = 100;
    bool compute_exact_error = true;
    void validate() const;
};

struct TraceRow {
    int iteration = 0; // 1-based
    std::size_t dof = 0;
    int min_nu = 0; // over coarsenable intervals only
    int max_nu = 0;
    double eta = 0.0;
    double sum_eta_qc = 0.0;
    std::optional<double> exact_error; // |Q(e^{ac-qc})|
    Mesh mesh;
    std::vector<double> eta_qc;
};

enum class RunStatus { converged, iteration_limit, stalled };

struct RunResult {
    RunStatus status = RunStatus::iteration_limit;
    std::vector<TraceRow> rows;
};

// Intervals with eta_qc within a factor tau_fac of the maximum, excluding
// single-atom intervals (nothing to bisect there).  An all-zero indicator
// marks nothing.
std::vector<std::size_t> mark(const EstimatorReport& report, double tau_fac, const Mesh& mesh);

// min/max element size over the intervals that can actually be coarsened:
// those strictly between the boundary repatoms and the padded atomistic
// block.  Returns {0, 0} if no such interval exists.
std::pair<int, int> coarsenable_nu_range(const Mesh& mesh, const Partition& part);

// The adaptive loop: solve, partially refine, estimate, then stop or bisect
// the marked intervals.  One TraceRow is recorded per iteration; the mesh of
// the last row is the final mesh.
RunResult run_adaptive(const ModelParams& params, const Partition& part, const Mesh& start,
                       const GoalFunctional& goal, const AdaptConfig& config,
                       const BoundaryValues& bc);

} // namespace qcfk
