#pragma once

#include "qcfk/assembly.hpp"
#include "qcfk/estimator.hpp"
#include "qcfk/mesh.hpp"
#include "qcfk/model.hpp"

namespace qcfk {

// The exact coarsening error Q(e^{ac-qc}), evaluated along both sides of the
// dual identity from one extended-precision factorization of the hybrid
// system.  The two routes agree far below the printed table resolution; a
// disagreement beyond 1e-10 relative (plus a 1e-15 floor for degenerate
// near-zero errors) is an internal-consistency failure.
struct GoalErrorBreakdown {
    double primal_route = 0.0; // q . (y^{ac} - embedded qc), signed
    double dual_route = 0.0;   // g^{ac} . (f^{ac} - M^{ac} embedded qc)
};

GoalErrorBreakdown exact_goal_error(const QuadraticEnergy& quad, const Mesh& qc_mesh,
                                    const Solution& qc_primal, const GoalFunctional& goal,
                                    const BoundaryValues& bc);

// Direct solve of the full atomistic (level atomistic, partition ignored) or
// hybrid (level ac) chain.  The returned interior is in the positions frame.
Solution solve_full(SystemLevel level, const ModelParams& params, const Partition& part,
                    const BoundaryValues& bc);

struct OracleReport {
    Solution y_atomistic;
    Solution y_ac;
    double modeling_error = 0.0;   // |Q(e^{a-ac})|
    double coarsening_error = 0.0; // |Q(e^{ac-qc})|
    double triangle_bound = 0.0;
};

OracleReport oracle_report(const ModelParams& params, const Partition& part, const Mesh& qc_mesh,
                           const Solution& qc_primal, const GoalFunctional& goal,
                           const BoundaryValues& bc);

// Residual orthogonality and the dual identity on one solved mesh, the
// quantities the acceptance gate checks per iteration.
struct MeshDiagnostics {
    double galerkin_norm = 0.0; // inf-norm of the qc-projected hybrid residual
    double f_ac_norm = 0.0;     // inf-norm of the hybrid load vector
    GoalErrorBreakdown goal_error;
};

MeshDiagnostics mesh_diagnostics(const QuadraticEnergy& quad, const Mesh& qc_mesh,
                                 const Solution& qc_primal, const GoalFunctional& goal,
                                 const BoundaryValues& bc);

} // namespace qcfk
