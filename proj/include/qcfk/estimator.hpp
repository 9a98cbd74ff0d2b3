#pragma once

#include <utility>
#include <vector>

#include "qcfk/assembly.hpp"
#include "qcfk/mesh.hpp"
#include "qcfk/model.hpp"

namespace qcfk {

// Linear goal functional Q(y) = sum of coeff * y_atom.  The atoms carrying
// coefficients must be free (not clamped), so Q acts on interior vectors.
struct GoalFunctional {
    int M = 0;
    std::vector<std::pair<int, double>> coefficients; // (chain atom index, weight)

    std::vector<double> interior_vector() const;
    double evaluate_interior(const std::vector<double>& interior_atoms) const;
    double evaluate_full(const std::vector<double>& atom_field) const;
    void validate() const;
};

// Q(y) = y_1 - y_0, the opening of the dislocation between the shifted and
// unshifted substrate wells.
GoalFunctional dislocation_goal(int M);

// The operator zoo of one qc/pc mesh pair.  Names follow the roles: interp_*
// are piecewise-linear prolongations, restrict_* the nodal subsampling, and
// inject_* the zero-extensions of interior vectors.
struct OperatorSet {
    SpaceTaggedOperator interp_qc_to_atoms;
    SpaceTaggedOperator interp_pc_to_atoms;
    SpaceTaggedOperator interp_pc_from_qc;
    SpaceTaggedOperator restrict_qc_from_pc;
    SpaceTaggedOperator inject_atoms;
    SpaceTaggedOperator inject_qc;
    SpaceTaggedOperator inject_pc;
};

OperatorSet build_operator_set(const NestedMeshPair& pair);

// f^{ac} - M^{ac} y, the interior residual of the hybrid system at y.
std::vector<double> residual_ac(const LinearSystem& system_ac,
                                const std::vector<double>& y_interior);

struct EstimatorReport {
    double eta = 0.0;            // signed estimate of Q(e^{ac-qc})
    std::vector<double> eta_pc;  // per pc node, zero at clamped slots and qc repatoms
    std::vector<double> eta_qc;  // per qc interval, absolute values
    Solution dual_pc;
};

// Dual-weighted-residual estimate: the pc dual weights, minus their qc
// interpolation (which contributes nothing by Galerkin orthogonality), are
// paired against the hybrid residual of the embedded qc solution.
EstimatorReport estimate(const NestedMeshPair& pair, const OperatorSet& ops,
                         const LinearSystem& system_ac, const Solution& qc_primal,
                         const Solution& pc_dual);

// Boundary lift on mesh nodes, expressed in the requested frame.
std::vector<double> frame_lift(const ModelParams& params, const BoundaryValues& bc,
                               const Mesh& mesh, Frame frame);

// Displacement frame is preferred, but only valid when interpolating the
// reference field from this mesh reproduces it bitwise (true whenever the
// dislocation atoms 0 and 1 are repatoms and the weights divide exactly).
Frame choose_frame(const ModelParams& params, const Mesh& mesh,
                   const SpaceTaggedOperator& interp_to_atoms);

// One full estimator evaluation on a mesh: qc primal solve, pc dual solve,
// and the report.  This is the workhorse of the adaptive loop and of the
// efficiency tables.
struct MeshEvaluation {
    Frame frame;
    NestedMeshPair pair;
    Solution qc_primal;
    EstimatorReport report;
};

MeshEvaluation evaluate_mesh(const QuadraticEnergy& quad, const Mesh& qc_mesh, double lambda,
                             const GoalFunctional& goal, const BoundaryValues& bc);

} // namespace qcfk
