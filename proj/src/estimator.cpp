#include "qcfk/estimator.hpp"

#include <cmath>
#include <string>

#include "qcfk/checks.hpp"

namespace qcfk {

void GoalFunctional::validate() const {
    require(M >= 4, "goal functional needs M >= 4");
    require(!coefficients.empty(), "goal functional has no coefficients");
    for (const auto& [atom, coeff] : coefficients) {
        require(atom >= -M + 3 && atom <= M - 2, "goal atoms must be free (not clamped)");
        require(std::isfinite(coeff), "goal coefficient must be finite");
    }
}

std::vector<double> GoalFunctional::interior_vector() const {
    std::vector<double> q(static_cast<std::size_t>(2 * M - 4), 0.0);
    for (const auto& [atom, coeff] : coefficients) q[atom_slot(atom, M) - 2] += coeff;
    return q;
}

double GoalFunctional::evaluate_interior(const std::vector<double>& interior_atoms) const {
    require(interior_atoms.size() == static_cast<std::size_t>(2 * M - 4),
            "interior vector has the wrong length");
    double v = 0.0;
    for (const auto& [atom, coeff] : coefficients) v += coeff * interior_atoms[atom_slot(atom, M) - 2];
    return v;
}

double GoalFunctional::evaluate_full(const std::vector<double>& atom_field) const {
    require(atom_field.size() == static_cast<std::size_t>(2 * M), "atom field has the wrong length");
    double v = 0.0;
    for (const auto& [atom, coeff] : coefficients) v += coeff * atom_field[atom_slot(atom, M)];
    return v;
}

GoalFunctional dislocation_goal(int M) {
    GoalFunctional g{M, {{0, -1.0}, {1, 1.0}}};
    g.validate();
    return g;
}

OperatorSet build_operator_set(const NestedMeshPair& pair) {
    const std::size_t na = static_cast<std::size_t>(2 * pair.coarse().M());
    return {interpolation_to_atoms(pair.coarse()),
            interpolation_to_atoms(pair.fine()),
            interpolation_fine_from_coarse(pair),
            restriction_coarse_from_fine(pair),
            boundary_injection(SpaceKind::atom, na),
            boundary_injection(SpaceKind::qc, pair.coarse().node_count()),
            boundary_injection(SpaceKind::pc, pair.fine().node_count())};
}

std::vector<double> residual_ac(const LinearSystem& system_ac,
                                const std::vector<double>& y_interior) {
    require(system_ac.level == SystemLevel::ac, "residual is defined for the hybrid system");
    require(y_interior.size() == system_ac.rhs.size(), "state has the wrong length");
    return system_ac.matrix.residual(system_ac.rhs, y_interior);
}

EstimatorReport estimate(const NestedMeshPair& pair, const OperatorSet& ops,
                         const LinearSystem& system_ac, const Solution& qc_primal,
                         const Solution& pc_dual) {
    require(qc_primal.frame == pc_dual.frame && qc_primal.frame == system_ac.frame,
            "estimator inputs must share one frame");
    require(qc_primal.interior.size() == pair.coarse().node_count() - 4,
            "qc solution does not match the coarse mesh");
    require(pc_dual.interior.size() == pair.fine().node_count() - 4,
            "pc dual does not match the fine mesh");

    // Hybrid residual at the embedded qc solution.  The boundary carrying
    // part lives in the ac load vector, so only the homogeneous embedding
    // J^a-interior of I^{aq} J^q x enters here.
    const std::vector<double> qc_hom = ops.inject_qc.apply(qc_primal.interior);
    const std::vector<double> atoms_hom = ops.interp_qc_to_atoms.apply(qc_hom);
    const std::vector<double> r_ac = residual_ac(system_ac, interior_of(atoms_hom));

    // Project the residual onto the pc nodes.
    const std::vector<double> r_atoms = ops.inject_atoms.apply(r_ac);
    const std::vector<double> r_pc_full = ops.interp_pc_to_atoms.apply_transpose(r_atoms);

    // Dual weights minus their own qc interpolation.
    const std::vector<double> g_full = ops.inject_pc.apply(pc_dual.interior);
    const std::vector<double> g_coarse = ops.restrict_qc_from_pc.apply(g_full);
    const std::vector<double> g_back = ops.interp_pc_from_qc.apply(g_coarse);

    EstimatorReport report;
    report.dual_pc = pc_dual;
    report.eta_pc.assign(pair.fine().node_count(), 0.0);
    const std::size_t n_int = pc_dual.interior.size();
    double eta = 0.0;
    for (std::size_t i = 0; i < n_int; ++i) {
        const double weight = pc_dual.interior[i] - g_back[i + 2];
        const double term = weight * r_pc_full[i + 2];
        report.eta_pc[i + 2] = term;
        eta += term;
    }
    report.eta = eta;

    // The subtraction is exact at qc repatoms (interpolation weight one), so
    // their contributions vanish identically.
    for (std::size_t s = 2; s + 2 < pair.coarse().node_count(); ++s)
        internal_check(report.eta_pc[pair.anchor(s)] == 0.0,
                       "estimator contribution at a qc repatom must vanish");

    report.eta_qc.assign(pair.coarse().interval_count(), 0.0);
    for (std::size_t j = 0; j + 1 < pair.coarse().node_count(); ++j) {
        double acc = 0.0;
        for (std::size_t t = pair.anchor(j) + 1; t < pair.anchor(j + 1); ++t)
            acc += report.eta_pc[t];
        report.eta_qc[j] = std::abs(acc);
    }
    return report;
}

std::vector<double> frame_lift(const ModelParams& params, const BoundaryValues& bc,
                               const Mesh& mesh, Frame frame) {
    return boundary_vectors(frame_boundary(params, bc, frame), mesh).mesh_vector;
}

Frame choose_frame(const ModelParams& params, const Mesh& mesh,
                   const SpaceTaggedOperator& interp_to_atoms) {
    std::vector<double> r_nodes(mesh.node_count());
    for (std::size_t s = 0; s < mesh.node_count(); ++s)
        r_nodes[s] = well_position(params, mesh.node(s));
    const std::vector<double> interpolated = interp_to_atoms.apply(r_nodes);
    const std::vector<double> reference = reference_field(params);
    for (std::size_t a = 0; a < reference.size(); ++a)
        if (interpolated[a] != reference[a]) return Frame::positions;
    return Frame::displacement;
}

MeshEvaluation evaluate_mesh(const QuadraticEnergy& quad, const Mesh& qc_mesh, double lambda,
                             const GoalFunctional& goal, const BoundaryValues& bc) {
    const ModelParams& params = quad.params();
    require(qc_mesh.M() == params.M, "mesh and parameters disagree on M");
    require(goal.M == params.M, "goal and parameters disagree on M");

    NestedMeshPair pair = refine_pair(qc_mesh, lambda);
    OperatorSet ops = build_operator_set(pair);
    const Frame frame = choose_frame(params, qc_mesh, ops.interp_qc_to_atoms);

    const std::vector<double> qc_lift = frame_lift(params, bc, pair.coarse(), frame);
    const std::vector<double> pc_lift = frame_lift(params, bc, pair.fine(), frame);
    const std::vector<double> ac_lift = ops.interp_qc_to_atoms.apply(qc_lift);

    const LinearSystem system_ac = assemble_system(SystemLevel::ac, frame, quad, nullptr, ac_lift);
    const LinearSystem system_qc =
        assemble_system(SystemLevel::qc, frame, quad, &ops.interp_qc_to_atoms, qc_lift);
    const LinearSystem system_pc =
        assemble_system(SystemLevel::pc, frame, quad, &ops.interp_pc_to_atoms, pc_lift);

    Solution qc_primal = solve(system_qc);

    const std::vector<double> q_full = ops.inject_atoms.apply(goal.interior_vector());
    const std::vector<double> dual_rhs =
        interior_of(ops.interp_pc_to_atoms.apply_transpose(q_full));
    const Solution pc_dual = solve(system_pc.matrix, dual_rhs, frame);

    EstimatorReport report = estimate(pair, ops, system_ac, qc_primal, pc_dual);
    return {frame, std::move(pair), std::move(qc_primal), std::move(report)};
}

} // namespace qcfk
