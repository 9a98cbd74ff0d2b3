#include "qcfk/oracle.hpp"

#include <cmath>

#include "qcfk/checks.hpp"

namespace qcfk {

namespace {

std::vector<long double> widen(const std::vector<double>& v) {
    return std::vector<long double>(v.begin(), v.end());
}

// One Cholesky pass plus one refinement step; enough to push the residual to
// the long double noise floor for these well-conditioned systems.
std::vector<long double> refined_solve(const BandedCholesky<long double>& factor,
                                       const BandedMatrix<long double>& matrix,
                                       const std::vector<long double>& rhs) {
    std::vector<long double> x = factor.solve(rhs);
    const std::vector<long double> r = matrix.residual(rhs, x);
    const std::vector<long double> dx = factor.solve(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    return x;
}

// Interior atom field of the homogeneous embedding I^{aq} J^q x.
std::vector<double> embedded_interior(const Mesh& qc_mesh, const SpaceTaggedOperator& interp,
                                      const std::vector<double>& qc_interior) {
    std::vector<double> full(qc_mesh.node_count(), 0.0);
    for (std::size_t i = 0; i < qc_interior.size(); ++i) full[i + 2] = qc_interior[i];
    return interior_of(interp.apply(full));
}

double norm_inf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

GoalErrorBreakdown exact_goal_error(const QuadraticEnergy& quad, const Mesh& qc_mesh,
                                    const Solution& qc_primal, const GoalFunctional& goal,
                                    const BoundaryValues& bc) {
    const ModelParams& params = quad.params();
    require(qc_mesh.M() == params.M && goal.M == params.M, "inputs disagree on M");
    require(qc_primal.interior.size() == qc_mesh.node_count() - 4,
            "qc solution does not match the mesh");

    const SpaceTaggedOperator interp = interpolation_to_atoms(qc_mesh);
    const std::vector<double> qc_lift = frame_lift(params, bc, qc_mesh, qc_primal.frame);
    const std::vector<double> ac_lift = interp.apply(qc_lift);
    const LinearSystem system_ac =
        assemble_system(SystemLevel::ac, qc_primal.frame, quad, nullptr, ac_lift);

    const BandedMatrix<long double> matrix = system_ac.matrix.cast<long double>();
    const BandedCholesky<long double> factor(matrix);
    const std::vector<long double> f = widen(system_ac.rhs);
    const std::vector<long double> q = widen(goal.interior_vector());

    const std::vector<long double> y_ac = refined_solve(factor, matrix, f);
    const std::vector<long double> g_ac = refined_solve(factor, matrix, q);
    const std::vector<long double> v = widen(embedded_interior(qc_mesh, interp, qc_primal.interior));

    long double primal = 0.0L;
    for (std::size_t i = 0; i < q.size(); ++i) primal += q[i] * (y_ac[i] - v[i]);

    const std::vector<long double> r = matrix.residual(f, v);
    long double dual = 0.0L;
    for (std::size_t i = 0; i < r.size(); ++i) dual += g_ac[i] * r[i];

    internal_check(std::abs(static_cast<double>(primal - dual)) <=
                       1e-10 * std::abs(static_cast<double>(primal)) + 1e-15,
                   "dual identity routes disagree");
    return {static_cast<double>(primal), static_cast<double>(dual)};
}

Solution solve_full(SystemLevel level, const ModelParams& params, const Partition& part,
                    const BoundaryValues& bc) {
    require(level == SystemLevel::atomistic || level == SystemLevel::ac,
            "full solves exist for the atomistic and hybrid levels");
    const QuadraticEnergy quad(
        params, level == SystemLevel::atomistic ? Partition::all_atomistic(params.M) : part,
        PhantomPolicy::drop);
    const BoundaryValues fb = frame_boundary(params, bc, Frame::displacement);
    std::vector<double> lift_atoms(static_cast<std::size_t>(params.atom_count()), 0.0);
    lift_atoms[0] = fb.l1;
    lift_atoms[1] = fb.l2;
    lift_atoms[lift_atoms.size() - 2] = fb.r2;
    lift_atoms[lift_atoms.size() - 1] = fb.r1;
    Solution sol = solve(assemble_system(level, Frame::displacement, quad, nullptr, lift_atoms));
    const std::vector<double> reference = reference_field(params);
    for (std::size_t i = 0; i < sol.interior.size(); ++i) sol.interior[i] += reference[i + 2];
    sol.frame = Frame::positions;
    return sol;
}

OracleReport oracle_report(const ModelParams& params, const Partition& part, const Mesh& qc_mesh,
                           const Solution& qc_primal, const GoalFunctional& goal,
                           const BoundaryValues& bc) {
    OracleReport report{solve_full(SystemLevel::atomistic, params, part, bc),
                        solve_full(SystemLevel::ac, params, part, bc), 0.0, 0.0, 0.0};
    const double q_a = goal.evaluate_interior(report.y_atomistic.interior);
    const double q_ac = goal.evaluate_interior(report.y_ac.interior);
    report.modeling_error = std::abs(q_a - q_ac);
    const QuadraticEnergy quad(params, part, PhantomPolicy::drop);
    report.coarsening_error =
        std::abs(exact_goal_error(quad, qc_mesh, qc_primal, goal, bc).primal_route);
    report.triangle_bound = report.modeling_error + report.coarsening_error;
    return report;
}

MeshDiagnostics mesh_diagnostics(const QuadraticEnergy& quad, const Mesh& qc_mesh,
                                 const Solution& qc_primal, const GoalFunctional& goal,
                                 const BoundaryValues& bc) {
    const ModelParams& params = quad.params();
    const SpaceTaggedOperator interp = interpolation_to_atoms(qc_mesh);
    const std::vector<double> qc_lift = frame_lift(params, bc, qc_mesh, qc_primal.frame);
    const std::vector<double> ac_lift = interp.apply(qc_lift);
    const LinearSystem system_ac =
        assemble_system(SystemLevel::ac, qc_primal.frame, quad, nullptr, ac_lift);

    const std::vector<double> v = embedded_interior(qc_mesh, interp, qc_primal.interior);
    const std::vector<double> r_ac = residual_ac(system_ac, v);
    const SpaceTaggedOperator inject =
        boundary_injection(SpaceKind::atom, static_cast<std::size_t>(params.atom_count()));
    const std::vector<double> projected = interior_of(interp.apply_transpose(inject.apply(r_ac)));

    return {norm_inf(projected), norm_inf(system_ac.rhs),
            exact_goal_error(quad, qc_mesh, qc_primal, goal, bc)};
}

} // namespace qcfk
