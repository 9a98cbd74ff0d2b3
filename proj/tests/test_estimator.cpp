#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "qcfk/estimator.hpp"
#include "qcfk/mesh.hpp"
#include "qcfk/model.hpp"
#include "qcfk/oracle.hpp"
#include "support/dense.hpp"

using namespace qcfk;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelParams params16() {
    ModelParams p;
    p.M = 16;
    return p;
}

Mesh initial16(const ModelParams& p) {
    return initial_mesh(p, Partition::with_block(p.M, -1, 2));
}

// The systems evaluate_mesh assembles, rebuilt step by step so tests can
// perturb the inputs of estimate().
struct Pipeline {
    NestedMeshPair pair;
    OperatorSet ops;
    LinearSystem system_ac;
    Solution qc_primal;
    Solution pc_dual;
};

Pipeline build_pipeline(const QuadraticEnergy& quad, const Mesh& mesh, double lambda,
                        const GoalFunctional& goal, const BoundaryValues& bc, Frame frame) {
    const ModelParams& p = quad.params();
    NestedMeshPair pair = refine_pair(mesh, lambda);
    OperatorSet ops = build_operator_set(pair);
    const std::vector<double> qc_lift = frame_lift(p, bc, pair.coarse(), frame);
    const std::vector<double> pc_lift = frame_lift(p, bc, pair.fine(), frame);
    const std::vector<double> ac_lift = ops.interp_qc_to_atoms.apply(qc_lift);
    LinearSystem system_ac = assemble_system(SystemLevel::ac, frame, quad, nullptr, ac_lift);
    const LinearSystem system_qc =
        assemble_system(SystemLevel::qc, frame, quad, &ops.interp_qc_to_atoms, qc_lift);
    const LinearSystem system_pc =
        assemble_system(SystemLevel::pc, frame, quad, &ops.interp_pc_to_atoms, pc_lift);
    Solution qc_primal = solve(system_qc);
    const std::vector<double> dual_rhs =
        interior_of(ops.interp_pc_to_atoms.apply_transpose(ops.inject_atoms.apply(goal.interior_vector())));
    Solution pc_dual = solve(system_pc.matrix, dual_rhs, frame);
    return {std::move(pair), std::move(ops), std::move(system_ac), std::move(qc_primal),
            std::move(pc_dual)};
}

} // namespace

TEST_CASE("goal functional basics") {
    const GoalFunctional goal = dislocation_goal(16);
    const std::vector<double> q = goal.interior_vector();
    CHECK(q.size() == 28);
    CHECK(q[atom_slot(0, 16) - 2] == -1.0);
    CHECK(q[atom_slot(1, 16) - 2] == 1.0);

    std::vector<double> field(32, 0.0);
    field[atom_slot(0, 16)] = 2.5;
    field[atom_slot(1, 16)] = 4.0;
    CHECK(goal.evaluate_full(field) == doctest::Approx(1.5));
    CHECK(goal.evaluate_interior(interior_of(field)) == doctest::Approx(1.5));

    const GoalFunctional clamped_atom{16, {{-15, 1.0}}};
    CHECK_THROWS_AS(clamped_atom.validate(), std::invalid_argument);
    const GoalFunctional no_terms{16, {}};
    CHECK_THROWS_AS(no_terms.validate(), std::invalid_argument);
}

TEST_CASE("identical meshes give a zero estimate") {
    const ModelParams p = params16();
    const Partition part = Partition::with_block(p.M, -1, 2);
    const QuadraticEnergy quad(p, part, PhantomPolicy::drop);
    const GoalFunctional goal = dislocation_goal(p.M);
    const MeshEvaluation eval = evaluate_mesh(quad, initial16(p), 1.0, goal, lattice_ends(p));
    CHECK(eval.report.eta == 0.0);
    for (double v : eval.report.eta_pc) CHECK(v == 0.0);
    for (double v : eval.report.eta_qc) CHECK(v == 0.0);
}

TEST_CASE("node contributions sum to the estimate") {
    const ModelParams p = params16();
    const Partition part = Partition::with_block(p.M, -1, 2);
    const QuadraticEnergy quad(p, part, PhantomPolicy::drop);
    const GoalFunctional goal = dislocation_goal(p.M);
    const MeshEvaluation eval = evaluate_mesh(quad, initial16(p), 2.0, goal, lattice_ends(p));

    double total = 0.0;
    for (double v : eval.report.eta_pc) total += v;
    CHECK(std::abs(total - eval.report.eta) <= 1e-12 * std::abs(eval.report.eta));

    // Repatom slots contribute nothing, and single-atom intervals have no
    // interior fine nodes to contribute.
    for (std::size_t s = 2; s + 2 < eval.pair.coarse().node_count(); ++s)
        CHECK(eval.report.eta_pc[eval.pair.anchor(s)] == 0.0);
    for (std::size_t j = 0; j < eval.pair.coarse().interval_count(); ++j)
        if (eval.pair.coarse().nu(j) == 1) CHECK(eval.report.eta_qc[j] == 0.0);

    // The interval indicators bound the estimate from above.
    double sum_abs = 0.0;
    for (double v : eval.report.eta_qc) sum_abs += v;
    CHECK(sum_abs >= std::abs(eval.report.eta) * (1.0 - 1e-12));
}

TEST_CASE("full refinement reproduces the exact goal error") {
    const ModelParams p = params16();
    const Partition part = Partition::with_block(p.M, -1, 2);
    const QuadraticEnergy quad(p, part, PhantomPolicy::drop);
    const GoalFunctional goal = dislocation_goal(p.M);
    const BoundaryValues bc = lattice_ends(p);
    const Mesh mesh = initial16(p);

    const MeshEvaluation eval = evaluate_mesh(quad, mesh, kInf, goal, bc);
    const GoalErrorBreakdown exact = exact_goal_error(quad, mesh, eval.qc_primal, goal, bc);
    CHECK(std::abs(eval.report.eta - exact.primal_route) <= 1e-9 * std::abs(exact.primal_route));
}

TEST_CASE("adding a coarse-interpolated field to the dual changes nothing") {
    const ModelParams p = params16();
    const Partition part = Partition::with_block(p.M, -1, 2);
    const QuadraticEnergy quad(p, part, PhantomPolicy::drop);
    const GoalFunctional goal = dislocation_goal(p.M);
    const BoundaryValues bc = lattice_ends(p);
    const Mesh mesh = initial16(p);

    Pipeline pipe = build_pipeline(quad, mesh, 2.0, goal, bc, Frame::positions);
    const EstimatorReport base =
        estimate(pipe.pair, pipe.ops, pipe.system_ac, pipe.qc_primal, pipe.pc_dual);

    double amp = 0.0;
    for (double v : pipe.pc_dual.interior) amp = std::max(amp, std::abs(v));
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(-amp, amp);
    std::vector<double> z(pipe.pair.coarse().node_count() - 4);
    for (double& v : z) v = dist(rng);

    const std::vector<double> z_pc =
        interior_of(pipe.ops.interp_pc_from_qc.apply(pipe.ops.inject_qc.apply(z)));
    Solution shifted = pipe.pc_dual;
    for (std::size_t i = 0; i < shifted.interior.size(); ++i) shifted.interior[i] += z_pc[i];

    const EstimatorReport moved =
        estimate(pipe.pair, pipe.ops, pipe.system_ac, pipe.qc_primal, shifted);
    CHECK(std::abs(moved.eta - base.eta) < 1e-10 * std::abs(base.eta) + 1e-14);
}

TEST_CASE("both frames give the same estimate") {
    const ModelParams p = params16();
    const Partition part = Partition::with_block(p.M, -1, 2);
    const QuadraticEnergy quad(p, part, PhantomPolicy::drop);
    const GoalFunctional goal = dislocation_goal(p.M);
    const BoundaryValues bc = lattice_ends(p);
    const Mesh mesh = initial16(p);

    Pipeline pos = build_pipeline(quad, mesh, 2.0, goal, bc, Frame::positions);
    const EstimatorReport rp = estimate(pos.pair, pos.ops, pos.system_ac, pos.qc_primal, pos.pc_dual);
    Pipeline dis = build_pipeline(quad, mesh, 2.0, goal, bc, Frame::displacement);
    const EstimatorReport rd = estimate(dis.pair, dis.ops, dis.system_ac, dis.qc_primal, dis.pc_dual);
    CHECK(std::abs(rp.eta - rd.eta) <= 1e-10 * std::abs(rd.eta) + 1e-14);
}

TEST_CASE("frame choice requires bitwise reproduction of the wells") {
    ModelParams big;
    big.M = 2053;
    const Mesh dyadic = initial_mesh(big, Partition::with_block(big.M, -1, 2));
    CHECK(choose_frame(big, dyadic, interpolation_to_atoms(dyadic)) == Frame::displacement);

    // With the dislocation strictly inside an interval the wells are not in
    // the interpolation range at all.
    const ModelParams p = params16();
    const Mesh bad(MeshLevel::qc, p.M, {-15, -14, 0, 2, 15, 16});
    CHECK(choose_frame(p, bad, interpolation_to_atoms(bad)) == Frame::positions);
}

TEST_CASE("estimate validates its inputs") {
    const ModelParams p = params16();
    const Partition part = Partition::with_block(p.M, -1, 2);
    const QuadraticEnergy quad(p, part, PhantomPolicy::drop);
    const GoalFunctional goal = dislocation_goal(p.M);
    const BoundaryValues bc = lattice_ends(p);

    Pipeline pipe = build_pipeline(quad, initial16(p), 2.0, goal, bc, Frame::positions);
    Solution wrong_frame = pipe.pc_dual;
    wrong_frame.frame = Frame::displacement;
    CHECK_THROWS_AS(estimate(pipe.pair, pipe.ops, pipe.system_ac, pipe.qc_primal, wrong_frame),
                    std::invalid_argument);
    Solution short_dual = pipe.pc_dual;
    short_dual.interior.pop_back();
    CHECK_THROWS_AS(estimate(pipe.pair, pipe.ops, pipe.system_ac, pipe.qc_primal, short_dual),
                    std::invalid_argument);
}
