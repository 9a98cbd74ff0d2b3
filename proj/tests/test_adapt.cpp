#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qcfk/adapt.hpp"
#include "qcfk/estimator.hpp"
#include "qcfk/mesh.hpp"
#include "qcfk/model.hpp"

using namespace qcfk;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

EstimatorReport report_with(std::vector<double> eta_qc) {
    EstimatorReport r;
    r.eta_qc = std::move(eta_qc);
    return r;
}

} // namespace

TEST_CASE("adapt config validation") {
    AdaptConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.lambda = kInf;
    CHECK_NOTHROW(cfg.validate());

    AdaptConfig bad;
    bad.tau_gl = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = AdaptConfig{};
    bad.tau_fac = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = AdaptConfig{};
    bad.lambda = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = AdaptConfig{};
    bad.max_iterations = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("marking selects within a factor of the peak") {
    const Mesh mesh(MeshLevel::qc, 8, {-7, -6, -1, 2, 7, 8}); // nu = 1, 5, 3, 5, 1
    // Peak 1.0 on interval 1; threshold 0.1 with tau_fac = 10.
    CHECK(mark(report_with({0.0, 1.0, 0.05, 0.2, 0.0}), 10.0, mesh) ==
          std::vector<std::size_t>{1, 3});
    // Single-atom intervals are skipped even above the threshold.
    CHECK(mark(report_with({0.5, 1.0, 0.0, 0.0, 0.5}), 10.0, mesh) ==
          std::vector<std::size_t>{1});
    // An all-zero indicator marks nothing, which signals a stall.
    CHECK(mark(report_with({0.0, 0.0, 0.0, 0.0, 0.0}), 10.0, mesh).empty());
}

TEST_CASE("coarsenable range skips the boundary and block intervals") {
    ModelParams p;
    p.M = 2053;
    const Partition part = Partition::with_block(p.M, -1, 2);
    const Mesh start = initial_mesh(p, part);
    CHECK(coarsenable_nu_range(start, part) == std::pair{2048, 2048});

    const Mesh split = bisect(start, {1});
    CHECK(coarsenable_nu_range(split, part) == std::pair{1024, 2048});

    ModelParams tight;
    tight.M = 5; // padding touches the mandatory ends, nothing left to coarsen
    const Partition tight_part = Partition::with_block(tight.M, -1, 2);
    CHECK(coarsenable_nu_range(initial_mesh(tight, tight_part), tight_part) == std::pair{0, 0});
}

TEST_CASE("adaptive loop drives the estimate below the tolerance") {
    ModelParams p;
    p.M = 16;
    const Partition part = Partition::with_block(p.M, -1, 2);
    const GoalFunctional goal = dislocation_goal(p.M);
    AdaptConfig cfg;
    cfg.tau_gl = 1e-4;

    const RunResult result =
        run_adaptive(p, part, initial_mesh(p, part), goal, cfg, lattice_ends(p));
    CHECK(result.status == RunStatus::converged);
    REQUIRE(!result.rows.empty());

    for (std::size_t k = 0; k < result.rows.size(); ++k) {
        const TraceRow& row = result.rows[k];
        CHECK(row.iteration == static_cast<int>(k) + 1);
        CHECK(row.dof == row.mesh.node_count());
        CHECK(coarsenable_nu_range(row.mesh, part) == std::pair{row.min_nu, row.max_nu});
        REQUIRE(row.exact_error.has_value());
        CHECK(*row.exact_error > 0.0);
        double naive = 0.0;
        for (double v : row.eta_qc) naive += v;
        CHECK(row.sum_eta_qc == naive);
        const bool last = k + 1 == result.rows.size();
        CHECK((std::abs(row.eta) <= cfg.tau_gl) == last);
        if (!last) {
            // Meshes are nested: every repatom survives refinement.
            const auto& next = result.rows[k + 1].mesh.repatoms();
            for (int node : row.mesh.repatoms())
                CHECK(std::find(next.begin(), next.end(), node) != next.end());
            CHECK(result.rows[k + 1].dof > row.dof);
        }
    }
}

TEST_CASE("iteration cap reports honestly") {
    ModelParams p;
    p.M = 16;
    const Partition part = Partition::with_block(p.M, -1, 2);
    AdaptConfig cfg;
    cfg.tau_gl = 1e-12;
    cfg.max_iterations = 2;
    cfg.compute_exact_error = false;

    const RunResult result = run_adaptive(p, part, initial_mesh(p, part), dislocation_goal(p.M),
                                          cfg, lattice_ends(p));
    CHECK(result.status == RunStatus::iteration_limit);
    CHECK(result.rows.size() == 2);
    CHECK(!result.rows.back().exact_error.has_value());
}
