#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "qcfk/model.hpp"
#include "support/dense.hpp"
#include "support/fd.hpp"

using namespace qcfk;
using testsupport::DenseMatrix;

namespace {

ModelParams small_params(int M) {
    ModelParams p;
    p.M = M;
    return p;
}

} // namespace

TEST_CASE("parameter validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.k12() == doctest::Approx(6.0));

    ModelParams bad = p;
    bad.k0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.k1 = 1.0;
    bad.k2 = -2.0; // k1 + 2 k2 = -3 < 2 |k2|
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.M = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("wells skip one site across the dislocation") {
    ModelParams p = small_params(4);
    CHECK(well_position(p, 0) == -1.0);
    CHECK(well_position(p, 1) == 1.0);
    CHECK(well_position(p, -3) == -4.0);
    CHECK(well_position(p, 4) == 4.0);

    const std::vector<double> r = reference_field(p);
    CHECK(r.size() == 8);
    CHECK(r[atom_slot(-3, p.M)] == -4.0);
    CHECK(r[atom_slot(0, p.M)] == -1.0);
    CHECK(r[atom_slot(1, p.M)] == 1.0);
    CHECK(r[atom_slot(4, p.M)] == 4.0);
}

TEST_CASE("atom energies at the well configuration") {
    // At the wells every spring that does not straddle the dislocation is
    // relaxed; the straddling NN and NNN springs are stretched by exactly a0.
    ModelParams p = small_params(4);
    const std::vector<double> wells = reference_field(p);

    CHECK(atom_energy_atomistic(p, wells, 0) ==
          doctest::Approx(0.25 * p.k1 + 0.25 * p.k2)); // NN 0-1 quarter + NNN 0-2 quarter
    CHECK(atom_energy_atomistic(p, wells, 1) == doctest::Approx(0.25 * p.k1 + 0.25 * p.k2));
    CHECK(atom_energy_atomistic(p, wells, -3) == doctest::Approx(0.0));
    CHECK(atom_energy_continuum(p, wells, 0) == doctest::Approx(0.25 * p.k12()));

    // Whole-chain sum: one NN and two NNN springs carry stretch a0.
    const double total = energy_ac(p, Partition::all_atomistic(p.M), wells);
    CHECK(total == doctest::Approx(0.5 * p.k1 + p.k2));
    const double total_c = energy_ac(p, Partition::all_continuum(p.M), wells);
    CHECK(total_c == doctest::Approx(0.5 * p.k12()));
}

TEST_CASE("partition classification") {
    Partition part = Partition::with_block(8, -1, 2);
    CHECK(part.is_atomistic(-1));
    CHECK(part.is_atomistic(2));
    CHECK(!part.is_atomistic(-2));
    CHECK(!part.is_atomistic(3));
    CHECK(!Partition::all_continuum(8).has_block());
    CHECK(Partition::all_atomistic(8).is_atomistic(-7));
    CHECK_THROWS_AS(Partition::with_block(8, 2, -1), std::invalid_argument);
    CHECK_THROWS_AS(Partition::with_block(8, -20, 2), std::invalid_argument);
}

TEST_CASE("quadratic energy matches the atom-wise sums") {
    ModelParams p = small_params(8);
    std::mt19937 rng(2026);
    const std::vector<double> wells = reference_field(p);

    for (const Partition& part : {Partition::all_atomistic(p.M), Partition::all_continuum(p.M),
                                  Partition::with_block(p.M, -1, 2)}) {
        QuadraticEnergy quad(p, part, PhantomPolicy::drop);
        for (int trial = 0; trial < 20; ++trial) {
            const std::vector<double> y = testsupport::random_point(rng, wells, 0.5);
            const double direct = energy_ac(p, part, y);
            CHECK(quad.value_at(y) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("gradient and hessian against finite differences") {
    ModelParams p = small_params(8);
    const Partition part = Partition::with_block(p.M, -1, 2);
    QuadraticEnergy quad(p, part, PhantomPolicy::drop);
    const auto field = [&](const std::vector<double>& y) { return energy_ac(p, part, y); };

    std::mt19937 rng(7);
    const std::vector<double> wells = reference_field(p);
    const double h = 1e-5;

    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<double> y = testsupport::random_point(rng, wells, 0.5);
        const std::vector<double> g = quad.gradient_at(y);
        const std::vector<double> g_fd = testsupport::fd_gradient(field, y, h);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(g[i] == doctest::Approx(g_fd[i]).epsilon(1e-6));
    }

    const DenseMatrix h_fd = testsupport::fd_hessian(field, wells, h);
    const DenseMatrix h_quad = testsupport::from_banded(quad.hessian());
    CHECK(testsupport::max_abs_diff(h_fd, h_quad) < 1e-5);
}

TEST_CASE("displacement frame reproduces the position-frame gradient") {
    ModelParams p = small_params(8);
    const Partition part = Partition::with_block(p.M, -1, 2);
    QuadraticEnergy quad(p, part, PhantomPolicy::drop);
    const std::vector<double> r = quad.reference();

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    std::vector<double> d(r.size());
    for (double& v : d) v = dist(rng);

    std::vector<double> y = r;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += d[i];

    const std::vector<double> g_pos = quad.gradient(Frame::positions, y);
    const std::vector<double> g_dis = quad.gradient(Frame::displacement, d);
    CHECK(testsupport::max_abs_diff(g_pos, g_dis) < 1e-12);
}

TEST_CASE("clamping phantoms only changes clamped-atom entries") {
    ModelParams p = small_params(8);
    const Partition part = Partition::all_atomistic(p.M);
    QuadraticEnergy drop(p, part, PhantomPolicy::drop);
    QuadraticEnergy clamp(p, part, PhantomPolicy::clamp);

    const DenseMatrix hd = testsupport::from_banded(drop.hessian());
    const DenseMatrix hc = testsupport::from_banded(clamp.hessian());
    const std::size_t n = hd.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j && (i < 2 || i >= n - 2)) continue; // clamped slots may differ
            CHECK(hd.at(i, j) == hc.at(i, j));
        }
    }

    std::mt19937 rng(13);
    const std::vector<double> y = testsupport::random_point(rng, reference_field(p), 0.5);
    const std::vector<double> gd = drop.gradient_at(y);
    const std::vector<double> gc = clamp.gradient_at(y);
    for (std::size_t i = 2; i + 2 < n; ++i) CHECK(gd[i] == gc[i]);
}
