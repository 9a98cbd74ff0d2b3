#include "qcfk/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcfk/checks.hpp"

namespace qcfk {

namespace {

SpaceKind interior_kind(SpaceKind full) {
    switch (full) {
    case SpaceKind::atom: return SpaceKind::atom_interior;
    case SpaceKind::qc: return SpaceKind::qc_interior;
    case SpaceKind::pc: return SpaceKind::pc_interior;
    default: throw std::invalid_argument("expected a full space kind");
    }
}

double norm_inf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double row_sum_norm(const BandedMatrix<double>& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= a.half_bandwidth(); ++k) {
            if (i >= k) s += std::abs(a.get(i, i - k));
            if (k > 0 && i + k < a.size()) s += std::abs(a.get(i, i + k));
        }
        m = std::max(m, s);
    }
    return m;
}

} // namespace

BoundaryValues frame_boundary(const ModelParams& params, const BoundaryValues& bc, Frame frame) {
    if (frame == Frame::positions) return bc;
    return {bc.l1 - well_position(params, -params.M + 1),
            bc.l2 - well_position(params, -params.M + 2),
            bc.r2 - well_position(params, params.M - 1),
            bc.r1 - well_position(params, params.M)};
}

BandedMatrix<double> project_hessian(const BandedMatrix<double>& hessian,
                                     const SpaceTaggedOperator& interp) {
    const std::size_t na = hessian.size();
    require(interp.range().dim == na, "interpolation range must match the atom count");
    const std::size_t n = interp.domain().dim;
    const std::size_t hb = hessian.half_bandwidth();
    const auto cols = interp.columns();
    BandedMatrix<double> projected(n, 2);
    std::vector<double> scratch(na, 0.0);
    std::vector<unsigned char> dirty(na, 0);
    std::vector<std::size_t> touched;
    for (std::size_t c1 = 0; c1 < n; ++c1) {
        for (const OperatorEntry& e : cols[c1]) {
            const std::size_t a = e.col; // row index in column-major storage
            for (std::size_t k = 0; k <= hb; ++k) {
                if (a >= k) {
                    const std::size_t r = a - k;
                    if (!dirty[r]) { dirty[r] = 1; touched.push_back(r); }
                    scratch[r] += hessian.get(r, a) * e.value;
                }
                if (k > 0 && a + k < na) {
                    const std::size_t r = a + k;
                    if (!dirty[r]) { dirty[r] = 1; touched.push_back(r); }
                    scratch[r] += hessian.get(r, a) * e.value;
                }
            }
        }
        for (std::size_t c2 = c1; c2 < n && c2 <= c1 + 2; ++c2) {
            double dot = 0.0;
            for (const OperatorEntry& e : cols[c2]) dot += e.value * scratch[e.col];
            projected.set(c2, c1, dot);
        }
        if (c1 + 3 < n) {
            double spill = 0.0;
            for (const OperatorEntry& e : cols[c1 + 3]) spill += e.value * scratch[e.col];
            internal_check(spill == 0.0, "projected Hessian exceeds half bandwidth 2");
        }
        for (std::size_t r : touched) { scratch[r] = 0.0; dirty[r] = 0; }
        touched.clear();
    }
    return projected;
}

LinearSystem assemble_system(SystemLevel level, Frame frame, const QuadraticEnergy& quad,
                             const SpaceTaggedOperator* interp,
                             const std::vector<double>& bc_lift_nodes) {
    const std::size_t na = quad.hessian().size();
    SpaceKind node_kind = SpaceKind::atom;
    if (level == SystemLevel::qc || level == SystemLevel::pc) {
        require(interp != nullptr, "mesh levels need an interpolation operator");
        require(interp->range().dim == na, "interpolation range must match the atom count");
        node_kind = level == SystemLevel::qc ? SpaceKind::qc : SpaceKind::pc;
        require(interp->domain().kind == node_kind, "interpolation domain has the wrong level");
    } else {
        require(interp == nullptr, "atom levels take no interpolation operator");
    }
    const std::size_t n = interp ? interp->domain().dim : na;
    require(bc_lift_nodes.size() == n, "boundary lift has the wrong length");
    // The ac lift is itself an interpolated ramp, so only the other levels
    // carry the zero-interior structure.
    if (level != SystemLevel::ac)
        for (std::size_t i = 2; i + 2 < n; ++i)
            require(bc_lift_nodes[i] == 0.0, "boundary lift must vanish at interior nodes");

    const std::vector<double> atom_lift = interp ? interp->apply(bc_lift_nodes) : bc_lift_nodes;
    const std::vector<double> grad = quad.gradient(frame, atom_lift);
    const std::vector<double> node_grad = interp ? interp->apply_transpose(grad) : grad;
    std::vector<double> rhs(n - 4);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -node_grad[i + 2];

    BandedMatrix<double> full =
        interp ? project_hessian(quad.hessian(), *interp) : quad.hessian();
    return {level, frame, Space{interior_kind(node_kind), n - 4},
            full.principal_block(2, n - 4), std::move(rhs)};
}

Solution solve(const BandedMatrix<double>& matrix, const std::vector<double>& rhs, Frame frame) {
    require(matrix.size() == rhs.size(), "system and rhs sizes disagree");
    const BandedCholesky<double> chol(matrix);
    std::vector<double> x = chol.solve(rhs);
    const auto refine = [&] {
        const std::vector<double> r = matrix.residual(rhs, x);
        const std::vector<double> dx = chol.solve(r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    };
    refine();
    const double matrix_norm = row_sum_norm(matrix);
    double residual_norm = norm_inf(matrix.residual(rhs, x));
    double scale = matrix_norm * norm_inf(x) + norm_inf(rhs);
    if (scale == 0.0) scale = 1.0;
    if (residual_norm > 1e-12 * scale) {
        refine();
        residual_norm = norm_inf(matrix.residual(rhs, x));
        scale = matrix_norm * norm_inf(x) + norm_inf(rhs);
        if (scale == 0.0) scale = 1.0;
        if (residual_norm > 1e-12 * scale)
            throw std::runtime_error("linear solve stalled above the 1e-12 backward error bound");
    }
    return {std::move(x), frame, residual_norm, scale};
}

Solution solve(const LinearSystem& system) { return solve(system.matrix, system.rhs, system.frame); }

std::vector<double> lift(const std::vector<double>& interior,
                         const std::vector<double>& bc_lift_nodes) {
    require(interior.size() + 4 == bc_lift_nodes.size(), "interior and lift sizes disagree");
    std::vector<double> full = bc_lift_nodes;
    // += rather than =, so lifting against the interpolated ac ramp works too.
    for (std::size_t i = 0; i < interior.size(); ++i) full[i + 2] += interior[i];
    return full;
}

std::vector<double> interior_of(const std::vector<double>& full) {
    require(full.size() >= 4, "vector too short to have an interior");
    return std::vector<double>(full.begin() + 2, full.end() - 2);
}

} // namespace qcfk
