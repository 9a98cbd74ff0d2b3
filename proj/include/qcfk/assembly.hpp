#pragma once

#include <vector>

#include "qcfk/banded.hpp"
#include "qcfk/mesh.hpp"
#include "qcfk/model.hpp"
#include "qcfk/operators.hpp"
#include "qcfk/spaces.hpp"

namespace qcfk {

// Which clamped quadratic problem a system represents: the fully atomistic
// chain, the atomistic/continuum hybrid on all atoms, or the hybrid reduced
// to a coarse (qc) or partially refined (pc) mesh.
enum class SystemLevel { atomistic, ac, qc, pc };

// Interior stiffness matrix and load vector of one clamped problem,
// min_x 1/2 x^T A x - f^T x, in the stated frame.
struct LinearSystem {
    SystemLevel level;
    Frame frame;
    Space space;
    BandedMatrix<double> matrix;
    std::vector<double> rhs;
};

struct Solution {
    std::vector<double> interior;
    Frame frame;
    double residual_norm = 0.0; // max-norm of f - A x after refinement
    double scale = 0.0;         // backward-error denominator the residual was checked against
};

// Boundary values expressed in the given frame; displacement frame measures
// each clamped atom from its own well.
BoundaryValues frame_boundary(const ModelParams& params, const BoundaryValues& bc, Frame frame);

// T = I^T H I over mesh nodes.  H couples atoms at distance <= 2 and the
// interpolation is local to adjacent intervals, so T again has half
// bandwidth 2.
BandedMatrix<double> project_hessian(const BandedMatrix<double>& hessian,
                                     const SpaceTaggedOperator& interp);

// Assemble the interior system at a mesh level.  `interp` maps mesh nodes to
// atoms and must be null exactly for the atomistic and ac levels;
// `bc_lift_nodes` is the boundary lift in the node space of the level (all
// interior entries zero), in the requested frame.
LinearSystem assemble_system(SystemLevel level, Frame frame, const QuadraticEnergy& quad,
                             const SpaceTaggedOperator* interp,
                             const std::vector<double>& bc_lift_nodes);

// Banded Cholesky with one step of iterative refinement; throws if the
// backward error stays above 1e-12 after a second refinement pass.
Solution solve(const BandedMatrix<double>& matrix, const std::vector<double>& rhs, Frame frame);
Solution solve(const LinearSystem& system);

// Full node vector from an interior solution plus the boundary lift.
std::vector<double> lift(const std::vector<double>& interior,
                         const std::vector<double>& bc_lift_nodes);

// Interior slice of a full node vector (drops two slots at each end).
std::vector<double> interior_of(const std::vector<double>& full);

} // namespace qcfk
