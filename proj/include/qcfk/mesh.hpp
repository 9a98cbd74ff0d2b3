#pragma once

#include <vector>

#include "qcfk/model.hpp"
#include "qcfk/operators.hpp"
#include "qcfk/spaces.hpp"

namespace qcfk {

// qc is the coarse working mesh, pc the partial refinement of it that the
// error estimator compares against.
enum class MeshLevel { qc, pc };

// A mesh is a strictly increasing list of repatoms (chain atom indices).
// The first two are always -M+1, -M+2 and the last two M-1, M, so the
// clamped atoms are repatoms on every mesh and interior spaces are obtained
// by dropping two slots at each end.
class Mesh {
public:
    Mesh(MeshLevel level, int M, std::vector<int> repatoms);

    MeshLevel level() const { return level_; }
    int M() const { return M_; }
    std::size_t node_count() const { return repatoms_.size(); }
    std::size_t interval_count() const { return repatoms_.size() - 1; }
    const std::vector<int>& repatoms() const { return repatoms_; }
    int node(std::size_t s) const { return repatoms_[s]; }
    int nu(std::size_t interval) const;
    bool fully_refined() const { return node_count() == static_cast<std::size_t>(2 * M_); }

    // Symmetric label of node s; labels run j = -N+1 .. N over 2N nodes,
    // and interval j spans [node j, node j+1].
    int node_label(std::size_t s) const;

    Space space() const;
    Space interior_space() const;

private:
    MeshLevel level_;
    int M_;
    std::vector<int> repatoms_;
};

// Mesh with only the mandatory boundary repatoms plus the atomistic block of
// `part` padded by two repatoms on each side, as the adaptive loop starts
// from.  Requires the padding to fit strictly inside the boundary repatoms.
Mesh initial_mesh(const ModelParams& params, const Partition& part);

// Insert the midpoint node at l_j + floor(nu_j/2) of every marked interval.
// Marked intervals must satisfy nu >= 2.
Mesh bisect(const Mesh& mesh, const std::vector<std::size_t>& marked_intervals);

// Chunk widths an interval of nu atoms splits into: about lambda chunks of
// width nu / lambda, clipped to at least one atom each, via an
// accumulate-and-round sweep (widths differ by at most one atom).
std::vector<int> partial_refine_widths(int nu, double lambda);

// Split every interval per partial_refine_widths: lambda = 1 leaves the mesh
// unchanged, lambda = infinity refines down to single atoms.
Mesh partial_refine(const Mesh& mesh, double lambda);

// A qc mesh together with its partial refinement; anchor(s) is the fine node
// index holding coarse node s.
class NestedMeshPair {
public:
    NestedMeshPair(Mesh coarse, Mesh fine);

    const Mesh& coarse() const { return coarse_; }
    const Mesh& fine() const { return fine_; }
    std::size_t anchor(std::size_t coarse_node) const { return anchors_[coarse_node]; }
    const std::vector<std::size_t>& anchors() const { return anchors_; }

private:
    Mesh coarse_;
    Mesh fine_;
    std::vector<std::size_t> anchors_;
};

NestedMeshPair refine_pair(const Mesh& coarse, double lambda);

// Piecewise linear interpolation from mesh nodes to all 2M atoms; atom
// l_j + k inside interval j gets weights (nu-k)/nu and k/nu.
SpaceTaggedOperator interpolation_to_atoms(const Mesh& mesh);

// Same interpolation, evaluated only at the nodes of the fine mesh.
SpaceTaggedOperator interpolation_fine_from_coarse(const NestedMeshPair& pair);

// Nodal restriction: coarse node s reads the fine value at anchor(s).
SpaceTaggedOperator restriction_coarse_from_fine(const NestedMeshPair& pair);

// Zero-extension of interior vectors into the full space of `full_kind`
// (prepends and appends two zero slots).
SpaceTaggedOperator boundary_injection(SpaceKind full_kind, std::size_t full_dim);

// Values clamped onto the two outermost atoms at each end.  l1 binds the
// leftmost atom -M+1, l2 its neighbor, r2 and r1 the right end mirrored.
struct BoundaryValues {
    double l1 = 0.0;
    double l2 = 0.0;
    double r2 = 0.0;
    double r1 = 0.0;
};

// Boundary values that extend the defect-free lattice: each clamped atom
// sits at its own well.
BoundaryValues lattice_ends(const ModelParams& params);

struct BoundaryLift {
    std::vector<double> mesh_vector; // [l1, l2, 0, ..., 0, r2, r1] on mesh nodes
    std::vector<double> atom_vector; // its interpolation to all atoms
};

BoundaryLift boundary_vectors(const BoundaryValues& bc, const Mesh& mesh);

} // namespace qcfk
