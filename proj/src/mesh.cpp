#include "qcfk/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcfk/checks.hpp"

namespace qcfk {

Mesh::Mesh(MeshLevel level, int M, std::vector<int> repatoms)
    : level_(level), M_(M), repatoms_(std::move(repatoms)) {
    require(M >= 4, "mesh needs M >= 4");
    require(repatoms_.size() >= 4, "mesh needs at least the four boundary repatoms");
    for (std::size_t s = 1; s < repatoms_.size(); ++s)
        require(repatoms_[s - 1] < repatoms_[s], "repatoms must be strictly increasing");
    require(repatoms_.front() == -M + 1 && repatoms_[1] == -M + 2,
            "left boundary repatoms must be -M+1, -M+2");
    require(repatoms_[repatoms_.size() - 2] == M - 1 && repatoms_.back() == M,
            "right boundary repatoms must be M-1, M");
}

int Mesh::nu(std::size_t interval) const {
    require(interval + 1 < repatoms_.size(), "interval index out of range");
    return repatoms_[interval + 1] - repatoms_[interval];
}

int Mesh::node_label(std::size_t s) const {
    return static_cast<int>(s) - (static_cast<int>(node_count()) / 2 - 1);
}

Space Mesh::space() const {
    return {level_ == MeshLevel::qc ? SpaceKind::qc : SpaceKind::pc, node_count()};
}

Space Mesh::interior_space() const {
    return {level_ == MeshLevel::qc ? SpaceKind::qc_interior : SpaceKind::pc_interior,
            node_count() - 4};
}

Mesh initial_mesh(const ModelParams& params, const Partition& part) {
    require(part.M() == params.M, "partition and parameters disagree on M");
    require(part.has_block(), "initial mesh needs an atomistic block to resolve");
    const int lo = part.block_first();
    const int hi = part.block_last();
    require(lo - 2 >= -params.M + 2 && hi + 2 <= params.M - 1,
            "atomistic block with two-repatom padding must fit between the boundary repatoms");
    std::vector<int> nodes;
    nodes.push_back(-params.M + 1);
    nodes.push_back(-params.M + 2);
    for (int i = lo - 2; i <= hi + 2; ++i)
        if (i > nodes.back() && i < params.M - 1) nodes.push_back(i);
    if (params.M - 1 > nodes.back()) nodes.push_back(params.M - 1);
    nodes.push_back(params.M);
    return Mesh(MeshLevel::qc, params.M, std::move(nodes));
}

Mesh bisect(const Mesh& mesh, const std::vector<std::size_t>& marked_intervals) {
    std::vector<std::size_t> marked = marked_intervals;
    std::sort(marked.begin(), marked.end());
    marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
    std::vector<int> nodes;
    nodes.reserve(mesh.node_count() + marked.size());
    std::size_t next = 0;
    for (std::size_t j = 0; j + 1 < mesh.node_count(); ++j) {
        nodes.push_back(mesh.node(j));
        if (next < marked.size() && marked[next] == j) {
            require(mesh.nu(j) >= 2, "cannot bisect an interval of a single atom");
            nodes.push_back(mesh.node(j) + mesh.nu(j) / 2);
            ++next;
        }
    }
    require(next == marked.size(), "marked interval index out of range");
    nodes.push_back(mesh.node(mesh.node_count() - 1));
    return Mesh(mesh.level(), mesh.M(), std::move(nodes));
}

std::vector<int> partial_refine_widths(int nu, double lambda) {
    require(nu >= 1, "interval width must be positive");
    require(lambda >= 1.0, "refinement factor must be at least 1 (infinity allowed)");
    const double width = std::max(1.0, nu / lambda);
    std::vector<int> chunks;
    double swept = 0.0;
    int placed = 0;
    while (placed < nu) {
        swept = std::min(swept + width, static_cast<double>(nu));
        const int chunk = static_cast<int>(std::floor(swept - placed + 0.5));
        internal_check(chunk >= 1, "refinement sweep stalled");
        placed += chunk;
        chunks.push_back(chunk);
    }
    internal_check(placed == nu, "refinement sweep overshot the interval");
    return chunks;
}

Mesh partial_refine(const Mesh& mesh, double lambda) {
    std::vector<int> nodes;
    nodes.push_back(mesh.node(0));
    for (std::size_t j = 0; j + 1 < mesh.node_count(); ++j) {
        int position = mesh.node(j);
        for (int chunk : partial_refine_widths(mesh.nu(j), lambda)) {
            position += chunk;
            nodes.push_back(position);
        }
    }
    return Mesh(MeshLevel::pc, mesh.M(), std::move(nodes));
}

NestedMeshPair::NestedMeshPair(Mesh coarse, Mesh fine)
    : coarse_(std::move(coarse)), fine_(std::move(fine)) {
    require(coarse_.M() == fine_.M(), "nested meshes disagree on M");
    require(coarse_.level() == MeshLevel::qc && fine_.level() == MeshLevel::pc,
            "nested pair must be a qc mesh with a pc refinement");
    anchors_.reserve(coarse_.node_count());
    std::size_t t = 0;
    for (std::size_t s = 0; s < coarse_.node_count(); ++s) {
        while (t < fine_.node_count() && fine_.node(t) < coarse_.node(s)) ++t;
        require(t < fine_.node_count() && fine_.node(t) == coarse_.node(s),
                "fine mesh does not contain every coarse repatom");
        anchors_.push_back(t);
    }
}

NestedMeshPair refine_pair(const Mesh& coarse, double lambda) {
    return NestedMeshPair(coarse, partial_refine(coarse, lambda));
}

SpaceTaggedOperator interpolation_to_atoms(const Mesh& mesh) {
    const int M = mesh.M();
    SpaceTaggedOperator op({SpaceKind::atom, static_cast<std::size_t>(2 * M)}, mesh.space());
    for (std::size_t s = 0; s < mesh.node_count(); ++s)
        op.add(atom_slot(mesh.node(s), M), s, 1.0);
    for (std::size_t j = 0; j + 1 < mesh.node_count(); ++j) {
        const int nu = mesh.nu(j);
        for (int k = 1; k < nu; ++k) {
            const std::size_t row = atom_slot(mesh.node(j) + k, M);
            op.add(row, j, static_cast<double>(nu - k) / nu);
            op.add(row, j + 1, static_cast<double>(k) / nu);
        }
    }
    return op;
}

SpaceTaggedOperator interpolation_fine_from_coarse(const NestedMeshPair& pair) {
    const Mesh& coarse = pair.coarse();
    const Mesh& fine = pair.fine();
    SpaceTaggedOperator op(fine.space(), coarse.space());
    for (std::size_t s = 0; s < coarse.node_count(); ++s) op.add(pair.anchor(s), s, 1.0);
    for (std::size_t j = 0; j + 1 < coarse.node_count(); ++j) {
        const int nu = coarse.nu(j);
        for (std::size_t t = pair.anchor(j) + 1; t < pair.anchor(j + 1); ++t) {
            const int k = fine.node(t) - coarse.node(j);
            op.add(t, j, static_cast<double>(nu - k) / nu);
            op.add(t, j + 1, static_cast<double>(k) / nu);
        }
    }
    return op;
}

SpaceTaggedOperator restriction_coarse_from_fine(const NestedMeshPair& pair) {
    SpaceTaggedOperator op(pair.coarse().space(), pair.fine().space());
    for (std::size_t s = 0; s < pair.coarse().node_count(); ++s) op.add(s, pair.anchor(s), 1.0);
    return op;
}

SpaceTaggedOperator boundary_injection(SpaceKind full_kind, std::size_t full_dim) {
    require(full_dim >= 4, "full space needs the four clamped slots");
    SpaceKind interior_kind;
    switch (full_kind) {
    case SpaceKind::atom: interior_kind = SpaceKind::atom_interior; break;
    case SpaceKind::qc: interior_kind = SpaceKind::qc_interior; break;
    case SpaceKind::pc: interior_kind = SpaceKind::pc_interior; break;
    default: throw std::invalid_argument("boundary injection expects a full space kind");
    }
    SpaceTaggedOperator op({full_kind, full_dim}, {interior_kind, full_dim - 4});
    for (std::size_t i = 0; i + 4 < full_dim; ++i) op.add(i + 2, i, 1.0);
    return op;
}

BoundaryValues lattice_ends(const ModelParams& params) {
    return {well_position(params, -params.M + 1), well_position(params, -params.M + 2),
            well_position(params, params.M - 1), well_position(params, params.M)};
}

BoundaryLift boundary_vectors(const BoundaryValues& bc, const Mesh& mesh) {
    BoundaryLift lift;
    lift.mesh_vector.assign(mesh.node_count(), 0.0);
    lift.mesh_vector[0] = bc.l1;
    lift.mesh_vector[1] = bc.l2;
    lift.mesh_vector[mesh.node_count() - 2] = bc.r2;
    lift.mesh_vector[mesh.node_count() - 1] = bc.r1;
    lift.atom_vector = interpolation_to_atoms(mesh).apply(lift.mesh_vector);
    return lift;
}

} // namespace qcfk
