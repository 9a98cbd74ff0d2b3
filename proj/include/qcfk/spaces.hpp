#pragma once

#include <cstddef>
#include <string>

namespace qcfk {

// The six vector spaces the operators move between: full and clamped-interior
// variants of the atom chain, the pc mesh, and the qc mesh.
enum class SpaceKind { atom, atom_interior, pc, pc_interior, qc, qc_interior };

struct Space {
    SpaceKind kind;
    std::size_t dim;
    bool operator==(const Space&) const = default;
};

std::string describe(const Space& s);

} // namespace qcfk
