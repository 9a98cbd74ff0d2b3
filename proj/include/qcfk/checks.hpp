#pragma once

#include <stdexcept>
#include <string>

namespace qcfk {

// Precondition on caller-supplied data.
inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// Invariant that should be unreachable if the implementation is right.
inline void internal_check(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("internal consistency: " + what);
}

} // namespace qcfk
