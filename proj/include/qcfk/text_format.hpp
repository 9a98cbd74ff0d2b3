#pragma once

#include <string>

namespace qcfk {

// Shortest decimal that round-trips to the same double; "inf"/"-inf" for
// infinities.  Keeps the CSV/JSON artifacts byte-stable and diffable.
std::string format_double(double v);

} // namespace qcfk
