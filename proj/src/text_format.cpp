#include "qcfk/text_format.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qcfk {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) throw std::invalid_argument("refusing to format NaN");
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

} // namespace qcfk
