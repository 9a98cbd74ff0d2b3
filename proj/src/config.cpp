#include "qcfk/config.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace qcfk {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, std::size_t line, const std::string& key) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + value.size() || value.empty())
        fail(line, "key '" + key + "' needs a number, got '" + value + "'");
    return v;
}

double parse_lambda(const std::string& value, std::size_t line) {
    if (value == "inf") return std::numeric_limits<double>::infinity();
    return parse_double(value, line, "lambda");
}

int parse_int(const std::string& value, std::size_t line, const std::string& key) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + value.size() || value.empty() || v < std::numeric_limits<int>::min() ||
        v > std::numeric_limits<int>::max())
        fail(line, "key '" + key + "' needs an integer, got '" + value + "'");
    return static_cast<int>(v);
}

bool parse_switch(const std::string& value, std::size_t line, const std::string& key) {
    if (value == "on") return true;
    if (value == "off") return false;
    fail(line, "key '" + key + "' needs on or off, got '" + value + "'");
}

} // namespace

void RunConfig::validate() const {
    try {
        params.validate();
        adapt.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (atomistic_lo > atomistic_hi) throw ConfigError("config: atomistic block is reversed");
    if (atomistic_lo > 0 || atomistic_hi < 1)
        throw ConfigError("config: atomistic block must contain the dislocation atoms 0 and 1");
    if (atomistic_lo - 2 < -params.M + 2 || atomistic_hi + 2 > params.M - 1)
        throw ConfigError(
            "config: atomistic block with two-repatom padding must fit between the boundary repatoms");
    if (!(std::isfinite(bc.l1) && std::isfinite(bc.l2) && std::isfinite(bc.r2) &&
          std::isfinite(bc.r1)))
        throw ConfigError("config: boundary values must be finite");
    if (!write_csv && !write_json) throw ConfigError("config: formats must include csv or json");
    if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool bc_l1_set = false, bc_l2_set = false, bc_r2_set = false, bc_r1_set = false;
    std::map<std::string, std::size_t> seen;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "missing key before '='");
        if (const auto [it, fresh] = seen.emplace(key, line_no); !fresh)
            fail(line_no, "duplicate key '" + key + "' (first set on line " +
                              std::to_string(it->second) + ")");

        if (key == "k0") cfg.params.k0 = parse_double(value, line_no, key);
        else if (key == "k1") cfg.params.k1 = parse_double(value, line_no, key);
        else if (key == "k2") cfg.params.k2 = parse_double(value, line_no, key);
        else if (key == "a0") cfg.params.a0 = parse_double(value, line_no, key);
        else if (key == "M") cfg.params.M = parse_int(value, line_no, key);
        else if (key == "atomistic_lo") cfg.atomistic_lo = parse_int(value, line_no, key);
        else if (key == "atomistic_hi") cfg.atomistic_hi = parse_int(value, line_no, key);
        else if (key == "bc_l1") { cfg.bc.l1 = parse_double(value, line_no, key); bc_l1_set = true; }
        else if (key == "bc_l2") { cfg.bc.l2 = parse_double(value, line_no, key); bc_l2_set = true; }
        else if (key == "bc_r2") { cfg.bc.r2 = parse_double(value, line_no, key); bc_r2_set = true; }
        else if (key == "bc_r1") { cfg.bc.r1 = parse_double(value, line_no, key); bc_r1_set = true; }
        else if (key == "tau_gl") cfg.adapt.tau_gl = parse_double(value, line_no, key);
        else if (key == "tau_fac") cfg.adapt.tau_fac = parse_double(value, line_no, key);
        else if (key == "lambda") cfg.adapt.lambda = parse_lambda(value, line_no);
        else if (key == "max_iterations") cfg.adapt.max_iterations = parse_int(value, line_no, key);
        else if (key == "oracle") cfg.oracle = parse_switch(value, line_no, key);
        else if (key == "out_dir") {
            if (value.empty()) fail(line_no, "out_dir must not be empty");
            cfg.out_dir = value;
        } else if (key == "formats") {
            cfg.write_csv = cfg.write_json = false;
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (item == "csv") cfg.write_csv = true;
                else if (item == "json") cfg.write_json = true;
                else fail(line_no, "formats accepts csv and json, got '" + item + "'");
            }
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }

    const BoundaryValues ends = lattice_ends(cfg.params);
    if (!bc_l1_set) cfg.bc.l1 = ends.l1;
    if (!bc_l2_set) cfg.bc.l2 = ends.l2;
    if (!bc_r2_set) cfg.bc.r2 = ends.r2;
    if (!bc_r1_set) cfg.bc.r1 = ends.r1;

    cfg.adapt.compute_exact_error = cfg.oracle;
    cfg.validate();
    return cfg;
}

} // namespace qcfk
