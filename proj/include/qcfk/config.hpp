#pragma once

#include <stdexcept>
#include <string>

#include "qcfk/adapt.hpp"
#include "qcfk/mesh.hpp"
#include "qcfk/model.hpp"

namespace qcfk {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ModelParams params;
    int atomistic_lo = -1;
    int atomistic_hi = 2;
    BoundaryValues bc; // defaults to lattice_ends(params) unless keys override
    AdaptConfig adapt;
    bool oracle = true;
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_json = true;

    Partition partition() const { return Partition::with_block(params.M, atomistic_lo, atomistic_hi); }
    void validate() const; // throws ConfigError
};

// One `key = value` per line, `#` starts a comment, unknown or duplicate
// keys are rejected with the offending key and line number.  An empty file
// yields the dislocation benchmark configuration.
RunConfig parse_config(const std::string& text);

} // namespace qcfk
