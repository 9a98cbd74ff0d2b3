#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qcfk/config.hpp"

namespace qcfk {

// Exit codes shared by both commands: 0 converged, 1 configuration or I/O
// failure, 2 stopped without reaching the tolerance.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_not_converged = 2;

struct RunOptions {
    std::string config_path; // empty runs the built-in defaults
    std::optional<double> tau_gl;
    std::optional<double> lambda;
    std::optional<bool> oracle;
    std::optional<std::string> out_dir;
};

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct EfficiencyOptions {
    std::string config_path;
    std::vector<double> tolerances = {1e-1, 1e-3, 1e-5};
    std::vector<double> lambdas; // default {2, 4, 8, inf}
    std::optional<double> sweep_tolerance;
    std::optional<std::string> out_dir;
};

int cmd_efficiency(const EfficiencyOptions& options, std::ostream& out, std::ostream& err);

} // namespace qcfk
