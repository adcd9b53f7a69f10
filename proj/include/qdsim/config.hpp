#pragma once

#include "qdsim/experiments.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qdsim {

/// Resolved command-line / config-file state for one run.
struct RunConfig {
    std::string experiment;        // spectrum|power|map|g2|eigen|reproduce|selftest
    Params params = presets::by_name("paper-default");
    TargetState target = TargetState::Subradiant;
    TruncationPolicy trunc;
    int figure = 0;                // reproduce only
    char spectrum_case = 0;        // 'a'..'e' when set
    std::string out_dir = ".";
    int jobs = 0;
    bool svg = false;
    long seed = 0;                 // reserved for future samplers; physics is deterministic

    // optional grid overrides
    double omega_min = -60.0, omega_max = 60.0;
    int omega_points = 481;
    double power_min_W = 1e-13, power_max_W = 3e-8;
    int power_points = 41;
    double tau_max_ns = 0.0; // 0 = auto
    int tau_points = 801;
    std::string sweep; // eigen: "delta12=start:stop:npoints"
};

/// Key/value lines of a flat config file ('#' comments, key = value).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Builds a RunConfig from ordered key/value pairs.  Unknown keys are
/// rejected by name; specifying both a dot separation d and explicit
/// Omega12/gamma12 is rejected naming the clashing keys.  Values carry
/// typed unit suffixes (ueV, nm, ns, and fW..W for powers).
RunConfig build_config(const std::vector<std::pair<std::string, std::string>>& entries);

/// Quantity parsers (exposed for tests).
double parse_power_W(const std::string& text);
double parse_energy_ueV(const std::string& text);
double parse_length_nm(const std::string& text);
double parse_time_ns(const std::string& text);

/// Executes the configured experiment, writing CSV (and SVG when asked)
/// under out_dir.  Returns 0 on success, 1 on usage errors, 2 when the
/// physics did not converge.
int run(const RunConfig& config);

} // namespace qdsim
