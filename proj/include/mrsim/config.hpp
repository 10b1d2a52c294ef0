#pragma once

// Run configuration: one JSON file drives every subcommand.  Parsing is strict
// about required interaction fields (errors carry the full field path) and
// fills documented defaults for everything else; the resolved form is written
// next to the outputs so a run can be reproduced from its directory alone.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrsim/interaction.hpp"

namespace mrsim {

struct ProtocolSettings {
    double duration_us = 10.0;
    double delta_max_mhz = 200.0;
    double rabi_mhz = 0.1;
    std::string compensation = "vdw-flatten";  // "vdw-flatten" | "none"
    std::string initial_state = "auto";        // "auto" | "grape" | "ground-state"
    int n_output = 200;
    double dt_max_us = 0.05;
};

struct GrapeSettings {
    double duration_us = 10.0;
    int n_slices = 100;
    int max_iter = 500;
    double target_fidelity = 0.9999;
    std::array<double, 2> rabi_bounds_mhz{0.0, 10.0};
    std::array<double, 2> detuning_bounds_mhz{-50.0, 50.0};
};

struct SolverSettings {
    std::int64_t dense_cap_dim = 729;
    double tol = 1e-8;
    int max_restarts = 500;
};

struct RunConfig {
    std::string experiment;
    InteractionTable table;
    double spacing_um = 0.0;
    double theta_deg = 0.0;
    std::vector<int> n_list;
    ProtocolSettings protocol;
    GrapeSettings grape;
    SolverSettings solver;
    double lifetime_us = 620.0;
    unsigned seed = 12345;
    std::string angular_convention = "rad";  // "rad" | "cycles"
    std::string output_dir = "runs/out";
    std::optional<int> cutoff_bonds;

    Geometry geometry_for(int n) const;
    double phase_scale() const;  // 1 for "rad", 2*pi for "cycles"
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);
nlohmann::json resolved_json(const RunConfig& cfg);

}  // namespace mrsim
