#pragma once

#include <string>
#include <vector>

#include "apc/field.hpp"
#include "apc/grid.hpp"
#include "apc/kinetics.hpp"

namespace apc {

// One truncated Gaussian cluster of the initial population.
struct Bump {
    double cx = 0, cy = 0;
    double radius = 0;  // support radius; the Gaussian sigma is radius/2
    double weight = 1;

    friend bool operator==(const Bump&, const Bump&) = default;
};

// A complete, declarative description of one simulation run.
struct ScenarioConfig {
    GeometrySpec geometry;
    BehaviorParams behavior;
    TransportParams transport;
    TransitionSchedule schedule;

    bool initial_uniform = false;
    std::vector<Bump> bumps;

    double t_end = 250.0;
    double cfl_safety = 0.5;
    double dt_max = 0.05;
    double output_interval = 1.0;
    std::vector<double> snapshot_times{50, 100, 150, 200, 250};

    std::string output_dir;
    bool heatmaps = true;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Parses the line-oriented `section.key = value` format ('#' comments,
// comma-separated lists, repeatable geometry.obstacle / initial.bump).
// Overrides use the same "section.key=value" syntax and are applied before
// validation. Unknown keys and malformed values throw ConfigError with the
// offending line number. Non-fatal notes (e.g. a large epsilon) go to
// `warnings` when provided.
ScenarioConfig parse_config(const std::string& text,
                            const std::vector<std::string>& overrides = {},
                            std::vector<std::string>* warnings = nullptr);

bool is_builtin_scenario(const std::string& name);

// scenario1: one centered cluster; scenario2: the population split into
// three separate groups; scenario3: one centered cluster with an obstacle
// between it and the exit.
ScenarioConfig builtin_scenario(const std::string& name,
                                const std::vector<std::string>& overrides = {},
                                std::vector<std::string>* warnings = nullptr);

// Full reproducibility echo in the config file format. Every key appears
// with its effective value; parse_config(echo_config(cfg)) == cfg.
std::string echo_config(const ScenarioConfig& cfg);

// Rasterizes the initial clusters, zeroes obstacle cells, and rescales so
// the discrete integral over interior cells is 1; the whole population
// starts in the daily compartment. Throws ConfigError when no mass
// survives rasterization (e.g. every bump inside an obstacle).
DensityField initial_field(const ScenarioConfig& cfg, const Grid2D& g);

} // namespace apc
