#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apc/grid.hpp"

namespace apc {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidateOptions {
    double cfl_safety = 0.5;
    bool flip_h_sign = false; // deliberately corrupt the imitation balance
    std::uint64_t seed = 0x5eed0a9c;
};

// The runtime invariant suite behind `apcsim validate`: reaction
// conservation and quasi-positivity, schedule ranges, ODE conservation and
// RK4 order, direction-field divergence on the builtin scenarios, the
// dense-matrix diffusion oracle, zero-transport equivalence against the
// ODE path, and a short full-solver run checking positivity, monotone mass
// and ledger closure.
std::vector<CheckResult> run_validation(const ValidateOptions& opt = {});

// One explicit no-flux diffusion step computed the brute-force way: build
// the dense stencil matrix row by row and apply it. Kept deliberately
// separate from the face-based flux assembly so the two can check each
// other.
std::vector<double> dense_diffusion_step(const Grid2D& g, const std::vector<double>& values,
                                         double d, double dt);

} // namespace apc
