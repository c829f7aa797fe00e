#pragma once

#include <iosfwd>
#include <vector>

#include "apc/kinetics.hpp"

namespace apc {

enum class OdeMethod { Rk4, Euler };

struct OdeRun {
    double t0 = 0.0;
    double t1 = 250.0;
    double dt = 0.01;
    OdeMethod method = OdeMethod::Rk4;
    State6 initial{0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    int store_every = 1; // keep every k-th step (the final state is always kept)

    void validate() const;
};

struct OdeTrajectory {
    std::vector<double> times;
    std::vector<State6> states;
};

// Fixed-step integration of the six-compartment system. The final step is
// shortened to land exactly on t1. Throws SolverError when a component
// exceeds 1e3 in magnitude, drops below -1e-8, or turns non-finite; there
// is no positivity projection, so an undershoot surfaces a parameter or
// step-size problem instead of being hidden.
OdeTrajectory integrate(const OdeRun& run, const TransitionSchedule& sched,
                        const BehaviorParams& p);

// Max over stored states of |sum(rho) - sum at t0|. Both steppers preserve
// the linear invariant of the vector field, so this measures round-off.
double conservation_report(const OdeTrajectory& traj);

// CSV export: header t,rho1,...,rho6, one row per stored time, %.17g.
void write_trajectory_csv(const OdeTrajectory& traj, std::ostream& out);

} // namespace apc
