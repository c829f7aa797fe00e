#include "apc/ode.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "apc/numeric.hpp"

namespace apc {

namespace {

constexpr double kBlowupLimit = 1e3;
constexpr double kUndershootLimit = -1e-8;

State6 axpy(const State6& y, double a, const State6& k) {
    State6 r;
    for (int i = 0; i < 6; ++i) r[i] = y[i] + a * k[i];
    return r;
}

void check_state(const State6& s, double t) {
    for (int i = 0; i < 6; ++i) {
        if (!std::isfinite(s[i])) {
            throw SolverError("ode: non-finite component rho" + std::to_string(i + 1) +
                              " at t=" + format_full(t));
        }
        if (std::abs(s[i]) > kBlowupLimit) {
            throw SolverError("ode: blow-up, |rho" + std::to_string(i + 1) + "|=" +
                              format_full(std::abs(s[i])) + " at t=" + format_full(t));
        }
        if (s[i] < kUndershootLimit) {
            throw SolverError("ode: rho" + std::to_string(i + 1) + "=" + format_full(s[i]) +
                              " undershoots below -1e-8 at t=" + format_full(t) +
                              "; reduce dt or check parameters");
        }
    }
}

State6 rk4_step(double t, double h, const State6& y, const TransitionSchedule& sched,
                const BehaviorParams& p) {
    State6 k1 = reaction_rhs(t, y, sched, p);
    State6 k2 = reaction_rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1), sched, p);
    State6 k3 = reaction_rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2), sched, p);
    State6 k4 = reaction_rhs(t + h, axpy(y, h, k3), sched, p);
    State6 r;
    for (int i = 0; i < 6; ++i) {
        r[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return r;
}

State6 euler_step(double t, double h, const State6& y, const TransitionSchedule& sched,
                  const BehaviorParams& p) {
    State6 k = reaction_rhs(t, y, sched, p);
    return axpy(y, h, k);
}

} // namespace

void OdeRun::validate() const {
    if (!(t0 < t1)) throw ConfigError("ode run requires t0 < t1");
    if (!(dt > 0.0)) throw ConfigError("ode run requires dt > 0");
    if (dt > t1 - t0) throw ConfigError("ode run requires dt <= t1 - t0");
    if (store_every < 1) throw ConfigError("ode run requires store_every >= 1");
    for (int i = 0; i < 6; ++i) {
        if (initial[i] < 0.0) throw ConfigError("ode initial state must be nonnegative");
    }
}

OdeTrajectory integrate(const OdeRun& run, const TransitionSchedule& sched,
                        const BehaviorParams& p) {
    run.validate();
    sched.validate();
    p.validate();

    const double span = run.t1 - run.t0;
    // Steps of size dt; the leftover (if any) becomes one shortened step.
    auto n_full = static_cast<long>(std::floor(span / run.dt * (1.0 + 1e-12)));
    double remainder = span - static_cast<double>(n_full) * run.dt;
    if (remainder <= run.dt * 1e-9) remainder = 0.0;
    const long n_steps = n_full + (remainder > 0.0 ? 1 : 0);

    OdeTrajectory traj;
    traj.times.reserve(static_cast<std::size_t>(n_steps / run.store_every + 2));
    traj.states.reserve(traj.times.capacity());

    State6 y = run.initial;
    traj.times.push_back(run.t0);
    traj.states.push_back(y);

    for (long k = 0; k < n_steps; ++k) {
        const double t = run.t0 + static_cast<double>(k) * run.dt;
        const bool last = (k == n_steps - 1);
        const double h = (last && remainder > 0.0) ? remainder : run.dt;
        y = (run.method == OdeMethod::Rk4) ? rk4_step(t, h, y, sched, p)
                                           : euler_step(t, h, y, sched, p);
        const double t_next = last ? run.t1 : run.t0 + static_cast<double>(k + 1) * run.dt;
        check_state(y, t_next);
        if (last || (k + 1) % run.store_every == 0) {
            traj.times.push_back(t_next);
            traj.states.push_back(y);
        }
    }
    return traj;
}

double conservation_report(const OdeTrajectory& traj) {
    if (traj.states.empty()) throw ConfigError("conservation_report: empty trajectory");
    auto total = [](const State6& s) {
        return ((s[0] + s[1]) + (s[2] + s[3])) + (s[4] + s[5]);
    };
    const double ref = total(traj.states.front());
    double worst = 0.0;
    for (const State6& s : traj.states) {
        worst = std::max(worst, std::abs(total(s) - ref));
    }
    return worst;
}

void write_trajectory_csv(const OdeTrajectory& traj, std::ostream& out) {
    out << "t,rho1,rho2,rho3,rho4,rho5,rho6\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << format_full(traj.times[i]);
        for (double v : traj.states[i]) out << ',' << format_full(v);
        out << '\n';
    }
}

} // namespace apc
