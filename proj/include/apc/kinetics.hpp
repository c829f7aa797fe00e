#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "apc/errors.hpp"

namespace apc {

// Compartment indices. The first five are carried as spatial densities by
// the PDE; victims only exist in the temporal model (the PDE tracks the
// same sink through the mass ledger).
enum Compartment : int {
    kAlert = 0,
    kPanic = 1,
    kControl = 2,
    kDaily = 3,
    kDailyAfter = 4,
    kVictims = 5,
};

using State6 = std::array<double, 6>;
using Rho5 = std::array<double, 5>;

// Kinetic rates of the behavioral reactions. Defaults follow the reference
// low-risk-culture parameter set (no mortality).
struct BehaviorParams {
    double b1 = 0.1;   // alert -> control
    double b2 = 0.2;   // alert -> panic
    double b3 = 0.001; // control -> alert
    double b4 = 0.001; // panic -> alert
    double c1 = 0.1;   // panic -> control
    double c2 = 0.4;   // control -> panic
    double delta1 = 0.0; // mortality, alert
    double delta2 = 0.0; // mortality, panic
    double delta3 = 0.0; // mortality, control
    double alpha13 = 0.6; // imitation alert -> control
    double alpha12 = 0.7; // imitation alert -> panic
    double alpha23 = 0.6; // imitation panic -> control
    double alpha32 = 0.7; // imitation control -> panic
    double epsilon = 1e-3; // guards the population ratios inside xi

    // Throws ConfigError on invalid values (negative rates, epsilon
    // outside (0, 0.1]). Appends a note to `warnings` for legal but
    // suspicious values (epsilon > 0.01).
    void validate(std::vector<std::string>* warnings = nullptr) const;

    friend bool operator==(const BehaviorParams&, const BehaviorParams&) = default;
};

// One 0->1 ramp, either a constant level or the raised-cosine smoothstep.
struct Ramp {
    enum class Kind { Constant, Smoothstep };
    Kind kind = Kind::Constant;
    double value = 0.0; // Constant
    double t0 = 0.0;    // Smoothstep start
    double t1 = 1.0;    // Smoothstep end, t0 < t1

    double at(double t) const;
    void validate(const std::string& name) const;

    friend bool operator==(const Ramp&, const Ramp&) = default;
};

// gamma drives the catastrophe onset (daily -> alert), phi the return to
// everyday life (control -> post-event daily).
struct TransitionSchedule {
    Ramp gamma{Ramp::Kind::Constant, 1.0, 0.0, 1.0};
    Ramp phi{Ramp::Kind::Constant, 0.0, 0.0, 1.0};

    void validate() const;

    friend bool operator==(const TransitionSchedule&, const TransitionSchedule&) = default;
};

// Saturating imitation strength, w^2/(1+w^2) in [0,1).
double xi(double w);

// Raised-cosine ramp: 0 before z0, 1 after z1, continuous and
// nondecreasing in between. Requires z0 < z1.
double zeta(double t, double z0, double z1);

double gamma_at(double t, const TransitionSchedule& s);
double phi_at(double t, const TransitionSchedule& s);

// Imitation transfers. All clamp negative density inputs to zero (counted,
// see negative_input_clamps) so callers may pass tiny undershoots.
double imitation_f(double rho1, double rho3, const BehaviorParams& p); // alert -> control, >= 0
double imitation_g(double rho1, double rho2, const BehaviorParams& p); // alert -> panic, >= 0
double imitation_h(double rho2, double rho3, const BehaviorParams& p); // net panic -> control, signed

namespace detail {

extern std::atomic<std::uint64_t> g_negative_clamps;

inline double clamp_density(double x) {
    if (x < 0.0) {
        g_negative_clamps.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    return x;
}

// xi(a/b) with a single division; b must be positive.
inline double xi_ratio(double a, double b) {
    double a2 = a * a;
    return a2 / (b * b + a2);
}

// Core of the coupled right-hand side with the schedules pre-evaluated.
// Inline: the PDE stepper calls this once per cell per step. `h_sign`
// scales the net panic->control imitation term in the control equation
// only; anything but +1 breaks conservation on purpose (used by the
// validation suite's mutation check).
inline State6 reaction_rates(double gamma, double phi, const State6& s,
                             const BehaviorParams& p, double h_sign) {
    const double r1 = clamp_density(s[kAlert]);
    const double r2 = clamp_density(s[kPanic]);
    const double r3 = clamp_density(s[kControl]);
    const double r4 = clamp_density(s[kDaily]);

    // Each transfer is evaluated once and enters a source and a sink with
    // opposite signs, so the six derivatives cancel to round-off.
    const double f = p.alpha13 * xi_ratio(r3, r1 + p.epsilon) * r1 * r3;
    const double g = p.alpha12 * xi_ratio(r2, r1 + p.epsilon) * r1 * r2;
    const double h =
        (p.alpha23 * xi_ratio(r3, r2 + p.epsilon) - p.alpha32 * xi_ratio(r2, r3 + p.epsilon)) *
        r2 * r3;
    const double t_b1 = p.b1 * r1;      // alert -> control
    const double t_b2 = p.b2 * r1;      // alert -> panic
    const double t_b3 = p.b3 * r3;      // control -> alert
    const double t_b4 = p.b4 * r2;      // panic -> alert
    const double t_c1 = p.c1 * r2;      // panic -> control
    const double t_c2 = p.c2 * r3;      // control -> panic
    const double t_onset = gamma * r4;  // daily -> alert
    const double t_calm = phi * r3;     // control -> post-event daily
    const double m1 = p.delta1 * r1;
    const double m2 = p.delta2 * r2;
    const double m3 = p.delta3 * r3;

    State6 d;
    d[kAlert] = t_onset + t_b3 + t_b4 - t_b1 - t_b2 - m1 - f - g;
    d[kPanic] = t_b2 + t_c2 + g - t_b4 - t_c1 - m2 - h;
    d[kControl] = t_b1 + t_c1 + f + h_sign * h - t_b3 - t_c2 - m3 - t_calm;
    d[kDaily] = -t_onset;
    d[kDailyAfter] = t_calm;
    d[kVictims] = m1 + m2 + m3;
    return d;
}

} // namespace detail

// All six compartment derivatives. The six components sum to zero
// algebraically: every transfer appears once with each sign.
State6 reaction_rhs(double t, const State6& s, const TransitionSchedule& sched,
                    const BehaviorParams& p);

// The five spatial reaction rates: identical to the first five components
// of reaction_rhs with a zero victims compartment.
Rho5 reaction_rhs_pde(double t, const Rho5& rho, const TransitionSchedule& sched,
                      const BehaviorParams& p);

// Diagnostic counter for negative inputs clamped to zero.
std::uint64_t negative_input_clamps();
void reset_negative_input_clamps();

} // namespace apc
