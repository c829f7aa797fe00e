#include "apc/kinetics.hpp"

#include <cmath>

namespace apc {

namespace detail {
std::atomic<std::uint64_t> g_negative_clamps{0};
} // namespace detail

void BehaviorParams::validate(std::vector<std::string>* warnings) const {
    const struct {
        const char* name;
        double v;
    } rates[] = {
        {"b1", b1}, {"b2", b2}, {"b3", b3}, {"b4", b4},
        {"c1", c1}, {"c2", c2},
        {"delta1", delta1}, {"delta2", delta2}, {"delta3", delta3},
        {"alpha13", alpha13}, {"alpha12", alpha12},
        {"alpha23", alpha23}, {"alpha32", alpha32},
    };
    for (const auto& r : rates) {
        if (!(r.v >= 0.0)) {
            throw ConfigError(std::string("behavior.") + r.name + " must be >= 0, got " +
                              std::to_string(r.v));
        }
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("behavior.epsilon must be > 0");
    }
    if (epsilon > 0.1) {
        throw ConfigError("behavior.epsilon must be <= 0.1 (got " + std::to_string(epsilon) + ")");
    }
    if (epsilon > 0.01 && warnings) {
        warnings->push_back("behavior.epsilon = " + std::to_string(epsilon) +
                            " is unusually large; imitation terms lose their ratio character");
    }
}

double xi(double w) {
    double w2 = w * w;
    return w2 / (1.0 + w2);
}

double zeta(double t, double z0, double z1) {
    if (!(z0 < z1)) {
        throw ConfigError("zeta requires z0 < z1");
    }
    if (t < z0) return 0.0;
    if (t > z1) return 1.0;
    return 0.5 - 0.5 * std::cos((t - z0) / (z1 - z0) * M_PI);
}

double Ramp::at(double t) const {
    if (kind == Kind::Constant) return value;
    return zeta(t, t0, t1);
}

void Ramp::validate(const std::string& name) const {
    if (kind == Kind::Constant) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw ConfigError(name + " constant value must lie in [0,1]");
        }
    } else {
        if (!(t0 < t1)) {
            throw ConfigError(name + " smoothstep requires t0 < t1");
        }
    }
}

void TransitionSchedule::validate() const {
    gamma.validate("schedule.gamma");
    phi.validate("schedule.phi");
}

double gamma_at(double t, const TransitionSchedule& s) { return s.gamma.at(t); }
double phi_at(double t, const TransitionSchedule& s) { return s.phi.at(t); }

double imitation_f(double rho1, double rho3, const BehaviorParams& p) {
    rho1 = detail::clamp_density(rho1);
    rho3 = detail::clamp_density(rho3);
    return p.alpha13 * detail::xi_ratio(rho3, rho1 + p.epsilon) * rho1 * rho3;
}

double imitation_g(double rho1, double rho2, const BehaviorParams& p) {
    rho1 = detail::clamp_density(rho1);
    rho2 = detail::clamp_density(rho2);
    return p.alpha12 * detail::xi_ratio(rho2, rho1 + p.epsilon) * rho1 * rho2;
}

double imitation_h(double rho2, double rho3, const BehaviorParams& p) {
    rho2 = detail::clamp_density(rho2);
    rho3 = detail::clamp_density(rho3);
    double to_control = p.alpha23 * detail::xi_ratio(rho3, rho2 + p.epsilon);
    double to_panic = p.alpha32 * detail::xi_ratio(rho2, rho3 + p.epsilon);
    return (to_control - to_panic) * rho2 * rho3;
}

State6 reaction_rhs(double t, const State6& s, const TransitionSchedule& sched,
                    const BehaviorParams& p) {
    return detail::reaction_rates(sched.gamma.at(t), sched.phi.at(t), s, p, 1.0);
}

Rho5 reaction_rhs_pde(double t, const Rho5& rho, const TransitionSchedule& sched,
                      const BehaviorParams& p) {
    State6 s{rho[0], rho[1], rho[2], rho[3], rho[4], 0.0};
    State6 d = detail::reaction_rates(sched.gamma.at(t), sched.phi.at(t), s, p, 1.0);
    return {d[0], d[1], d[2], d[3], d[4]};
}

std::uint64_t negative_input_clamps() {
    return detail::g_negative_clamps.load(std::memory_order_relaxed);
}

void reset_negative_input_clamps() {
    detail::g_negative_clamps.store(0, std::memory_order_relaxed);
}

} // namespace apc
