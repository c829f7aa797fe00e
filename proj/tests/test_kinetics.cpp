#include <doctest.h>

#include <cmath>
#include <random>

#include "apc/kinetics.hpp"

using namespace apc;

namespace {

// Reference values from tests/oracles/kinetics_oracle.py (mpmath, 50 digits).
constexpr double kOracleF = 0.086284761906875484;
constexpr double kOracleG = 0.044710355736747821;
constexpr double kOracleH = -0.0079800249999220701;
constexpr double kOracleRhs[6] = {-0.013233942991234730, 0.16317253276437258,
                                  -0.049938589773137852, -0.10000000000000000, 0.0, 0.0};

BehaviorParams table_params() {
    return BehaviorParams{}; // the defaults are the reference parameter set
}

} // namespace

TEST_CASE("xi saturates the population ratio") {
    CHECK(xi(0.0) == 0.0);
    CHECK(xi(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(xi(3.0) == doctest::Approx(0.9).epsilon(1e-15));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = xi(dist(rng));
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    // monotone for w >= 0
    double prev = -1.0;
    for (double w = 0.0; w <= 20.0; w += 0.05) {
        const double v = xi(w);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("zeta is the continuous 0->1 ramp") {
    CHECK(zeta(1.0, 1.0, 3.0) == 0.0);
    CHECK(zeta(2.0, 1.0, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(zeta(3.0, 1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(zeta(0.0, 1.0, 3.0) == 0.0);
    CHECK(zeta(100.0, 1.0, 3.0) == 1.0);
    CHECK_THROWS_AS(zeta(0.0, 3.0, 3.0), ConfigError);
    CHECK_THROWS_AS(zeta(0.0, 4.0, 3.0), ConfigError);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> zdist(0.0, 100.0);
    std::uniform_real_distribution<double> tdist(-10.0, 120.0);
    for (int i = 0; i < 2000; ++i) {
        const double z0 = zdist(rng);
        const double z1 = z0 + 1e-6 + zdist(rng);
        double a = tdist(rng), b = tdist(rng);
        if (a > b) std::swap(a, b);
        const double va = zeta(a, z0, z1);
        const double vb = zeta(b, z0, z1);
        CHECK(va >= 0.0);
        CHECK(vb <= 1.0);
        CHECK(va <= vb);
    }
}

TEST_CASE("schedule evaluation") {
    TransitionSchedule s; // gamma = 1, phi = 0
    CHECK(gamma_at(0.0, s) == 1.0);
    CHECK(gamma_at(123.0, s) == 1.0);
    CHECK(phi_at(55.0, s) == 0.0);

    TransitionSchedule ramps;
    ramps.gamma = {Ramp::Kind::Smoothstep, 0.0, 1.0, 3.0};
    ramps.phi = {Ramp::Kind::Smoothstep, 0.0, 20.0, 70.0};
    CHECK(gamma_at(2.0, ramps) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(phi_at(45.0, ramps) == doctest::Approx(0.5).epsilon(1e-15));

    Ramp bad{Ramp::Kind::Constant, 1.5, 0.0, 1.0};
    CHECK_THROWS_AS(bad.validate("x"), ConfigError);
    Ramp bad2{Ramp::Kind::Smoothstep, 0.0, 3.0, 1.0};
    CHECK_THROWS_AS(bad2.validate("x"), ConfigError);
}

TEST_CASE("imitation terms against the extended-precision oracle") {
    const BehaviorParams p = table_params();
    CHECK(imitation_f(0.0, 0.7, p) == 0.0);
    CHECK(imitation_f(0.5, 0.0, p) == 0.0);
    CHECK(imitation_f(0.3, 0.6, p) == doctest::Approx(kOracleF).epsilon(1e-15));

    CHECK(imitation_g(0.0, 0.4, p) == 0.0);
    CHECK(imitation_g(0.3, 0.0, p) == 0.0);
    CHECK(imitation_g(0.2, 0.4, p) == doctest::Approx(kOracleG).epsilon(1e-15));

    CHECK(imitation_h(0.0, 0.4, p) == 0.0);
    CHECK(imitation_h(0.4, 0.0, p) == 0.0);
    CHECK(imitation_h(0.4, 0.4, p) == doctest::Approx(kOracleH).epsilon(1e-15));
    // alpha32 > alpha23 forces the net flow toward panic at equal densities
    CHECK(imitation_h(0.4, 0.4, p) < 0.0);

    BehaviorParams sym = p;
    sym.alpha32 = sym.alpha23;
    CHECK(imitation_h(0.37, 0.37, sym) == 0.0);
}

TEST_CASE("imitation bound |H| <= max(alpha23, alpha32) rho2 rho3") {
    const BehaviorParams p = table_params();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (int i = 0; i < 5000; ++i) {
        const double r2 = dist(rng), r3 = dist(rng);
        const double h = imitation_h(r2, r3, p);
        CHECK(std::abs(h) <= std::max(p.alpha23, p.alpha32) * r2 * r3 + 1e-18);
        CHECK(imitation_f(r2, r3, p) >= 0.0);
        CHECK(imitation_g(r2, r3, p) >= 0.0);
    }
}

TEST_CASE("reaction_rhs matches the term-by-term oracle") {
    const BehaviorParams p = table_params();
    const TransitionSchedule sched; // gamma = 1, phi = 0

    SUBCASE("pure daily state feeds alert only") {
        const State6 d = reaction_rhs(0.0, {0, 0, 0, 1, 0, 0}, sched, p);
        CHECK(d[0] == 1.0);
        CHECK(d[1] == 0.0);
        CHECK(d[2] == 0.0);
        CHECK(d[3] == -1.0);
        CHECK(d[4] == 0.0);
        CHECK(d[5] == 0.0);
    }
    SUBCASE("empty state is stationary") {
        const State6 d = reaction_rhs(5.0, {0, 0, 0, 0, 0, 0}, sched, p);
        for (double v : d) CHECK(v == 0.0);
    }
    SUBCASE("frozen mixed state") {
        const State6 d = reaction_rhs(0.0, {0.2, 0.3, 0.3, 0.1, 0.1, 0}, sched, p);
        for (int i = 0; i < 6; ++i) {
            CHECK(d[i] == doctest::Approx(kOracleRhs[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("six derivatives sum to zero at round-off scale") {
    BehaviorParams p = table_params();
    p.delta1 = 0.02;
    p.delta2 = 0.01;
    p.delta3 = 0.03;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(0.0, 1.2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TransitionSchedule sched;
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        sched.gamma.value = unit(rng);
        sched.phi.value = unit(rng);
        const State6 s{dist(rng), dist(rng), dist(rng), dist(rng), dist(rng), dist(rng)};
        const State6 d = reaction_rhs(0.0, s, sched, p);
        double sum = 0.0, scale = 0.0;
        for (double v : d) {
            sum += v;
            scale += std::abs(v);
        }
        worst = std::max(worst, std::abs(sum) / std::max(1.0, scale));
    }
    CHECK(worst <= 1e-15);
}

TEST_CASE("quasi-positivity at the boundary of the cone") {
    BehaviorParams p = table_params();
    p.delta1 = 0.01;
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> dist(0.0, 1.2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TransitionSchedule sched;
    for (int i = 0; i < 12000; ++i) {
        sched.gamma.value = unit(rng);
        sched.phi.value = unit(rng);
        State6 s{dist(rng), dist(rng), dist(rng), dist(rng), dist(rng), dist(rng)};
        s[i % 6] = 0.0;
        const State6 d = reaction_rhs(0.0, s, sched, p);
        CHECK(d[i % 6] >= 0.0);
    }
}

TEST_CASE("reaction_rhs_pde agrees with the first five components") {
    const BehaviorParams p = table_params();
    const TransitionSchedule sched;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(0.0, 1.5);
    for (int i = 0; i < 1000; ++i) {
        const Rho5 r{dist(rng), dist(rng), dist(rng), dist(rng), dist(rng)};
        const Rho5 d5 = reaction_rhs_pde(0.7, r, sched, p);
        const State6 d6 = reaction_rhs(0.7, {r[0], r[1], r[2], r[3], r[4], 0.0}, sched, p);
        for (int k = 0; k < 5; ++k) CHECK(d5[k] == d6[k]);
    }
    const Rho5 zero = reaction_rhs_pde(0.0, {0, 0, 0, 0, 0}, sched, p);
    for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("negative inputs are clamped and counted") {
    const BehaviorParams p = table_params();
    reset_negative_input_clamps();
    CHECK(imitation_f(-1e-13, 0.5, p) == 0.0);
    CHECK(negative_input_clamps() == 1);
    const State6 d = reaction_rhs(0.0, {-1e-13, 0.2, -1e-15, 0.1, 0.0, 0.0},
                                  TransitionSchedule{}, p);
    CHECK(negative_input_clamps() == 3);
    // clamped state is evaluated as if the negatives were zero
    const State6 ref = reaction_rhs(0.0, {0.0, 0.2, 0.0, 0.1, 0.0, 0.0},
                                    TransitionSchedule{}, p);
    for (int i = 0; i < 6; ++i) CHECK(d[i] == ref[i]);
    reset_negative_input_clamps();
}

TEST_CASE("parameter validation") {
    BehaviorParams p = table_params();
    p.b2 = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = table_params();
    p.epsilon = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.epsilon = 0.2;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.epsilon = 0.05;
    std::vector<std::string> warnings;
    p.validate(&warnings);
    CHECK(warnings.size() == 1);
}
