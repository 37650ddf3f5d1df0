#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "esopt/plant.hpp"

using namespace esopt;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an esopt::Error");
    return ErrorKind::validation;
}

} // namespace

TEST_CASE("time constants follow Ra*J/(Ke*Kt) and La/Ra") {
    const TimeConstants defaults = motor_time_constants(MotorParams{});
    CHECK(defaults.tau_m == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(defaults.tau_e == doctest::Approx(0.005).epsilon(1e-14));

    MotorParams p;
    p.ke = 0.5;
    p.kt = 0.5;
    p.ra = 2.0;
    p.la = 1.0;
    p.j = 0.5;
    const TimeConstants tc = motor_time_constants(p);
    CHECK(tc.tau_m == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(tc.tau_e == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("motor parameters must be strictly positive") {
    MotorParams p;
    p.ke = 0.0;
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::validation);
    p = MotorParams{};
    p.la = -0.005;
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::validation);
    p = MotorParams{};
    p.j = std::numeric_limits<double>::quiet_NaN();
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::validation);
    CHECK_NOTHROW(MotorParams{}.validate());
}

TEST_CASE("motor derivatives realize the second-order voltage-to-speed law") {
    SUBCASE("DC equilibrium: y = U/Ke, ydot = 0 gives zero acceleration") {
        const MotorParams p;
        const TimeConstants tc = motor_time_constants(p);
        const double u = 2.0;
        const State2 d = bldc_dynamics(tc, p.ke, State2{u / p.ke, 0.0}, u);
        CHECK(d.x1 == 0.0);
        CHECK(d.x2 == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("unit time constants, unit drive from rest") {
        const State2 d = bldc_dynamics(TimeConstants{1.0, 1.0}, 1.0, State2{0.0, 0.0}, 1.0);
        CHECK(d.x1 == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(d.x2 == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("coasting: friction through tau_m decelerates the shaft") {
        const State2 d = bldc_dynamics(TimeConstants{2.0, 0.5}, 1.0, State2{0.0, 1.0}, 0.0);
        CHECK(d.x1 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(d.x2 == doctest::Approx(-2.0).epsilon(1e-14));
    }
}

TEST_CASE("reference model derivatives") {
    const State2 rest = reference_model_dynamics(ReferenceModelParams{}, State2{}, 0.0);
    CHECK(rest.x1 == 0.0);
    CHECK(rest.x2 == 0.0);

    const State2 a =
        reference_model_dynamics(ReferenceModelParams{1.0, 0.5}, State2{0.3, 1.0}, 0.0);
    CHECK(a.x1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.x2 == doctest::Approx(-1.0).epsilon(1e-14));

    const State2 b =
        reference_model_dynamics(ReferenceModelParams{2.0, 0.25}, State2{0.0, 0.0}, 1.0);
    CHECK(b.x1 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(b.x2 == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("generic plant realizes the adaptive-control form exactly") {
    // With u = kp*eps - kd*x2p the acceleration must equal
    // b_p*kp*eps - (a_p + kd*b_p)*x2p, the textbook modified-plant form.
    const GenericPlantParams g{1.7, 2.3};
    for (double eps : {-2.0, 0.0, 0.5, 3.0}) {
        for (double x2p : {-1.0, 0.0, 2.5}) {
            for (double kp : {0.0, 1.2}) {
                for (double kd : {0.0, 0.4}) {
                    const double u = kp * eps - kd * x2p;
                    const State2 d = generic_plant_dynamics(g, State2{0.0, x2p}, u);
                    CHECK(d.x2 == doctest::Approx(g.b_p * kp * eps -
                                                  (g.a_p + kd * g.b_p) * x2p)
                                      .epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("tracking-error system matrix") {
    const Matrix2 a = build_error_model(ReferenceModelParams{1.0, 0.5});
    CHECK(a.a11 == 0.0);
    CHECK(a.a12 == -1.0);
    CHECK(a.a21 == 1.0);
    CHECK(a.a22 == -1.0);

    const Matrix2 b = build_error_model(ReferenceModelParams{2.0, 1.0});
    CHECK(b.a11 == 0.0);
    CHECK(b.a12 == -1.0);
    CHECK(b.a21 == 4.0);
    CHECK(b.a22 == -4.0);

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> omega(0.05, 50.0);
    std::uniform_real_distribution<double> zeta(0.05, 2.0);
    for (int i = 0; i < 200; ++i) {
        CHECK(is_hurwitz(build_error_model(ReferenceModelParams{omega(gen), zeta(gen)})));
    }
}

TEST_CASE("adaptive gain update") {
    const AdaptationParams rates{1.0, 1.0};
    const SymmetricMatrix2 p{1.0, -0.5, 1.0};  // only p12 (=P21) and p22 enter

    SUBCASE("zero tracking error leaves the gains alone") {
        AdaptiveGains g = AdaptiveGains::from_initial(2.0, 0.3);
        for (int i = 0; i < 10; ++i) {
            g = update_adaptive_gains(g, rates, p, 0.0, 0.0, 5.0, -3.0, 1.0, 0.01);
        }
        CHECK(g.kp == 2.0);
        CHECK(g.kd == 0.3);
    }
    SUBCASE("one quadrature step of the proportional law") {
        // integrand (P21*e1 + P22*e2)*eps = (-0.5 + 1)*2 = 1, dt = 0.1
        const AdaptiveGains g = update_adaptive_gains(
            AdaptiveGains::from_initial(0.0, 0.0), rates, p, 1.0, 1.0, 2.0, 0.0, 1.0, 0.1);
        CHECK(g.kp == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(g.kd == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("one quadrature step of the derivative law carries the minus sign") {
        const AdaptiveGains g = update_adaptive_gains(
            AdaptiveGains::from_initial(0.0, 0.0), rates, p, 1.0, 1.0, 0.0, 2.0, 1.0, 0.1);
        CHECK(g.kd == doctest::Approx(-0.1).epsilon(1e-14));
        CHECK(g.kp == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("gain scales inversely with the adaptation denominators") {
        const AdaptiveGains g = update_adaptive_gains(
            AdaptiveGains::from_initial(0.0, 0.0), AdaptationParams{4.0, 1.0}, p, 1.0,
            1.0, 2.0, 0.0, 1.0, 0.1);
        CHECK(g.kp == doctest::Approx(0.025).epsilon(1e-14));
    }
    SUBCASE("invalid inputs are rejected") {
        const AdaptiveGains g = AdaptiveGains::from_initial(0.0, 0.0);
        CHECK(kind_of([&] {
                  update_adaptive_gains(g, rates, p, 1.0, 1.0, 2.0, 0.0, 1.0, 0.0);
              }) == ErrorKind::validation);
        CHECK(kind_of([&] {
                  update_adaptive_gains(g, rates, p,
                                        std::numeric_limits<double>::quiet_NaN(), 1.0,
                                        2.0, 0.0, 1.0, 0.1);
              }) == ErrorKind::non_finite);
        CHECK(kind_of([&] {
                  update_adaptive_gains(g, AdaptationParams{0.0, 1.0}, p, 1.0, 1.0, 2.0,
                                        0.0, 1.0, 0.1);
              }) == ErrorKind::validation);
    }
}

TEST_CASE("fourth-order integrator") {
    const auto decay = [](const State2& s, double) { return State2{-s.x1, -s.x2}; };

    SUBCASE("zero derivative keeps the state") {
        const auto still = [](const State2&, double) { return State2{0.0, 0.0}; };
        const State2 next = rk4_step(still, State2{1.5, -2.5}, 0.0, 0.1);
        CHECK(next.x1 == 1.5);
        CHECK(next.x2 == -2.5);
    }
    SUBCASE("constant derivative integrates exactly") {
        const auto ramp = [](const State2&, double) { return State2{1.0, 0.0}; };
        const State2 next = rk4_step(ramp, State2{0.25, 0.0}, 0.0, 0.125);
        CHECK(next.x1 == 0.25 + 0.125);
    }
    SUBCASE("exponential decay within 1e-7 after one step") {
        const State2 next = rk4_step(decay, State2{1.0, 0.0}, 0.0, 0.1);
        CHECK(std::abs(next.x1 - std::exp(-0.1)) < 1e-7);
    }
    SUBCASE("halving dt cuts the exponential error by at least 14x") {
        const auto integrate = [&](double dt, int steps) {
            State2 s{1.0, 0.0};
            for (int i = 0; i < steps; ++i) s = rk4_step(decay, s, 0.0, dt);
            return s.x1;
        };
        const double exact = std::exp(-1.0);
        const double err_coarse = std::abs(integrate(0.1, 10) - exact);
        const double err_fine = std::abs(integrate(0.05, 20) - exact);
        CHECK(err_coarse / err_fine >= 14.0);
    }
    SUBCASE("rejects nonpositive dt and non-finite results") {
        CHECK(kind_of([&] { rk4_step(decay, State2{1.0, 0.0}, 0.0, 0.0); }) ==
              ErrorKind::invalid_time_step);
        CHECK(kind_of([&] { rk4_step(decay, State2{1.0, 0.0}, 0.0, -0.1); }) ==
              ErrorKind::invalid_time_step);
        const auto blowup = [](const State2&, double) {
            return State2{1e308, 1e308};
        };
        CHECK(kind_of([&] { rk4_step(blowup, State2{0.0, 0.0}, 0.0, 10.0); }) ==
              ErrorKind::non_finite);
    }
}

TEST_CASE("motor settles to the DC gain U/Ke under constant drive") {
    const MotorParams p;
    const TimeConstants tc = motor_time_constants(p);
    const double u = 0.05;
    const double horizon = 10.0 * std::max(tc.tau_m, tc.tau_e);
    const double dt = 1e-4;
    State2 s;
    for (double t = 0.0; t < horizon; t += dt) {
        s = rk4_step([&](const State2& st, double in) { return bldc_dynamics(tc, p.ke, st, in); },
                     s, u, dt);
    }
    const double target = u / p.ke;
    CHECK(std::abs(s.x1 - target) / target < 0.01);
}

TEST_CASE("reference model matches its closed-form step response") {
    // Open-loop constant input U: the type-1 model has
    //   x2m(t) = (wn*U/(2*zeta)) * (1 - exp(-2*zeta*wn*t))
    //   x1m(t) = (wn*U/(2*zeta)) * t + (U/(4*zeta^2)) * (exp(-2*zeta*wn*t) - 1)
    const ReferenceModelParams m;  // wn = 10, zeta = 0.7
    const double u = 1.0;
    const double dt = 1e-4;
    State2 s;
    double t = 0.0;
    for (int k = 0; k < 10000; ++k) {
        s = rk4_step([&](const State2& st, double in) { return reference_model_dynamics(m, st, in); },
                     s, u, dt);
        t = (k + 1) * dt;
    }
    const double decay = std::exp(-2.0 * m.zeta * m.omega_n * t);
    const double x2_exact = m.omega_n * u / (2.0 * m.zeta) * (1.0 - decay);
    const double x1_exact =
        m.omega_n * u / (2.0 * m.zeta) * t + u / (4.0 * m.zeta * m.zeta) * (decay - 1.0);
    CHECK(std::abs(s.x1 - x1_exact) < 1e-6);
    CHECK(std::abs(s.x2 - x2_exact) < 1e-6);
}

TEST_CASE("closed loop at rest stays at rest") {
    const TrajectoryLog log =
        simulate_closed_loop(MotorParams{}, ReferenceModelParams{}, PIDGains{1.0, 0.0, 0.0},
                             SetpointProfile::constant(0.0), 0.1, 1e-4,
                             SymmetricMatrix2{1.0, 0.0, 1.0});
    CHECK_FALSE(log.diverged);
    CHECK(log.samples.size() == 1001);
    for (const TrajectorySample& s : log.samples) {
        CHECK(s.x1p == 0.0);
        CHECK(s.x2p == 0.0);
        CHECK(s.x1m == 0.0);
        CHECK(s.x2m == 0.0);
        CHECK(s.e_x == 0.0);
        CHECK(s.e_theta == 0.0);
        CHECK(s.u == 0.0);
    }
}

TEST_CASE("identical plant and model track each other to integrator tolerance") {
    const TrajectoryLog log =
        simulate_closed_loop(ModelCopyPlant{}, ReferenceModelParams{},
                             PIDGains{1.0, 0.0, 0.0}, SetpointProfile::step(1.0), 5.0,
                             1e-3, SymmetricMatrix2{1.0, 0.0, 1.0});
    CHECK_FALSE(log.diverged);
    CHECK(log.samples.size() == 5001);
    double worst = 0.0;
    for (const TrajectorySample& s : log.samples) worst = std::max(worst, std::abs(s.e_x));
    CHECK(worst < 1e-9);
}

TEST_CASE("log bookkeeping: timestamps, error columns, gain snapshots") {
    const PIDGains gains{0.5, 2.0, 0.001};
    const TrajectoryLog log =
        simulate_closed_loop(MotorParams{}, ReferenceModelParams{}, gains,
                             SetpointProfile::constant(1.0), 0.2, 2e-4,
                             SymmetricMatrix2{1.0, 0.0, 1.0});
    CHECK_FALSE(log.diverged);
    CHECK(log.samples.size() == 1001);
    for (std::size_t k = 0; k < log.samples.size(); ++k) {
        const TrajectorySample& s = log.samples[k];
        CHECK(s.t == k * 2e-4);
        CHECK(s.e_x == s.x1p - s.x1m);
        CHECK(s.e_theta == s.x2p - s.x2m);
        CHECK(s.kp == gains.kp);
        CHECK(s.ki == gains.ki);
        CHECK(s.kd == gains.kd);
    }
}

TEST_CASE("streaming and materialized simulations agree sample for sample") {
    const PIDGains gains{0.5, 2.0, 0.001};
    const SymmetricMatrix2 p{1.0, 0.0, 1.0};
    const TrajectoryLog log =
        simulate_closed_loop(MotorParams{}, ReferenceModelParams{}, gains,
                             SetpointProfile::constant(1.0), 0.1, 2e-4, p);
    std::vector<TrajectorySample> streamed;
    const bool diverged = stream_closed_loop(
        MotorParams{}, ReferenceModelParams{}, gains, SetpointProfile::constant(1.0),
        0.1, 2e-4, p, [&](const TrajectorySample& s) { streamed.push_back(s); });
    CHECK(diverged == log.diverged);
    REQUIRE(streamed.size() == log.samples.size());
    for (std::size_t k = 0; k < streamed.size(); ++k) {
        CHECK(streamed[k].x1p == log.samples[k].x1p);
        CHECK(streamed[k].u == log.samples[k].u);
    }
}

TEST_CASE("time-step guard") {
    const SymmetricMatrix2 p{1.0, 0.0, 1.0};
    // tau_e = 0.005 for the default motor, so dt must stay at or below 5e-4.
    CHECK(kind_of([&] {
              simulate_closed_loop(MotorParams{}, ReferenceModelParams{},
                                   PIDGains{1.0, 0.0, 0.0},
                                   SetpointProfile::constant(1.0), 1.0, 1e-3, p);
          }) == ErrorKind::invalid_time_step);
    CHECK(kind_of([&] {
              simulate_closed_loop(MotorParams{}, ReferenceModelParams{},
                                   PIDGains{1.0, 0.0, 0.0},
                                   SetpointProfile::constant(1.0), 1.0, 0.0, p);
          }) == ErrorKind::invalid_time_step);
    CHECK(kind_of([&] {
              simulate_closed_loop(MotorParams{}, ReferenceModelParams{},
                                   PIDGains{1.0, 0.0, 0.0},
                                   SetpointProfile::constant(1.0), 1e-5, 1e-4, p);
          }) == ErrorKind::invalid_time_step);
    CHECK_NOTHROW(simulate_closed_loop(MotorParams{}, ReferenceModelParams{},
                                       PIDGains{1.0, 0.0, 0.0},
                                       SetpointProfile::constant(1.0), 0.1, 5e-4, p));
}

TEST_CASE("positive feedback is flagged as divergent and stops early") {
    const TrajectoryLog log =
        simulate_closed_loop(MotorParams{}, ReferenceModelParams{},
                             PIDGains{-1000.0, 0.0, 0.0}, SetpointProfile::constant(1.0),
                             1.5, 1e-4, SymmetricMatrix2{1.0, 0.0, 1.0});
    CHECK(log.diverged);
    CHECK(log.samples.size() < 15001);
}

TEST_CASE("adaptive loop adapts its gains and stays finite") {
    const ReferenceModelParams model;
    const SymmetricMatrix2 p = solve_lyapunov(build_error_model(model),
                                              SymmetricMatrix2{1.0, 0.0, 1.0});
    const AdaptiveController controller{AdaptiveGains::from_initial(0.5, 0.001),
                                        AdaptationParams{1.0, 1.0}};
    const TrajectoryLog log =
        simulate_closed_loop(MotorParams{}, model, controller,
                             SetpointProfile::constant(1.0), 0.5, 1e-4, p);
    CHECK_FALSE(log.diverged);
    CHECK(log.samples.size() == 5001);
    CHECK(log.samples.front().kp == 0.5);
    CHECK(log.samples.front().ki == 0.0);
    // The proportional gain must actually move while errors are nonzero.
    CHECK(log.samples.back().kp != log.samples.front().kp);
    for (const TrajectorySample& s : log.samples) {
        CHECK(std::isfinite(s.u));
        CHECK(s.ki == 0.0);
    }
}
