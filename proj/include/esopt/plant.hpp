#pragma once

#include <cmath>
#include <functional>
#include <variant>
#include <vector>

#include "esopt/error.hpp"
#include "esopt/lyapunov.hpp"

namespace esopt {

// ---------------------------------------------------------------------------
// Parameter blocks
// ---------------------------------------------------------------------------

/// Physical constants of the simulated brushless DC motor. Defaults describe
/// a small machine with well-separated mechanical/electrical time constants
/// (tau_m = 0.1 s, tau_e = 0.005 s).
struct MotorParams {
    double ke = 0.05;   ///< back-EMF constant, V·s/rad
    double kt = 0.05;   ///< torque constant, N·m/A
    double ra = 1.0;    ///< armature resistance, Ohm
    double la = 0.005;  ///< armature inductance, H
    double j = 2.5e-4;  ///< rotor inertia, kg·m²
    double b = 1e-4;    ///< viscous friction, N·m·s/rad (unused by the
                        ///< reduced second-order model, kept for completeness)

    /// Throws Error(ErrorKind::validation) unless every constant is strictly
    /// positive and finite.
    void validate() const;
};

/// Mechanical and electrical time constants derived from MotorParams.
struct TimeConstants {
    double tau_m = 0.0;  ///< mechanical, Ra·J/(Ke·Kt), s
    double tau_e = 0.0;  ///< electrical, La/Ra, s
};

/// tau_m = Ra·J/(Ke·Kt), tau_e = La/Ra. Validates `p` first.
TimeConstants motor_time_constants(const MotorParams& p);

/// Second-order reference model: x1m' = x2m, x2m' = omega_n²·U - 2·zeta·omega_n·x2m.
struct ReferenceModelParams {
    double omega_n = 10.0;  ///< natural frequency, rad/s
    double zeta = 0.7;      ///< damping ratio

    void validate() const;  ///< omega_n > 0, zeta > 0, both finite
};

/// Second-order plant b_p/(s² + a_p·s) used by derivation-level tests:
/// x1p' = x2p, x2p' = b_p·u - a_p·x2p.
struct GenericPlantParams {
    double a_p = 0.0;  ///< pole coefficient, 1/s
    double b_p = 1.0;  ///< input gain, must be nonzero

    void validate() const;
};

/// Fixed PID controller gains.
struct PIDGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

/// Adaptation-rate denominators of the gain-update integrals.
struct AdaptationParams {
    double alpha21 = 1.0;
    double alpha22 = 1.0;

    void validate() const;  ///< both strictly positive and finite
};

/// State of the adaptive controller: current gains plus the running
/// integral accumulators that drive them away from the initial gains.
struct AdaptiveGains {
    double kp = 0.0;   ///< current proportional gain
    double kd = 0.0;   ///< current derivative gain
    double kp0 = 0.0;  ///< initial proportional gain
    double kd0 = 0.0;  ///< initial derivative gain
    double integral_state_p = 0.0;  ///< accumulator behind kp
    double integral_state_d = 0.0;  ///< accumulator behind kd

    /// Adaptive gains that start at (and initially equal) the given values.
    static AdaptiveGains from_initial(double kp0, double kd0) {
        return AdaptiveGains{kp0, kd0, kp0, kd0, 0.0, 0.0};
    }
};

/// Setpoint R(t): `initial` before `step_time`, `final_value` from then on.
/// With step_time = 0 this is a step applied at t = 0.
struct SetpointProfile {
    double initial = 0.0;
    double final_value = 1.0;
    double step_time = 0.0;

    double at(double t) const { return t < step_time ? initial : final_value; }

    static SetpointProfile constant(double r) { return SetpointProfile{r, r, 0.0}; }
    static SetpointProfile step(double r, double at_time = 0.0) {
        return SetpointProfile{0.0, r, at_time};
    }
};

// ---------------------------------------------------------------------------
// Dynamics
// ---------------------------------------------------------------------------

/// Two-component state vector shared by the plant and the reference model.
struct State2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Motor ODE realized from tau_m·tau_e·y'' + tau_m·y' + y = u/Ke:
/// returns (y', y'') for state (y, y') under input voltage u.
State2 bldc_dynamics(const TimeConstants& tc, double ke, const State2& s, double u);

/// Reference model derivatives (x1m', x2m') for input U.
State2 reference_model_dynamics(const ReferenceModelParams& m, const State2& s, double u);

/// Generic second-order plant derivatives (x1p', x2p') for input u.
State2 generic_plant_dynamics(const GenericPlantParams& g, const State2& s, double u);

/// System matrix of the model-tracking error dynamics,
/// [[0, -1], [omega_n², -2·zeta·omega_n]]; Hurwitz for every valid model.
Matrix2 build_error_model(const ReferenceModelParams& m);

/// One explicit-Euler quadrature step of the adaptive gain laws:
///   kp = kp0 + (ke_tm_te/alpha21)·∫(P21·e1 + P22·e2)·eps dt
///   kd = kd0 - (ke_tm_te/alpha22)·∫(P21·e1 + P22·e2)·x2p dt
/// where eps is the setpoint error R - x1p. Throws
/// Error(ErrorKind::non_finite) if any input is NaN or infinite (upstream
/// divergence) and Error(ErrorKind::validation) if dt <= 0.
AdaptiveGains update_adaptive_gains(AdaptiveGains g, const AdaptationParams& a,
                                    const SymmetricMatrix2& p, double e1, double e2,
                                    double eps, double x2p, double ke_tm_te, double dt);

/// Classical fourth-order Runge-Kutta advance of `state` by `dt` under the
/// two-state derivative function `f(state, input)`, with `input` held
/// constant across the step (zero-order hold). Throws
/// Error(ErrorKind::invalid_time_step) if dt <= 0 and
/// Error(ErrorKind::non_finite) if the result is not finite.
template <typename Dynamics>
State2 rk4_step(Dynamics&& f, const State2& state, double input, double dt) {
    if (!(dt > 0.0)) {
        throw Error(ErrorKind::invalid_time_step, "rk4_step requires dt > 0");
    }
    const State2 k1 = f(state, input);
    const State2 k2 = f(State2{state.x1 + 0.5 * dt * k1.x1, state.x2 + 0.5 * dt * k1.x2}, input);
    const State2 k3 = f(State2{state.x1 + 0.5 * dt * k2.x1, state.x2 + 0.5 * dt * k2.x2}, input);
    const State2 k4 = f(State2{state.x1 + dt * k3.x1, state.x2 + dt * k3.x2}, input);
    const State2 next{
        state.x1 + dt / 6.0 * (k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1),
        state.x2 + dt / 6.0 * (k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2)};
    if (!std::isfinite(next.x1) || !std::isfinite(next.x2)) {
        throw Error(ErrorKind::non_finite, "rk4_step produced a non-finite state");
    }
    return next;
}

// ---------------------------------------------------------------------------
// Closed-loop simulation
// ---------------------------------------------------------------------------

/// Adaptive controller bundle: mutable gain state plus its adaptation rates.
struct AdaptiveController {
    AdaptiveGains gains;
    AdaptationParams rates;
};

/// Controller driving the plant: fixed PID or the adaptive law.
using Controller = std::variant<PIDGains, AdaptiveController>;

/// Plant placed in the loop. ModelCopyPlant substitutes an exact copy of the
/// reference model dynamics, used to verify that identical dynamics under
/// identical inputs track each other exactly.
struct ModelCopyPlant {};
using PlantModel = std::variant<MotorParams, GenericPlantParams, ModelCopyPlant>;

/// One row of the simulation record. e_x = x1p - x1m and
/// e_theta = x2p - x2m at the same instant; u is the control held over
/// [t, t+dt); kp/ki/kd snapshot the controller gains at t.
struct TrajectorySample {
    double t = 0.0;
    double x1p = 0.0;
    double x2p = 0.0;
    double x1m = 0.0;
    double x2m = 0.0;
    double e_x = 0.0;
    double e_theta = 0.0;
    double u = 0.0;
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

/// Time-ordered simulation record with samples at t = 0, dt, ..., N·dt.
/// When `diverged` is set, the record stops at the sample where a state
/// magnitude first left the stable region.
struct TrajectoryLog {
    std::vector<TrajectorySample> samples;
    bool diverged = false;
};

/// Streaming form of simulate_closed_loop: invokes `sink` once per sample
/// instead of materializing a log, and returns the diverged flag. Both the
/// plant and the reference model advance by RK4 with inputs sampled at the
/// start of each step (zero-order hold); the model input is the unity
/// feedback U = R - x1m, closing the model loop at DC gain one. Controls:
/// PID mode u = kp·eps + ki·∫eps dt + kd·d(eps)/dt on eps = R - x1p
/// (rectangle-rule integral, one-step backward difference); adaptive mode
/// u = kp·eps - kd·x2p with gains advanced by update_adaptive_gains using
/// the supplied P. Divergence (any |state| > 1e6, or a non-finite state)
/// stops the run early with the flag set. Throws
/// Error(ErrorKind::invalid_time_step) when dt is outside (0, T] or exceeds
/// one tenth of the fastest closed-loop time constant.
bool stream_closed_loop(const PlantModel& plant, const ReferenceModelParams& model,
                        const Controller& controller, const SetpointProfile& setpoint,
                        double horizon, double dt, const SymmetricMatrix2& p,
                        const std::function<void(const TrajectorySample&)>& sink);

/// Simulate the plant and reference model side by side under the shared
/// setpoint and collect the full trajectory record. See stream_closed_loop
/// for the integration and control conventions.
TrajectoryLog simulate_closed_loop(const PlantModel& plant,
                                   const ReferenceModelParams& model,
                                   const Controller& controller,
                                   const SetpointProfile& setpoint, double horizon,
                                   double dt, const SymmetricMatrix2& p);

} // namespace esopt
