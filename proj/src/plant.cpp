#include "esopt/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace esopt {
namespace {

constexpr double kDivergenceLimit = 1e6;

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw Error(ErrorKind::validation, std::string(what) + " must be finite");
    }
}

void require_positive(double value, const char* what) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw Error(ErrorKind::validation,
                    std::string(what) + " must be strictly positive");
    }
}

} // namespace

void MotorParams::validate() const {
    require_positive(ke, "motor ke");
    require_positive(kt, "motor kt");
    require_positive(ra, "motor ra");
    require_positive(la, "motor la");
    require_positive(j, "motor j");
    require_positive(b, "motor b");
}

void ReferenceModelParams::validate() const {
    require_positive(omega_n, "model omega_n");
    require_positive(zeta, "model zeta");
}

void GenericPlantParams::validate() const {
    require_finite(a_p, "plant a_p");
    require_finite(b_p, "plant b_p");
    if (b_p == 0.0) {
        throw Error(ErrorKind::validation, "plant b_p must be nonzero");
    }
}

void AdaptationParams::validate() const {
    require_positive(alpha21, "adaptation alpha21");
    require_positive(alpha22, "adaptation alpha22");
}

TimeConstants motor_time_constants(const MotorParams& p) {
    p.validate();
    return TimeConstants{p.ra * p.j / (p.ke * p.kt), p.la / p.ra};
}

State2 bldc_dynamics(const TimeConstants& tc, double ke, const State2& s, double u) {
    return State2{s.x2, (u / ke - tc.tau_m * s.x2 - s.x1) / (tc.tau_m * tc.tau_e)};
}

State2 reference_model_dynamics(const ReferenceModelParams& m, const State2& s,
                                double u) {
    return State2{s.x2, m.omega_n * m.omega_n * u - 2.0 * m.zeta * m.omega_n * s.x2};
}

State2 generic_plant_dynamics(const GenericPlantParams& g, const State2& s, double u) {
    return State2{s.x2, g.b_p * u - g.a_p * s.x2};
}

Matrix2 build_error_model(const ReferenceModelParams& m) {
    m.validate();
    return Matrix2{0.0, -1.0, m.omega_n * m.omega_n, -2.0 * m.zeta * m.omega_n};
}

AdaptiveGains update_adaptive_gains(AdaptiveGains g, const AdaptationParams& a,
                                    const SymmetricMatrix2& p, double e1, double e2,
                                    double eps, double x2p, double ke_tm_te,
                                    double dt) {
    a.validate();
    if (!(dt > 0.0)) {
        throw Error(ErrorKind::validation, "adaptive gain update requires dt > 0");
    }
    const bool inputs_finite =
        std::isfinite(e1) && std::isfinite(e2) && std::isfinite(eps) &&
        std::isfinite(x2p) && std::isfinite(ke_tm_te) && std::isfinite(g.kp) &&
        std::isfinite(g.kd) && std::isfinite(g.integral_state_p) &&
        std::isfinite(g.integral_state_d) && std::isfinite(p.p12) &&
        std::isfinite(p.p22);
    if (!inputs_finite) {
        throw Error(ErrorKind::non_finite,
                    "adaptive gain update received a non-finite input");
    }
    // P21 = P12 by symmetry; the shared factor vanishes whenever the
    // tracking errors do, which keeps the gains frozen at zero error.
    const double weighted_error = p.p12 * e1 + p.p22 * e2;
    g.integral_state_p += weighted_error * eps * dt;
    g.integral_state_d += weighted_error * x2p * dt;
    g.kp = g.kp0 + ke_tm_te / a.alpha21 * g.integral_state_p;
    g.kd = g.kd0 - ke_tm_te / a.alpha22 * g.integral_state_d;
    return g;
}

namespace {

bool state_stable(const State2& s) {
    return std::isfinite(s.x1) && std::isfinite(s.x2) &&
           std::abs(s.x1) <= kDivergenceLimit && std::abs(s.x2) <= kDivergenceLimit;
}

// Shared integration loop, statically dispatched on the plant dynamics so
// every plant variant runs the exact same control and stepping arithmetic.
template <typename PlantDynamics>
bool run_loop(PlantDynamics&& plant_f, const ReferenceModelParams& model,
              const Controller& controller, const SetpointProfile& setpoint,
              double horizon, double dt, const SymmetricMatrix2& p, double ke_tm_te,
              const std::function<void(const TrajectorySample&)>& sink) {
    const bool adaptive = std::holds_alternative<AdaptiveController>(controller);
    PIDGains pid;
    AdaptiveGains gains;
    AdaptationParams rates;
    if (adaptive) {
        const auto& ac = std::get<AdaptiveController>(controller);
        gains = ac.gains;
        rates = ac.rates;
        rates.validate();
        require_finite(gains.kp, "adaptive kp");
        require_finite(gains.kd, "adaptive kd");
        require_finite(gains.kp0, "adaptive kp0");
        require_finite(gains.kd0, "adaptive kd0");
        if (!is_positive_definite(p)) {
            throw Error(ErrorKind::validation,
                        "adaptive control requires a positive definite P matrix");
        }
    } else {
        pid = std::get<PIDGains>(controller);
        require_finite(pid.kp, "pid kp");
        require_finite(pid.ki, "pid ki");
        require_finite(pid.kd, "pid kd");
    }

    const auto model_f = [&model](const State2& s, double u) {
        return reference_model_dynamics(model, s, u);
    };

    State2 plant_state;
    State2 model_state;
    double pid_integral = 0.0;
    double eps_prev = setpoint.at(0.0) - plant_state.x1;
    const long long steps = std::llround(horizon / dt);

    for (long long k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double r = setpoint.at(t);
        const double eps = r - plant_state.x1;

        double u = 0.0;
        if (adaptive) {
            u = gains.kp * eps - gains.kd * plant_state.x2;
        } else {
            pid_integral += eps * dt;
            const double deriv = (eps - eps_prev) / dt;
            u = pid.kp * eps + pid.ki * pid_integral + pid.kd * deriv;
        }
        eps_prev = eps;

        TrajectorySample sample;
        sample.t = t;
        sample.x1p = plant_state.x1;
        sample.x2p = plant_state.x2;
        sample.x1m = model_state.x1;
        sample.x2m = model_state.x2;
        sample.e_x = plant_state.x1 - model_state.x1;
        sample.e_theta = plant_state.x2 - model_state.x2;
        sample.u = u;
        if (adaptive) {
            sample.kp = gains.kp;
            sample.ki = 0.0;
            sample.kd = gains.kd;
        } else {
            sample.kp = pid.kp;
            sample.ki = pid.ki;
            sample.kd = pid.kd;
        }
        sink(sample);
        if (k == steps) break;

        if (adaptive) {
            gains = update_adaptive_gains(gains, rates, p, sample.e_x, sample.e_theta,
                                          eps, plant_state.x2, ke_tm_te, dt);
        }
        // Inputs are sampled at t and held constant across the step.
        const double model_input = r - model_state.x1;
        try {
            plant_state = rk4_step(plant_f, plant_state, u, dt);
            model_state = rk4_step(model_f, model_state, model_input, dt);
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::non_finite) return true;
            throw;
        }
        if (!state_stable(plant_state) || !state_stable(model_state)) return true;
    }
    return false;
}

} // namespace

bool stream_closed_loop(const PlantModel& plant, const ReferenceModelParams& model,
                        const Controller& controller, const SetpointProfile& setpoint,
                        double horizon, double dt, const SymmetricMatrix2& p,
                        const std::function<void(const TrajectorySample&)>& sink) {
    model.validate();
    if (!(dt > 0.0) || !(dt <= horizon)) {
        throw Error(ErrorKind::invalid_time_step,
                    "time step must satisfy 0 < dt <= horizon");
    }
    // Guard dt against the fastest time constant in the loop; a step much
    // larger than that makes fixed-step RK4 numerically unstable.
    double fastest = 1.0 / (model.zeta * model.omega_n);
    double ke_tm_te = 1.0;
    if (const auto* motor = std::get_if<MotorParams>(&plant)) {
        const TimeConstants tc = motor_time_constants(*motor);
        fastest = std::min(fastest, tc.tau_e);
        ke_tm_te = motor->ke * tc.tau_m * tc.tau_e;
    } else if (const auto* generic = std::get_if<GenericPlantParams>(&plant)) {
        generic->validate();
        if (generic->a_p > 0.0) fastest = std::min(fastest, 1.0 / generic->a_p);
    }
    if (dt > fastest / 10.0) {
        throw Error(ErrorKind::invalid_time_step,
                    "time step " + std::to_string(dt) +
                        " exceeds stability guard " + std::to_string(fastest / 10.0));
    }

    if (const auto* motor = std::get_if<MotorParams>(&plant)) {
        const TimeConstants tc = motor_time_constants(*motor);
        const double ke = motor->ke;
        return run_loop(
            [tc, ke](const State2& s, double u) { return bldc_dynamics(tc, ke, s, u); },
            model, controller, setpoint, horizon, dt, p, ke_tm_te, sink);
    }
    if (const auto* generic = std::get_if<GenericPlantParams>(&plant)) {
        const GenericPlantParams g = *generic;
        return run_loop(
            [g](const State2& s, double u) { return generic_plant_dynamics(g, s, u); },
            model, controller, setpoint, horizon, dt, p, ke_tm_te, sink);
    }
    return run_loop(
        [&model](const State2& s, double u) {
            return reference_model_dynamics(model, s, u);
        },
        model, controller, setpoint, horizon, dt, p, ke_tm_te, sink);
}

TrajectoryLog simulate_closed_loop(const PlantModel& plant,
                                   const ReferenceModelParams& model,
                                   const Controller& controller,
                                   const SetpointProfile& setpoint, double horizon,
                                   double dt, const SymmetricMatrix2& p) {
    TrajectoryLog log;
    log.samples.reserve(static_cast<std::size_t>(horizon / dt) + 2);
    log.diverged = stream_closed_loop(
        plant, model, controller, setpoint, horizon, dt, p,
        [&log](const TrajectorySample& s) { log.samples.push_back(s); });
    return log;
}

} // namespace esopt
