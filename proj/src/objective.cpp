#include "esopt/objective.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace esopt {
namespace {

bool all_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

} // namespace

double instant_cost(double e1, double e2, const SymmetricMatrix2& p,
                    std::span<const double> a, std::span<const double> b,
                    std::span<const double> alpha_w, std::span<const double> beta_w) {
    if (a.size() != alpha_w.size() || b.size() != beta_w.size()) {
        throw Error(ErrorKind::validation,
                    "deviation vectors must match their weight vectors in length");
    }
    if (!std::isfinite(e1) || !std::isfinite(e2) || !all_finite(a) ||
        !all_finite(b) || !all_finite(alpha_w) || !all_finite(beta_w)) {
        throw Error(ErrorKind::non_finite, "instant cost received a non-finite input");
    }
    double cost = p.p11 * e1 * e1 + 2.0 * p.p12 * e1 * e2 + p.p22 * e2 * e2;
    for (std::size_t i = 0; i < a.size(); ++i) cost += alpha_w[i] * a[i] * a[i];
    for (std::size_t i = 0; i < b.size(); ++i) cost += beta_w[i] * b[i] * b[i];
    if (!std::isfinite(cost)) {
        throw Error(ErrorKind::non_finite, "instant cost overflowed");
    }
    return cost;
}

void LyapunovObjectiveSpec::validate() const {
    if (!is_positive_definite(q)) {
        throw Error(ErrorKind::validation, "objective q must be positive definite");
    }
    if (!std::isfinite(alpha_w) || alpha_w < 0.0 || !std::isfinite(beta_w) ||
        beta_w < 0.0) {
        throw Error(ErrorKind::validation,
                    "objective weights alpha_w and beta_w must be >= 0");
    }
    if (!std::isfinite(nominal_kp) || !std::isfinite(nominal_kd)) {
        throw Error(ErrorKind::validation, "objective nominal gains must be finite");
    }
    if (!std::isfinite(horizon) || !(horizon > 0.0)) {
        throw Error(ErrorKind::validation, "objective horizon must be positive");
    }
    if (!std::isfinite(dt) || !(dt > 0.0)) {
        throw Error(ErrorKind::validation, "objective dt must be positive");
    }
    if (!std::isfinite(divergence_penalty) || !(divergence_penalty > 0.0)) {
        throw Error(ErrorKind::validation,
                    "objective divergence_penalty must be positive");
    }
}

double tracking_objective(const LyapunovObjectiveSpec& spec, const MotorParams& motor,
                          const ReferenceModelParams& model,
                          const PIDGains& candidate) {
    spec.validate();
    const SymmetricMatrix2 p = solve_lyapunov(build_error_model(model), spec.q);
    const double a[1] = {candidate.kp - spec.nominal_kp};
    const double b[1] = {candidate.kd - spec.nominal_kd};
    const double alpha_w[1] = {spec.alpha_w};
    const double beta_w[1] = {spec.beta_w};

    // Rectangle rule over [0, T): every sample except the final one
    // contributes instant_cost * dt.
    const long long steps = std::llround(spec.horizon / spec.dt);
    long long index = 0;
    double total = 0.0;
    const bool diverged = stream_closed_loop(
        motor, model, candidate, spec.setpoint, spec.horizon, spec.dt, p,
        [&](const TrajectorySample& s) {
            if (index++ == steps) return;
            total += instant_cost(s.e_x, s.e_theta, p, a, b, alpha_w, beta_w) * spec.dt;
        });
    return diverged ? spec.divergence_penalty : total;
}

ObjectiveFunction::ObjectiveFunction(std::string name, Bounds bounds,
                                     Evaluator evaluator)
    : name_(std::move(name)), bounds_(std::move(bounds)),
      evaluator_(std::move(evaluator)) {
    bounds_.validate();
    if (!evaluator_) {
        throw Error(ErrorKind::validation, "objective evaluator must be callable");
    }
}

ObjectiveFunction::ObjectiveFunction(ObjectiveFunction&& other) noexcept
    : name_(std::move(other.name_)), bounds_(std::move(other.bounds_)),
      evaluator_(std::move(other.evaluator_)),
      evaluations_(other.evaluations_.load()) {}

ObjectiveFunction& ObjectiveFunction::operator=(ObjectiveFunction&& other) noexcept {
    if (this != &other) {
        name_ = std::move(other.name_);
        bounds_ = std::move(other.bounds_);
        evaluator_ = std::move(other.evaluator_);
        evaluations_.store(other.evaluations_.load());
    }
    return *this;
}

double ObjectiveFunction::operator()(std::span<const double> x) const {
    if (x.size() != bounds_.dimension()) {
        throw Error(ErrorKind::validation,
                    "candidate dimension does not match the objective");
    }
    evaluations_.fetch_add(1, std::memory_order_relaxed);
    return evaluator_(x);
}

ObjectiveFunction make_benchmark(const std::string& name, std::size_t dimension,
                                 Bounds bounds) {
    if (dimension < 1) {
        throw Error(ErrorKind::validation, "benchmark dimension must be >= 1");
    }
    bounds.validate();
    if (bounds.dimension() != dimension) {
        throw Error(ErrorKind::validation,
                    "benchmark bounds must match the requested dimension");
    }
    ObjectiveFunction::Evaluator evaluator;
    if (name == "sphere") {
        evaluator = [](std::span<const double> x) {
            double sum = 0.0;
            for (double xi : x) sum += xi * xi;
            return sum;
        };
    } else if (name == "rosenbrock") {
        evaluator = [](std::span<const double> x) {
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                const double gap = x[i + 1] - x[i] * x[i];
                const double off = 1.0 - x[i];
                sum += 100.0 * gap * gap + off * off;
            }
            return sum;
        };
    } else if (name == "rastrigin") {
        evaluator = [](std::span<const double> x) {
            double sum = 10.0 * static_cast<double>(x.size());
            for (double xi : x) {
                sum += xi * xi - 10.0 * std::cos(2.0 * std::numbers::pi * xi);
            }
            return sum;
        };
    } else {
        throw Error(ErrorKind::unknown_name, "unknown benchmark \"" + name + "\"");
    }
    return ObjectiveFunction(name, std::move(bounds), std::move(evaluator));
}

ObjectiveFunction make_tracking_objective(LyapunovObjectiveSpec spec,
                                          MotorParams motor,
                                          ReferenceModelParams model, Bounds bounds) {
    spec.validate();
    motor.validate();
    model.validate();
    bounds.validate();
    if (bounds.dimension() != 3) {
        throw Error(ErrorKind::validation,
                    "tracking objective requires 3-dimensional (kp, ki, kd) bounds");
    }
    auto evaluator = [spec, motor, model](std::span<const double> x) {
        return tracking_objective(spec, motor, model, PIDGains{x[0], x[1], x[2]});
    };
    return ObjectiveFunction("bldc-pid", std::move(bounds), std::move(evaluator));
}

} // namespace esopt
