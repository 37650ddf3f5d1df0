#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "esopt/error.hpp"
#include "esopt/lyapunov.hpp"
#include "esopt/plant.hpp"
#include "esopt/types.hpp"

namespace esopt {

/// Instantaneous tracking cost: the quadratic form eᵀPe on the tracking
/// error pair plus weighted squared deviation penalties,
///   e·P·e + Σᵢ alpha_w[i]·a[i]² + Σᵢ beta_w[i]·b[i]².
/// `a` must match `alpha_w` in length and `b` must match `beta_w`.
/// Nonnegative whenever P is positive definite and the weights are >= 0;
/// strictly positive unless e, a and b all vanish. Throws
/// Error(ErrorKind::non_finite) when any input or the result is not finite.
double instant_cost(double e1, double e2, const SymmetricMatrix2& p,
                    std::span<const double> a, std::span<const double> b,
                    std::span<const double> alpha_w, std::span<const double> beta_w);

/// Configuration of the closed-loop tracking cost: the Lyapunov weight Q,
/// deviation penalties, simulation window, setpoint, and the sentinel
/// returned for divergent candidates.
struct LyapunovObjectiveSpec {
    SymmetricMatrix2 q{1.0, 0.0, 1.0};  ///< SPD weight in the Lyapunov solve
    double alpha_w = 0.0;  ///< weight on the squared (kp - nominal_kp) deviation
    double beta_w = 0.0;   ///< weight on the squared (kd - nominal_kd) deviation
    double nominal_kp = 1.0;
    double nominal_kd = 0.0;
    double horizon = 1.5;  ///< simulated time span, s
    double dt = 1e-4;      ///< integrator step, s
    SetpointProfile setpoint = SetpointProfile::constant(1.0);
    double divergence_penalty = 1000.0;  ///< cost assigned to unstable loops

    /// Throws Error(ErrorKind::validation) on an SPD/positivity violation.
    void validate() const;
};

/// Score one PID candidate: solve P from the model's error dynamics and
/// spec.q, simulate the closed loop, and integrate instant_cost over the
/// horizon with a rectangle rule at the simulation dt (deviations taken
/// against spec.nominal_kp / spec.nominal_kd). Returns
/// spec.divergence_penalty exactly when the simulation diverges.
/// Deterministic: identical inputs give bit-identical results.
double tracking_objective(const LyapunovObjectiveSpec& spec, const MotorParams& motor,
                          const ReferenceModelParams& model, const PIDGains& candidate);

/// A named objective over a bounded box with exact evaluation accounting.
/// Calls go through operator() so the counter can never miss one; the
/// counter is atomic, the single synchronization point for concurrent use.
class ObjectiveFunction {
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    ObjectiveFunction(std::string name, Bounds bounds, Evaluator evaluator);

    ObjectiveFunction(const ObjectiveFunction&) = delete;
    ObjectiveFunction& operator=(const ObjectiveFunction&) = delete;
    ObjectiveFunction(ObjectiveFunction&& other) noexcept;
    ObjectiveFunction& operator=(ObjectiveFunction&& other) noexcept;

    /// Evaluate the candidate point and increment the counter by one.
    double operator()(std::span<const double> x) const;

    const std::string& name() const noexcept { return name_; }
    std::size_t dimension() const noexcept { return bounds_.dimension(); }
    const Bounds& bounds() const noexcept { return bounds_; }

    /// Total evaluations issued through this object so far.
    std::uint64_t evaluations() const noexcept { return evaluations_.load(); }

private:
    std::string name_;
    Bounds bounds_;
    Evaluator evaluator_;
    mutable std::atomic<std::uint64_t> evaluations_{0};
};

/// Analytic benchmark surface by name: "sphere" (Σxᵢ²), "rosenbrock"
/// (Σ 100(xᵢ₊₁-xᵢ²)² + (1-xᵢ)²) or "rastrigin" (10n + Σ xᵢ²-10cos(2πxᵢ)).
/// Throws Error(ErrorKind::unknown_name) for any other name and
/// Error(ErrorKind::validation) when bounds do not match the dimension.
ObjectiveFunction make_benchmark(const std::string& name, std::size_t dimension,
                                 Bounds bounds);

/// Wrap the closed-loop tracking cost as a 3-dimensional objective over
/// (kp, ki, kd) gain candidates.
ObjectiveFunction make_tracking_objective(LyapunovObjectiveSpec spec,
                                          MotorParams motor,
                                          ReferenceModelParams model, Bounds bounds);

} // namespace esopt
