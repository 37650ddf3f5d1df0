#pragma once

#include <vector>

#include "esopt/error.hpp"
#include "esopt/rng.hpp"
#include "esopt/types.hpp"

namespace esopt {

/// Heavy-tailed flight distribution parameters.
struct LevyParams {
    double lambda = 1.5;     ///< tail exponent, open interval (1, 3)
    double step_scale = 5.0; ///< base step length in normalized units

    void validate() const;  ///< enforces 1 < lambda < 3 and step_scale > 0
};

/// Tail density lambda·Γ(lambda)·sin(pi·lambda/2)/(pi·s^(1+lambda)) of the
/// flight-length distribution at step length `step`. Strictly positive and
/// strictly decreasing in `step` for lambda in (1, 2). Throws
/// Error(ErrorKind::domain) when step <= 0 or lambda is outside (1, 3);
/// lambda = 2 is rejected because the sine factor collapses the density.
double levy_density(double step, double lambda);

/// Scale of the numerator Gaussian in the Mantegna step construction:
/// sigma_u = [Γ(1+lambda)·|sin(pi·lambda/2)| /
///            (Γ((1+lambda)/2)·lambda·2^((lambda-1)/2))]^(1/lambda).
double mantegna_sigma(double lambda);

/// One signed heavy-tailed step, step_scale·u/|v|^(1/lambda) with
/// u ~ Normal(0, sigma_u²) and v ~ Normal(0, 1) (Mantegna construction).
/// Consumes exactly four uniform draws. Deterministic for a fixed rng state.
double sample_levy_step(DrawSource& rng, const LevyParams& params);

/// Propose one flight per position: every coordinate is perturbed by an
/// independent sample_levy_step whose scale is step_scale·(upper-lower)/10
/// for that coordinate, then clamped to the bounds. A non-finite step
/// (possible when the denominator draw is exactly zero) leaves its
/// coordinate unchanged. Output order matches input order.
std::vector<PositionVector> global_explore(const std::vector<PositionVector>& positions,
                                           const Bounds& bounds,
                                           const LevyParams& params, DrawSource& rng);

} // namespace esopt
