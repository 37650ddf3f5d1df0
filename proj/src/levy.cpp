#include "esopt/levy.hpp"

#include <cmath>
#include <numbers>

namespace esopt {

void LevyParams::validate() const {
    if (!std::isfinite(lambda) || !(lambda > 1.0) || !(lambda < 3.0)) {
        throw Error(ErrorKind::validation,
                    "levy lambda must lie in the open interval (1, 3)");
    }
    if (!std::isfinite(step_scale) || !(step_scale > 0.0)) {
        throw Error(ErrorKind::validation, "levy step_scale must be positive");
    }
}

double levy_density(double step, double lambda) {
    if (!std::isfinite(step) || !(step > 0.0)) {
        throw Error(ErrorKind::domain, "levy density requires step > 0");
    }
    if (!std::isfinite(lambda) || !(lambda > 1.0) || !(lambda < 3.0) ||
        lambda == 2.0) {
        throw Error(ErrorKind::domain,
                    "levy density requires lambda in (1, 3) excluding 2");
    }
    return lambda * std::tgamma(lambda) * std::sin(std::numbers::pi * lambda / 2.0) /
           (std::numbers::pi * std::pow(step, 1.0 + lambda));
}

double mantegna_sigma(double lambda) {
    // |sin| keeps the radicand positive on the whole (1, 3) range; on (1, 2)
    // the sine is positive and the absolute value changes nothing.
    const double numerator =
        std::tgamma(1.0 + lambda) * std::abs(std::sin(std::numbers::pi * lambda / 2.0));
    const double denominator = std::tgamma((1.0 + lambda) / 2.0) * lambda *
                               std::pow(2.0, (lambda - 1.0) / 2.0);
    return std::pow(numerator / denominator, 1.0 / lambda);
}

double sample_levy_step(DrawSource& rng, const LevyParams& params) {
    params.validate();
    const double u = mantegna_sigma(params.lambda) * standard_normal(rng);
    const double v = standard_normal(rng);
    return params.step_scale * u / std::pow(std::abs(v), 1.0 / params.lambda);
}

std::vector<PositionVector> global_explore(const std::vector<PositionVector>& positions,
                                           const Bounds& bounds,
                                           const LevyParams& params, DrawSource& rng) {
    params.validate();
    bounds.validate();
    std::vector<PositionVector> proposals;
    proposals.reserve(positions.size());
    for (const PositionVector& position : positions) {
        if (position.size() != bounds.dimension()) {
            throw Error(ErrorKind::validation,
                        "position dimension does not match bounds");
        }
        PositionVector proposal = position;
        for (std::size_t d = 0; d < proposal.size(); ++d) {
            LevyParams coord = params;
            coord.step_scale =
                params.step_scale * (bounds.upper[d] - bounds.lower[d]) / 10.0;
            const double moved = proposal[d] + sample_levy_step(rng, coord);
            if (std::isfinite(moved)) proposal[d] = bounds.clamp(moved, d);
        }
        proposals.push_back(std::move(proposal));
    }
    return proposals;
}

} // namespace esopt
