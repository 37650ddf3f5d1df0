#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "esopt/levy.hpp"

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

/// Counts how many uniforms a wrapped source hands out.
class CountingSource final : public DrawSource {
public:
    explicit CountingSource(DrawSource& inner) : inner_(inner) {}
    double uniform() override {
        ++count_;
        return inner_.uniform();
    }
    std::size_t count() const { return count_; }

private:
    DrawSource& inner_;
    std::size_t count_ = 0;
};

} // namespace

TEST_CASE("flight parameters are range checked") {
    CHECK_NOTHROW(LevyParams{}.validate());
    CHECK(kind_of([] { LevyParams{1.0, 5.0}.validate(); }) == ErrorKind::validation);
    CHECK(kind_of([] { LevyParams{3.0, 5.0}.validate(); }) == ErrorKind::validation);
    CHECK(kind_of([] { LevyParams{1.5, 0.0}.validate(); }) == ErrorKind::validation);
    CHECK(kind_of([] { LevyParams{1.5, -1.0}.validate(); }) == ErrorKind::validation);
}

TEST_CASE("tail density agrees with the unsimplified product form") {
    // The implementation computes lambda*Gamma(lambda)*sin(pi*lambda/2) /
    // (pi*s^(1+lambda)). The same density is often written as the product
    // (lambda^2/2) * (sin(p)/p) * Gamma(lambda)/s^(lambda+1) with
    // p = pi*lambda/2; the two must agree to rounding everywhere.
    for (double lambda : {1.1, 1.5, 1.9}) {
        for (double s : {0.5, 1.0, 5.0, 50.0}) {
            const double p = std::numbers::pi * lambda / 2.0;
            const double product_form = (lambda * lambda / 2.0) * (std::sin(p) / p) *
                                        std::tgamma(lambda) / std::pow(s, lambda + 1.0);
            CHECK(levy_density(s, lambda) ==
                  doctest::Approx(product_form).epsilon(1e-12));
        }
    }
}

TEST_CASE("tail density reference value") {
    CHECK(std::abs(levy_density(2.0, 1.5) - 0.052895) < 1e-5);
}

TEST_CASE("pure power-law ratio in the step length") {
    for (double s : {0.25, 1.0, 3.0}) {
        const double ratio = levy_density(2.0 * s, 1.5) / levy_density(s, 1.5);
        CHECK(ratio == doctest::Approx(std::pow(2.0, -2.5)).epsilon(1e-12));
    }
}

TEST_CASE("density is strictly decreasing in the step length") {
    double previous = levy_density(0.1, 1.5);
    for (double s = 0.2; s < 20.0; s += 0.1) {
        const double current = levy_density(s, 1.5);
        CHECK(current < previous);
        CHECK(current > 0.0);
        previous = current;
    }
}

TEST_CASE("density domain errors") {
    CHECK(kind_of([] { levy_density(0.0, 1.5); }) == ErrorKind::domain);
    CHECK(kind_of([] { levy_density(-1.0, 1.5); }) == ErrorKind::domain);
    CHECK(kind_of([] { levy_density(1.0, 1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { levy_density(1.0, 3.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { levy_density(1.0, 2.0); }) == ErrorKind::domain);
}

TEST_CASE("numerator scale of the two-Gaussian construction") {
    // Closed form at lambda = 1.5, cross-checked against the published
    // constant for this stability index.
    const double lambda = 1.5;
    const double expected =
        std::pow(std::tgamma(1.0 + lambda) * std::abs(std::sin(std::numbers::pi * lambda / 2.0)) /
                     (std::tgamma((1.0 + lambda) / 2.0) * lambda *
                      std::pow(2.0, (lambda - 1.0) / 2.0)),
                 1.0 / lambda);
    CHECK(mantegna_sigma(lambda) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(mantegna_sigma(lambda) == doctest::Approx(0.696575).epsilon(1e-5));
}

TEST_CASE("step sampler determinism and draw accounting") {
    Rng a(12345);
    Rng b(12345);
    const LevyParams params;
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_levy_step(a, params) == sample_levy_step(b, params));
    }

    Rng inner(7);
    CountingSource counted(inner);
    sample_levy_step(counted, params);
    CHECK(counted.count() == 4);  // two Box-Muller normals
    sample_levy_step(counted, params);
    CHECK(counted.count() == 8);
}

TEST_CASE("step sampler magnitude is on the step_scale order") {
    Rng rng(2026);
    const LevyParams params{1.5, 1.0};
    std::vector<double> magnitudes;
    magnitudes.reserve(100000);
    double sign_sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double step = sample_levy_step(rng, params);
        magnitudes.push_back(std::abs(step));
        sign_sum += (step > 0.0) - (step < 0.0);
    }
    std::nth_element(magnitudes.begin(), magnitudes.begin() + 50000, magnitudes.end());
    const double median = magnitudes[50000];
    CHECK(median > 0.3);
    CHECK(median < 3.0);
    // Frozen from the first validated run of this reference seed.
    CHECK(median == doctest::Approx(0.63127775339773595).epsilon(1e-12));
    CHECK(std::abs(sign_sum / 100000.0) < 0.02);
}

TEST_CASE("global exploration clamps, preserves shape, and replays") {
    const Bounds bounds = uniform_bounds(-2.0, 3.0, 3);
    const std::vector<PositionVector> positions{{0.0, 1.0, -1.0}, {2.0, 2.0, 2.0}};

    SUBCASE("vanishing scale reduces to the identity") {
        Rng rng(1);
        const auto proposals =
            global_explore(positions, bounds, LevyParams{1.5, 1e-12}, rng);
        REQUIRE(proposals.size() == positions.size());
        for (std::size_t i = 0; i < proposals.size(); ++i) {
            for (std::size_t d = 0; d < 3; ++d) {
                CHECK(std::abs(proposals[i][d] - positions[i][d]) < 1e-9);
            }
        }
    }
    SUBCASE("large flights stay inside the box") {
        Rng rng(99);
        for (int round = 0; round < 200; ++round) {
            const auto proposals =
                global_explore(positions, bounds, LevyParams{1.5, 50.0}, rng);
            for (const PositionVector& p : proposals) {
                CHECK(bounds.contains(p));
            }
        }
    }
    SUBCASE("fixed seed gives identical proposals") {
        Rng r1(31);
        Rng r2(31);
        const auto a = global_explore(positions, bounds, LevyParams{}, r1);
        const auto b = global_explore(positions, bounds, LevyParams{}, r2);
        CHECK(a == b);
    }
    SUBCASE("dimension mismatch is rejected") {
        Rng rng(1);
        const std::vector<PositionVector> bad{{0.0, 0.0}};
        CHECK(kind_of([&] { global_explore(bad, bounds, LevyParams{}, rng); }) ==
              ErrorKind::validation);
    }
}
