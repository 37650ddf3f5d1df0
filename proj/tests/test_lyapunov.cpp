#include <cmath>
#include <random>

#include "doctest.h"
#include "esopt/lyapunov.hpp"

#ifdef ESOPT_HAVE_EIGEN
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#endif

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

Matrix2 random_matrix(std::mt19937_64& gen, double span = 5.0) {
    std::uniform_real_distribution<double> u(-span, span);
    return Matrix2{u(gen), u(gen), u(gen), u(gen)};
}

SymmetricMatrix2 random_spd(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> diag(0.1, 2.0);
    std::uniform_real_distribution<double> unit(-0.9, 0.9);
    SymmetricMatrix2 q;
    q.p11 = diag(gen);
    q.p22 = diag(gen);
    q.p12 = unit(gen) * std::sqrt(q.p11 * q.p22);
    return q;
}

} // namespace

TEST_CASE("2x2 stability test matches the trace/determinant rule") {
    CHECK(is_hurwitz(Matrix2{-1.0, 0.0, 0.0, -1.0}));
    CHECK(is_hurwitz(Matrix2{0.0, -1.0, 100.0, -14.0}));
    CHECK_FALSE(is_hurwitz(Matrix2{1.0, 0.0, 0.0, 1.0}));   // trace > 0
    CHECK_FALSE(is_hurwitz(Matrix2{0.0, 1.0, 1.0, 0.0}));   // det < 0
    CHECK_FALSE(is_hurwitz(Matrix2{-1.0, 0.0, 0.0, 0.0}));  // det = 0
    CHECK_FALSE(is_hurwitz(Matrix2{0.0, -1.0, 1.0, 0.0}));  // trace = 0
}

TEST_CASE("positive definiteness uses leading principal minors") {
    CHECK(is_positive_definite(SymmetricMatrix2{1.0, 0.0, 1.0}));
    CHECK(is_positive_definite(SymmetricMatrix2{2.0, 0.3, 1.0}));
    CHECK_FALSE(is_positive_definite(SymmetricMatrix2{-1.0, 0.0, 1.0}));
    CHECK_FALSE(is_positive_definite(SymmetricMatrix2{1.0, 2.0, 1.0}));
    CHECK_FALSE(is_positive_definite(SymmetricMatrix2{0.0, 0.0, 1.0}));
}

TEST_CASE("hand-solved certificate for the default tracking-error dynamics") {
    // A = [[0, -1], [100, -14]] (natural frequency 10 rad/s, damping 0.7).
    // Reducing A'P + PA = -I to the 3x3 system and back-substituting by hand:
    //   200 p12 = -1            => p12 = -1/200
    //   -2 p12 - 28 p22 = -1    => p22 = 1.01/28
    //   -p11 - 14 p12 + 100 p22 = 0  => p11 = 102.96/28
    const Matrix2 a{0.0, -1.0, 100.0, -14.0};
    const SymmetricMatrix2 q{1.0, 0.0, 1.0};
    const SymmetricMatrix2 p = solve_lyapunov(a, q);
    CHECK(p.p11 == doctest::Approx(102.96 / 28.0).epsilon(1e-12));
    CHECK(p.p12 == doctest::Approx(-1.0 / 200.0).epsilon(1e-12));
    CHECK(p.p22 == doctest::Approx(1.01 / 28.0).epsilon(1e-12));
    CHECK(is_positive_definite(p));
    CHECK(lyapunov_residual(a, p, q) < 1e-12);
}

TEST_CASE("A = -I yields P = Q/2") {
    const Matrix2 a{-1.0, 0.0, 0.0, -1.0};
    const SymmetricMatrix2 q{2.0, 0.3, 1.0};
    const SymmetricMatrix2 p = solve_lyapunov(a, q);
    CHECK(p.p11 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.p12 == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(p.p22 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("solution is linear in Q") {
    std::mt19937_64 gen(7);
    for (int found = 0; found < 20;) {
        const Matrix2 a = random_matrix(gen);
        if (!is_hurwitz(a)) continue;
        ++found;
        const SymmetricMatrix2 q = random_spd(gen);
        const double c = 3.5;
        const SymmetricMatrix2 p = solve_lyapunov(a, q);
        const SymmetricMatrix2 ps =
            solve_lyapunov(a, SymmetricMatrix2{c * q.p11, c * q.p12, c * q.p22});
        CHECK(ps.p11 == doctest::Approx(c * p.p11).epsilon(1e-12));
        CHECK(ps.p12 == doctest::Approx(c * p.p12).epsilon(1e-12));
        CHECK(ps.p22 == doctest::Approx(c * p.p22).epsilon(1e-12));
    }
}

TEST_CASE("random stable systems: P is positive definite with tiny residual") {
    std::mt19937_64 gen(42);
    int found = 0;
    while (found < 100) {
        const Matrix2 a = random_matrix(gen);
        if (!is_hurwitz(a)) continue;
        ++found;
        const SymmetricMatrix2 q = random_spd(gen);
        const SymmetricMatrix2 p = solve_lyapunov(a, q);
        CHECK(is_positive_definite(p));
        CHECK(lyapunov_residual(a, p, q) < 1e-10);
    }
}

TEST_CASE("unstable or marginal matrices are rejected") {
    const SymmetricMatrix2 q{1.0, 0.0, 1.0};
    CHECK(kind_of([&] { solve_lyapunov(Matrix2{1.0, 0.0, 0.0, 1.0}, q); }) ==
          ErrorKind::not_hurwitz);
    CHECK(kind_of([&] { solve_lyapunov(Matrix2{0.0, 1.0, 1.0, 0.0}, q); }) ==
          ErrorKind::not_hurwitz);
    CHECK(kind_of([&] { solve_lyapunov(Matrix2{0.0, -1.0, 1.0, 0.0}, q); }) ==
          ErrorKind::not_hurwitz);
}

TEST_CASE("residual flags a wrong certificate") {
    const Matrix2 a{0.0, -1.0, 100.0, -14.0};
    const SymmetricMatrix2 q{1.0, 0.0, 1.0};
    SymmetricMatrix2 p = solve_lyapunov(a, q);
    p.p11 += 0.01;
    CHECK(lyapunov_residual(a, p, q) > 1e-4);
}

#ifdef ESOPT_HAVE_EIGEN
TEST_CASE("matches an independent Kronecker-product solve") {
    std::mt19937_64 gen(2024);
    int found = 0;
    while (found < 50) {
        const Matrix2 a = random_matrix(gen);
        if (!is_hurwitz(a)) continue;
        ++found;
        const SymmetricMatrix2 q = random_spd(gen);

        // Full 4x4 linear system (I (x) A' + A' (x) I) vec(P) = -vec(Q),
        // column-major vec, no symmetry reduction.
        Eigen::Matrix2d ea;
        ea << a.a11, a.a12, a.a21, a.a22;
        const Eigen::Matrix2d at = ea.transpose();
        Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
        const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                m.block<2, 2>(2 * i, 2 * j) =
                    id(i, j) * at + at(i, j) * id;
        Eigen::Vector4d rhs;
        rhs << -q.p11, -q.p12, -q.p12, -q.p22;
        const Eigen::Vector4d vec_p = m.fullPivLu().solve(rhs);

        const SymmetricMatrix2 p = solve_lyapunov(a, q);
        CHECK(p.p11 == doctest::Approx(vec_p(0)).epsilon(1e-9));
        CHECK(p.p12 == doctest::Approx(vec_p(1)).epsilon(1e-9));
        CHECK(p.p22 == doctest::Approx(vec_p(3)).epsilon(1e-9));
        CHECK(vec_p(1) == doctest::Approx(vec_p(2)).epsilon(1e-9));
    }
}

TEST_CASE("stability test agrees with eigenvalue real parts") {
    std::mt19937_64 gen(99);
    for (int i = 0; i < 1000; ++i) {
        const Matrix2 a = random_matrix(gen);
        Eigen::Matrix2d ea;
        ea << a.a11, a.a12, a.a21, a.a22;
        const Eigen::EigenSolver<Eigen::Matrix2d> es(ea);
        const bool stable = es.eigenvalues()(0).real() < 0.0 &&
                            es.eigenvalues()(1).real() < 0.0;
        CHECK(is_hurwitz(a) == stable);
    }
}
#endif
