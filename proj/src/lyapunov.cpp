#include "esopt/lyapunov.hpp"

#include <array>
#include <cmath>
#include <cstddef>

namespace esopt {
namespace {

// Solve a dense 3x3 system M x = rhs in place via Gaussian elimination with
// partial pivoting. Small enough that a library solver would be overkill.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m,
                             std::array<double, 3> rhs) {
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < 3; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        }
        if (std::abs(m[pivot][col]) == 0.0) {
            throw Error(ErrorKind::singular_system,
                        "Lyapunov system is singular; no unique solution");
        }
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            std::swap(rhs[pivot], rhs[col]);
        }
        for (std::size_t row = col + 1; row < 3; ++row) {
            const double factor = m[row][col] / m[col][col];
            for (std::size_t k = col; k < 3; ++k) m[row][k] -= factor * m[col][k];
            rhs[row] -= factor * rhs[col];
        }
    }
    std::array<double, 3> x{};
    for (std::size_t i = 3; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t k = i + 1; k < 3; ++k) acc -= m[i][k] * x[k];
        x[i] = acc / m[i][i];
    }
    return x;
}

} // namespace

bool is_hurwitz(const Matrix2& a) {
    return a.trace() < 0.0 && a.determinant() > 0.0;
}

bool is_positive_definite(const SymmetricMatrix2& p) {
    return p.p11 > 0.0 && p.determinant() > 0.0;
}

SymmetricMatrix2 solve_lyapunov(const Matrix2& a, const SymmetricMatrix2& q) {
    if (!is_hurwitz(a)) {
        throw Error(ErrorKind::not_hurwitz,
                    "Lyapunov solve requires a Hurwitz matrix");
    }
    // Writing P = [[p11, p12], [p12, p22]] and expanding Aᵀ P + P A = -Q
    // entrywise gives, for A = [[a11, a12], [a21, a22]]:
    //   (1,1):  2 a11 p11 + 2 a21 p12             = -q11
    //   (1,2):  a12 p11 + (a11 + a22) p12 + a21 p22 = -q12
    //   (2,2):            2 a12 p12 + 2 a22 p22    = -q22
    const std::array<std::array<double, 3>, 3> m{{
        {2.0 * a.a11, 2.0 * a.a21, 0.0},
        {a.a12, a.a11 + a.a22, a.a21},
        {0.0, 2.0 * a.a12, 2.0 * a.a22},
    }};
    const std::array<double, 3> rhs{-q.p11, -q.p12, -q.p22};
    const std::array<double, 3> x = solve3(m, rhs);
    return SymmetricMatrix2{x[0], x[1], x[2]};
}

double lyapunov_residual(const Matrix2& a, const SymmetricMatrix2& p,
                         const SymmetricMatrix2& q) {
    // R = Aᵀ P + P A + Q, symmetric by construction.
    const double r11 = 2.0 * (a.a11 * p.p11 + a.a21 * p.p12) + q.p11;
    const double r12 =
        a.a12 * p.p11 + (a.a11 + a.a22) * p.p12 + a.a21 * p.p22 + q.p12;
    const double r22 = 2.0 * (a.a12 * p.p12 + a.a22 * p.p22) + q.p22;
    double worst = std::abs(r11);
    worst = std::max(worst, std::abs(r12));
    worst = std::max(worst, std::abs(r22));
    return worst;
}

} // namespace esopt
