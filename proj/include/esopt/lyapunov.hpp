#pragma once

#include "esopt/error.hpp"

namespace esopt {

/// Dense 2x2 real matrix, row-major named entries.
struct Matrix2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;

    double trace() const { return a11 + a22; }
    double determinant() const { return a11 * a22 - a12 * a21; }
};

/// Symmetric 2x2 matrix stored by its independent entries.
struct SymmetricMatrix2 {
    double p11 = 0.0;
    double p12 = 0.0;
    double p22 = 0.0;

    double determinant() const { return p11 * p22 - p12 * p12; }
};

/// True when every eigenvalue of `a` has a negative real part. For a 2x2
/// real matrix this is equivalent to trace < 0 and determinant > 0.
bool is_hurwitz(const Matrix2& a);

/// True when the symmetric matrix is positive definite (leading minors
/// positive).
bool is_positive_definite(const SymmetricMatrix2& p);

/// Solve the continuous Lyapunov equation  Aᵀ P + P A = -Q  for symmetric
/// P, given symmetric positive definite Q. Exploiting symmetry reduces the
/// equation to a 3x3 linear system in (p11, p12, p22), solved by Gaussian
/// elimination with partial pivoting.
///
/// Throws Error(ErrorKind::not_hurwitz) when `a` is not Hurwitz (the
/// equation then has no positive definite solution) and
/// Error(ErrorKind::singular_system) if elimination hits a zero pivot.
SymmetricMatrix2 solve_lyapunov(const Matrix2& a, const SymmetricMatrix2& q);

/// Largest absolute entry of  Aᵀ P + P A + Q; zero (up to rounding) when P
/// solves the Lyapunov equation for (A, Q).
double lyapunov_residual(const Matrix2& a, const SymmetricMatrix2& p,
                         const SymmetricMatrix2& q);

} // namespace esopt
