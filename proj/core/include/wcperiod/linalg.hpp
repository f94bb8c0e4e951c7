#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace wcperiod {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Vector norm on C^n; matrices use the induced operator norm.
enum class NormKind { L1, L2, LInf };

std::string_view to_string(NormKind kind);
/// Accepts "l1", "l2", "linf" (case-insensitive). Throws DomainError otherwise.
NormKind parse_norm_kind(std::string_view name);

/// Throws DomainError unless `a` is square, non-empty and finite.
void require_finite_square(const ComplexMatrix& a, std::string_view what = "matrix");

/// exp(A t) by scaling and squaring with a degree-13 Pade approximant.
/// Throws OverflowError if the result is not representable.
ComplexMatrix matrix_exponential(const ComplexMatrix& a, double t);

/// Eigenvalues with multiplicity, sorted by (real, imag).
/// Uses the closed form for dim <= 2 and the QR path otherwise.
std::vector<Complex> spectrum(const ComplexMatrix& a);

/// Hessenberg reduction followed by shifted complex QR (complex Schur form).
/// Throws ConvergenceError when the iteration budget (per eigenvalue) is exhausted.
std::vector<Complex> spectrum_qr(const ComplexMatrix& a, int max_iterations_per_eigenvalue = 30);

/// Closed-form eigenvalues of a 1x1 or 2x2 matrix. Throws DomainError for larger input.
std::vector<Complex> spectrum_closed_form(const ComplexMatrix& a);

double vector_norm(const ComplexVector& v, NormKind kind);

/// Operator norm induced by `kind`: max column sum (L1), max row sum (LInf),
/// largest singular value (L2).
double induced_norm(const ComplexMatrix& a, NormKind kind);

/// c^k by repeated squaring; exact for k = 0, +-1.
Complex integer_power(Complex c, long k);

inline constexpr double kDefaultMarginTol = 1e-8;

struct ResonanceMargin {
    double distance; // min over lambda in sigma(A) of |c - exp(omega lambda)|
    Complex eigenvalue; // the minimizing lambda
};

ResonanceMargin resonance_margin(const ComplexMatrix& a, double omega, Complex c);

/// (cI - exp(A omega))^{-1}. Throws ResonanceError when the margin is below `margin_tol`
/// and SingularityError if the linear solve breaks down anyway.
ComplexMatrix nonresonance_resolvent(const ComplexMatrix& a, double omega, Complex c,
                                     double margin_tol = kDefaultMarginTol);

} // namespace wcperiod
