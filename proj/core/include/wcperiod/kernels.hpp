#pragma once

#include "wcperiod/linalg.hpp"

namespace wcperiod {

/// The pair (omega, c) of y(t + omega) = c y(t) together with the norm on X.
struct PeriodicitySpec {
    double omega = 1.0;
    Complex c{1.0, 0.0};
    NormKind norm = NormKind::L2;

    /// Throws DomainError unless omega > 0 and c != 0 (both finite).
    void validate() const;
};

/// Discretization of the kernel integrals. Defaults reach ~1e-6 relative
/// accuracy or better on every worked example.
struct QuadratureSpec {
    int panels = 16;          // per branch of the split integral
    int nodes_per_panel = 8;  // Gauss-Legendre nodes
    int t_samples = 129;      // grid for the outer maximum over t

    void validate() const;
};

/// Green kernel of y' = Ay + f with y(omega) = c y(0):
///
///   K(t,s) = c exp(A(t-s)) R           for 0 <= s <= t,
///   K(t,s) = exp(A(omega+t-s)) R       for t <  s <= omega,
///
/// with R = (cI - exp(A omega))^{-1}. Immutable once constructed.
class GreenKernelODE {
public:
    /// Throws ResonanceError when the nonresonance margin is below `margin_tol`.
    GreenKernelODE(ComplexMatrix a, PeriodicitySpec spec, double margin_tol = kDefaultMarginTol);

    const ComplexMatrix& generator() const noexcept { return a_; }
    const PeriodicitySpec& spec() const noexcept { return spec_; }
    /// exp(A omega)
    const ComplexMatrix& period_map() const noexcept { return period_map_; }
    /// (cI - exp(A omega))^{-1}
    const ComplexMatrix& resolvent() const noexcept { return resolvent_; }
    Eigen::Index dim() const noexcept { return a_.rows(); }

    /// Piecewise kernel; s == t takes the lower branch. DomainError outside [0, omega]^2.
    ComplexMatrix operator()(double t, double s) const;
    /// c exp(A(t-s)) R, valid for any t, s in [0, omega].
    ComplexMatrix lower_branch(double t, double s) const;
    /// exp(A(omega+t-s)) R, valid for any t, s in [0, omega]; at s == t it is the
    /// right limit K(t, t+).
    ComplexMatrix upper_branch(double t, double s) const;
    /// exp(A s) R
    ComplexMatrix propagated_resolvent(double s) const;

private:
    void check_domain(double t, double s) const;

    ComplexMatrix a_;
    PeriodicitySpec spec_;
    ComplexMatrix period_map_;
    ComplexMatrix resolvent_;
};

struct KernelMaximum {
    double value = 0.0;
    double argmax_t = 0.0;
};

/// M = max_t int_0^omega ||K(t,s)|| ds. The s-integral is split at s = t; the
/// maximum is taken on the t-sample grid and refined by golden-section search
/// around the best sample.
KernelMaximum compute_M(const GreenKernelODE& kernel, const QuadratureSpec& quad = {});

/// Closed-form upper bound on M from ||exp(A u)|| <= exp(||A|| |u|):
///
///   (exp(||A|| omega) - 1) / ||A|| * max{ |c| ||R||, ||R exp(A omega)|| }.
///
/// Throws DegenerateInputError when ||A|| == 0.
double bound_M_exponential(const GreenKernelODE& kernel);

/// max{|c|, 1} int_0^omega ||exp(A s) R|| ds, an upper bound on M.
double bound_M_integral(const GreenKernelODE& kernel, const QuadratureSpec& quad = {});

} // namespace wcperiod
