#include "wcperiod/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcperiod/errors.hpp"
#include "wcperiod/quadrature.hpp"

namespace wcperiod {

void PeriodicitySpec::validate() const {
    if (!std::isfinite(omega) || !(omega > 0.0)) {
        throw DomainError("omega must be positive and finite, got " + std::to_string(omega));
    }
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw DomainError("c must be finite");
    }
    if (std::abs(c) == 0.0) {
        throw DomainError("c must be nonzero");
    }
}

void QuadratureSpec::validate() const {
    if (panels < 1 || nodes_per_panel < 2 || t_samples < 2) {
        throw DomainError("quadrature spec requires panels >= 1, nodes_per_panel >= 2, t_samples >= 2");
    }
}

GreenKernelODE::GreenKernelODE(ComplexMatrix a, PeriodicitySpec spec, double margin_tol)
    : a_(std::move(a)), spec_(spec) {
    spec_.validate();
    require_finite_square(a_, "generator");
    resolvent_ = nonresonance_resolvent(a_, spec_.omega, spec_.c, margin_tol);
    period_map_ = matrix_exponential(a_, spec_.omega);
}

void GreenKernelODE::check_domain(double t, double s) const {
    if (!(t >= 0.0 && t <= spec_.omega && s >= 0.0 && s <= spec_.omega)) {
        throw DomainError("kernel arguments must lie in [0, omega]");
    }
}

ComplexMatrix GreenKernelODE::lower_branch(double t, double s) const {
    check_domain(t, s);
    return spec_.c * (matrix_exponential(a_, t - s) * resolvent_);
}

ComplexMatrix GreenKernelODE::upper_branch(double t, double s) const {
    check_domain(t, s);
    return matrix_exponential(a_, spec_.omega + t - s) * resolvent_;
}

ComplexMatrix GreenKernelODE::propagated_resolvent(double s) const {
    return matrix_exponential(a_, s) * resolvent_;
}

ComplexMatrix GreenKernelODE::operator()(double t, double s) const {
    return s <= t ? lower_branch(t, s) : upper_branch(t, s);
}

namespace {

AdaptiveGaussOptions options_from(const QuadratureSpec& quad) {
    AdaptiveGaussOptions options;
    options.panels = quad.panels;
    options.nodes_per_panel = quad.nodes_per_panel;
    return options;
}

// int_0^omega ||K(t,s)|| ds, split at s = t.
double kernel_row_integral(const GreenKernelODE& kernel, double t, const AdaptiveGaussOptions& options) {
    const NormKind norm = kernel.spec().norm;
    const double omega = kernel.spec().omega;
    const double lower = integrate_composite(
        [&](double s) { return induced_norm(kernel.lower_branch(t, s), norm); }, 0.0, t, options);
    const double upper = integrate_composite(
        [&](double s) { return induced_norm(kernel.upper_branch(t, s), norm); }, t, omega, options);
    return lower + upper;
}

} // namespace

KernelMaximum compute_M(const GreenKernelODE& kernel, const QuadratureSpec& quad) {
    quad.validate();
    const AdaptiveGaussOptions options = options_from(quad);
    const double omega = kernel.spec().omega;
    const int samples = quad.t_samples;

    std::vector<double> values(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double t = omega * k / (samples - 1);
        values[static_cast<std::size_t>(k)] = kernel_row_integral(kernel, t, options);
    }
    const auto best = std::max_element(values.begin(), values.end());
    const auto k_best = static_cast<int>(best - values.begin());

    KernelMaximum result{*best, omega * k_best / (samples - 1)};
    const double lo = omega * std::max(k_best - 1, 0) / (samples - 1);
    const double hi = omega * std::min(k_best + 1, samples - 1) / (samples - 1);
    const auto row = [&](double t) { return kernel_row_integral(kernel, t, options); };
    const double t_refined = golden_section_max(row, lo, hi, 1e-9 * omega);
    const double refined = row(t_refined);
    if (refined > result.value) {
        result = {refined, t_refined};
    }
    return result;
}

double bound_M_exponential(const GreenKernelODE& kernel) {
    const NormKind norm = kernel.spec().norm;
    const double a_norm = induced_norm(kernel.generator(), norm);
    if (a_norm == 0.0) {
        throw DegenerateInputError("bound_M_exponential: ||A|| = 0; use bound_M_integral instead");
    }
    const double omega = kernel.spec().omega;
    const double growth = std::expm1(a_norm * omega) / a_norm;
    // The upper branch is exp(A(t-s)) exp(A omega) R with t - s < 0, so its factor is
    // bounded by exp(||A||(s-t)), not exp(||A||(t-s)); no exp(-||A|| omega) discount applies.
    const double lower = std::abs(kernel.spec().c) * induced_norm(kernel.resolvent(), norm);
    const double upper = induced_norm(kernel.resolvent() * kernel.period_map(), norm);
    const double bound = growth * std::max(lower, upper);
    if (!std::isfinite(bound)) {
        throw OverflowError("bound_M_exponential: exp(||A|| omega) overflows");
    }
    return bound;
}

double bound_M_integral(const GreenKernelODE& kernel, const QuadratureSpec& quad) {
    quad.validate();
    AdaptiveGaussOptions options = options_from(quad);
    // one branch covering [0, omega]: use both branches' worth of panels
    options.panels = 2 * quad.panels;
    const NormKind norm = kernel.spec().norm;
    const double integral = integrate_composite(
        [&](double s) { return induced_norm(kernel.propagated_resolvent(s), norm); }, 0.0,
        kernel.spec().omega, options);
    return std::max(std::abs(kernel.spec().c), 1.0) * integral;
}

} // namespace wcperiod
