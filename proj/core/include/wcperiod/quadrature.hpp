#pragma once

#include <functional>
#include <vector>

namespace wcperiod {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    /// Lagrange weights extrapolating node values to x = -1 and x = +1.
    std::vector<double> at_minus_one;
    std::vector<double> at_plus_one;
};

/// n-point Gauss-Legendre rule (n >= 1), nodes ascending. Rules are cached per n.
const GaussRule& gauss_legendre(int n);

struct AdaptiveGaussOptions {
    int panels = 16;
    int nodes_per_panel = 8;
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    int max_depth = 24;
};

/// Composite Gauss-Legendre quadrature of f over [a, b] with `panels` equal panels.
/// Each panel is bisected until the one-panel and two-half-panel results agree and
/// the node interpolant of each half reproduces f at its endpoints, so kinks of f
/// (|.| inside norms) do not spoil the accuracy. Summation is in
/// panel order, left to right.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           const AdaptiveGaussOptions& options);

/// Golden-section search for a maximum of f on [a, b]. Returns the abscissa.
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                           double x_tol);

} // namespace wcperiod
