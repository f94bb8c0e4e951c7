#pragma once

#include <functional>

#include "wcperiod/certificates.hpp"
#include "wcperiod/kernels.hpp"
#include "wcperiod/linalg.hpp"
#include "wcperiod/spectral.hpp"

namespace wcperiod::catalog {

/// A = [[2, -4], [6, -8]], the linear part shared by the planar examples.
ComplexMatrix planar_matrix();

/// omega = pi, c = -1 with the requested norm.
PeriodicitySpec antiperiodic_pi(NormKind norm);

/// g(t, y) = a (sin t cos(y1 + y2), cos 2t sin(y1 - y2)).
/// L = 2|a| (l1, linf), sqrt(2)|a| (l2); g1 = 2|a| (l1), |a| (linf), sqrt(2)|a| (l2); g2 = 0.
NonlinearitySpec planar_trig(double a, NormKind norm);

/// g(t, y) = (a sin t (|y1 + y2| + 1), a cos t |y1 - y2|).
/// g1 = |a| (l1, linf), sqrt(2)|a| (l2); g2 = sqrt(2)|a| (l1), 2|a| (linf, l2);
/// L = sqrt(2)|a| (l1, l2), 2|a| (linf).
NonlinearitySpec planar_abs(double a, NormKind norm);

/// y_t = y_xx - eta y^3 / (y^2 + 1) + a sin t on (0, pi), Dirichlet.
/// L = 9 eta / 8, g1 = |a| sqrt(pi), g2 = eta.
FieldNonlinearity heat_cubic(double a, double eta);

/// y_t = i y_xx - i |y|^2 y / (5(|y|^2 + 1)) + i a (1 + sin^2 x) e^{it/4} on (0, 2 pi), periodic.
/// L = 9/40, g1 = |a| sqrt(19 pi) / 2, g2 = 1/5.
FieldNonlinearity schrodinger_cubic(Complex a);

/// omega = pi, c = e^{i pi / 4}, L^2 norm.
PeriodicitySpec schrodinger_spec();

/// d/du [u^3 / (2(u^2 + 1))] = (u^4 + 3u^2) / (2(u^2 + 1)^2)
double heat_reaction_derivative(double u);

/// Bound on |DH(y)| for H(y) = |y|^2 y / (5(|y|^2 + 1)) as a function of r = |y|:
/// (r^4 + 3r^2) / (5(r^2 + 1)^2)
double schrodinger_derivative_bound(double r);

/// max of |f| on [lo, hi]: dense scan followed by golden-section refinement.
double maximize_abs(const std::function<double(double)>& f, double lo, double hi, int samples = 20001);

} // namespace wcperiod::catalog
