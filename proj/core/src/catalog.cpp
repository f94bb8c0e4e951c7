#include "wcperiod/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wcperiod/quadrature.hpp"

namespace wcperiod::catalog {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

} // namespace

ComplexMatrix planar_matrix() {
    ComplexMatrix a(2, 2);
    a << 2.0, -4.0, 6.0, -8.0;
    return a;
}

PeriodicitySpec antiperiodic_pi(NormKind norm) {
    PeriodicitySpec spec;
    spec.omega = kPi;
    spec.c = Complex(-1.0, 0.0);
    spec.norm = norm;
    return spec;
}

NonlinearitySpec planar_trig(double a, NormKind norm) {
    NonlinearitySpec g;
    g.dim = 2;
    g.evaluate = [a](double t, const ComplexVector& y) {
        ComplexVector out(2);
        out(0) = a * std::sin(t) * std::cos(y(0) + y(1));
        out(1) = a * std::cos(2.0 * t) * std::sin(y(0) - y(1));
        return out;
    };
    const double abs_a = std::abs(a);
    switch (norm) {
    case NormKind::L1:
        g.lipschitz = 2.0 * abs_a;
        g.g1 = 2.0 * abs_a;
        break;
    case NormKind::LInf:
        g.lipschitz = 2.0 * abs_a;
        g.g1 = abs_a;
        break;
    case NormKind::L2:
        g.lipschitz = kSqrt2 * abs_a;
        g.g1 = kSqrt2 * abs_a;
        break;
    }
    g.g2 = 0.0;
    g.c1_declared = true;
    g.real_valued = true;
    return g;
}

NonlinearitySpec planar_abs(double a, NormKind norm) {
    NonlinearitySpec g;
    g.dim = 2;
    g.evaluate = [a](double t, const ComplexVector& y) {
        ComplexVector out(2);
        out(0) = a * std::sin(t) * (std::abs(y(0) + y(1)) + 1.0);
        out(1) = a * std::cos(t) * std::abs(y(0) - y(1));
        return out;
    };
    const double abs_a = std::abs(a);
    switch (norm) {
    case NormKind::L1:
        g.g1 = abs_a;
        g.g2 = kSqrt2 * abs_a;
        g.lipschitz = kSqrt2 * abs_a;
        break;
    case NormKind::LInf:
        g.g1 = abs_a;
        g.g2 = 2.0 * abs_a;
        g.lipschitz = 2.0 * abs_a;
        break;
    case NormKind::L2:
        g.g1 = kSqrt2 * abs_a;
        g.g2 = 2.0 * abs_a;
        g.lipschitz = kSqrt2 * abs_a;
        break;
    }
    g.c1_declared = true;
    g.real_valued = true;
    return g;
}

FieldNonlinearity heat_cubic(double a, double eta) {
    FieldNonlinearity f;
    f.forcing_time = [a](double t) { return Complex(a * std::sin(t), 0.0); };
    f.forcing_profile = [](double) { return Complex(1.0, 0.0); };
    f.reaction = [eta](double, double, Complex u) { return -eta * u * u * u / (u * u + 1.0); };
    f.lipschitz = 9.0 * eta / 8.0;
    f.g1 = std::abs(a) * std::sqrt(kPi);
    f.g2 = eta;
    f.c1_declared = true;
    f.real_valued = true;
    return f;
}

FieldNonlinearity schrodinger_cubic(Complex a) {
    FieldNonlinearity f;
    f.forcing_time = [](double t) { return std::polar(1.0, t / 4.0); };
    f.forcing_profile = [a](double x) {
        const double s = std::sin(x);
        return Complex(0.0, 1.0) * a * (1.0 + s * s);
    };
    f.reaction = [](double, double, Complex u) {
        const double r2 = std::norm(u);
        return Complex(0.0, -1.0) * (r2 * u / (5.0 * (r2 + 1.0)));
    };
    f.lipschitz = 9.0 / 40.0;
    f.g1 = std::abs(a) * std::sqrt(19.0 * kPi) / 2.0;
    f.g2 = 0.2;
    f.c1_declared = true;
    return f;
}

PeriodicitySpec schrodinger_spec() {
    PeriodicitySpec spec;
    spec.omega = kPi;
    spec.c = std::polar(1.0, kPi / 4.0);
    spec.norm = NormKind::L2;
    return spec;
}

double heat_reaction_derivative(double u) {
    const double u2 = u * u;
    return (u2 * u2 + 3.0 * u2) / (2.0 * (u2 + 1.0) * (u2 + 1.0));
}

double schrodinger_derivative_bound(double r) {
    const double r2 = r * r;
    return (r2 * r2 + 3.0 * r2) / (5.0 * (r2 + 1.0) * (r2 + 1.0));
}

double maximize_abs(const std::function<double(double)>& f, double lo, double hi, int samples) {
    samples = std::max(samples, 3);
    const double step = (hi - lo) / (samples - 1);
    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i < samples; ++i) {
        const double v = std::abs(f(lo + i * step));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    const double a = lo + std::max(best - 1, 0) * step;
    const double b = lo + std::min(best + 1, samples - 1) * step;
    const auto absf = [&f](double x) { return std::abs(f(x)); };
    const double x = golden_section_max(absf, a, b, 1e-12 * std::max(1.0, std::abs(b)));
    return std::max(best_value, absf(x));
}

} // namespace wcperiod::catalog
