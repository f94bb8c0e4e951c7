#include "wcperiod/dopri5.hpp"

#include <algorithm>
#include <cmath>

#include "wcperiod/errors.hpp"

namespace wcperiod {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double scaled_error(const ComplexVector& err, const ComplexVector& y, const ComplexVector& y_new,
                    const Dopri5Options& options) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale =
            options.abs_tol + options.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
        const double r = std::abs(err(i)) / scale;
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(err.size(), 1)));
}

} // namespace

Dopri5::Dopri5(OdeRhs rhs, Dopri5Options options) : rhs_(std::move(rhs)), options_(options) {}

std::vector<ComplexVector> Dopri5::integrate(const ComplexVector& y0, std::span<const double> times) {
    if (times.empty()) {
        return {};
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw DomainError("Dopri5::integrate: output times must be strictly increasing");
        }
    }
    std::vector<ComplexVector> out;
    out.reserve(times.size());
    out.push_back(y0);

    const double span = times.back() - times.front();
    const double min_step = options_.min_step * std::max(span, 1.0);
    double t = times.front();
    ComplexVector y = y0;
    ComplexVector k1 = rhs_(t, y);

    double h = options_.initial_step;
    if (h <= 0.0) {
        const double y_scale = options_.abs_tol + options_.rel_tol * y.norm();
        const double f_norm = k1.norm();
        h = f_norm > 0.0 ? 0.01 * std::max(y_scale, y.norm()) / f_norm : 1e-3 * std::max(span, 1.0);
        h = std::clamp(h, min_step, std::max(span, min_step));
    }

    for (std::size_t next = 1; next < times.size(); ++next) {
        const double target = times[next];
        while (t < target) {
            if (accepted_ + rejected_ >= options_.max_steps) {
                throw StepSizeUnderflowError("Dopri5: step budget exhausted");
            }
            bool last = false;
            double step = h;
            if (t + step >= target || target - (t + step) < 1e-12 * step) {
                step = target - t;
                last = true;
            }
            const ComplexVector k2 = rhs_(t + c2 * step, y + step * (a21 * k1));
            const ComplexVector k3 = rhs_(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
            const ComplexVector k4 =
                rhs_(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
            const ComplexVector k5 =
                rhs_(t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const ComplexVector k6 = rhs_(
                t + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const ComplexVector y_new =
                y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const double t_new = last ? target : t + step;
            const ComplexVector k7 = rhs_(t_new, y_new);
            const ComplexVector err =
                step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double error = scaled_error(err, y, y_new, options_);

            if (!std::isfinite(error)) {
                ++rejected_;
                h = 0.2 * step;
                if (h < min_step) {
                    throw StepSizeUnderflowError("Dopri5: non-finite error estimate");
                }
                continue;
            }
            const double factor =
                error == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(error, -0.2), 0.2, 5.0);
            if (error <= 1.0) {
                ++accepted_;
                t = t_new;
                y = y_new;
                k1 = k7;
                // a step shortened to hit the output time says nothing about the next one
                h = last ? std::max(h, step * factor) : step * factor;
            } else {
                ++rejected_;
                h = step * factor;
                if (h < min_step) {
                    throw StepSizeUnderflowError("Dopri5: step size underflow");
                }
            }
        }
        out.push_back(y);
    }
    return out;
}

} // namespace wcperiod
