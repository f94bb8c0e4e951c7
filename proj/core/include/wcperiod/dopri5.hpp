#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wcperiod/linalg.hpp"

namespace wcperiod {

using OdeRhs = std::function<ComplexVector(double t, const ComplexVector& y)>;

struct Dopri5Options {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    double initial_step = 0.0; // 0 selects a step from the first derivative
    double min_step = 1e-14;   // relative to the integration span
    long max_steps = 1'000'000;
};

/// Adaptive Dormand-Prince 5(4) integrator with FSAL. Every requested output
/// time is hit exactly as a step endpoint (no dense interpolation).
class Dopri5 {
public:
    Dopri5(OdeRhs rhs, Dopri5Options options = {});

    /// Integrate from `times.front()` with y(times.front()) = y0; returns y at every
    /// entry of `times` (strictly increasing). Throws StepSizeUnderflowError when
    /// the controller cannot meet the tolerance.
    std::vector<ComplexVector> integrate(const ComplexVector& y0, std::span<const double> times);

    long steps_taken() const noexcept { return accepted_; }
    long steps_rejected() const noexcept { return rejected_; }

private:
    OdeRhs rhs_;
    Dopri5Options options_;
    long accepted_ = 0;
    long rejected_ = 0;
};

} // namespace wcperiod
