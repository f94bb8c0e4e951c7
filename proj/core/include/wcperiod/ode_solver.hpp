#pragma once

#include <optional>
#include <vector>

#include "wcperiod/certificates.hpp"
#include "wcperiod/kernels.hpp"

namespace wcperiod {

struct Residuals {
    double boundary = 0.0;    // ||y(omega) - c y(0)||
    double ode = 0.0;         // max ||y' - Ay - g(t,y)|| at interior nodes
    double periodicity = 0.0; // max ||ext(t + omega) - c ext(t)||
};

/// A (omega, c)-periodic trajectory sampled on the uniform grid t_i = i omega / (N-1).
struct SolutionTrajectory {
    PeriodicitySpec spec;
    std::vector<double> grid;
    std::vector<ComplexVector> values;
    int iterations = 0;
    double final_update = 0.0;
    std::vector<double> update_history; // sup-norm of each applied correction
    Residuals residuals;

    std::size_t size() const noexcept { return grid.size(); }
    /// Piecewise-cubic interpolant on [0, omega].
    ComplexVector at(double t) const;
    /// max over [0, omega] of ||y(t)|| in the spec's norm: best node, refined on the
    /// interpolant over the two neighbouring cells.
    double sup_norm() const;
};

/// Piecewise-cubic Lagrange weights for a point `x` in cell `cell` of a uniform grid
/// with `nodes` nodes: returns the first stencil index and four weights.
struct CubicStencil {
    int first = 0;
    double weights[4] = {0.0, 0.0, 0.0, 0.0};
};
CubicStencil cubic_stencil(int nodes, int cell, double local_x);

struct PicardOptions {
    int grid_size = 257;    // nodes on [0, omega]
    double tol = 1e-10;
    int max_iter = 200;
    int gauss_nodes = 4;    // per grid cell
    std::optional<SolutionTrajectory> initial;
};

/// Fixed-point iteration y <- S y, (S y)(t) = int_0^omega K(t,s) g(s, y(s)) ds, on the
/// collocation grid. The s-integral is split at every node, so the kernel jump at
/// s = t always falls on a cell boundary. If an update grows, later updates are
/// damped by 0.5. Throws NonConvergenceError after max_iter sweeps.
SolutionTrajectory picard_solve(const GreenKernelODE& kernel, const NonlinearitySpec& g,
                                const PicardOptions& options = {});

/// (omega, c)-periodic extension: c^k y(t - k omega), k = floor(t / omega).
/// Throws PreconditionError if the boundary residual exceeds 1e-6.
ComplexVector extend_solution(const SolutionTrajectory& traj, double t);

/// A-posteriori residuals. y' uses fourth-order central differences; stencil
/// points outside [0, omega] come from the periodic extension.
Residuals residual_report(const SolutionTrajectory& traj, const ComplexMatrix& a,
                          const NonlinearitySpec& g);

struct PoincareOptions {
    int grid_size = 257;
    double tol = 1e-10;
    int max_iter = 200;
    int gauss_nodes = 4;
};

/// Fixed-point iteration on the Poincare map
///   P(y0) = R int_0^omega exp(A(omega - s)) g(s, y(y0, s)) ds,
/// where y(y0, .) comes from an adaptive Dormand-Prince integration of
/// y' = Ay + g(t, y) with tolerance tol / 10. Independent of `picard_solve`.
SolutionTrajectory poincare_solve(const GreenKernelODE& kernel, const NonlinearitySpec& g,
                                  const PoincareOptions& options = {});

/// max_i ||a(t_i) - b(t_i)|| over a's grid (b is interpolated).
double sup_distance(const SolutionTrajectory& a, const SolutionTrajectory& b);

} // namespace wcperiod
