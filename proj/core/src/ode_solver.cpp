#include "wcperiod/ode_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcperiod/dopri5.hpp"
#include "wcperiod/errors.hpp"
#include "wcperiod/quadrature.hpp"

namespace wcperiod {

CubicStencil cubic_stencil(int nodes, int cell, double local_x) {
    if (nodes < 4) {
        throw InterpolationError("cubic interpolation needs at least 4 grid nodes");
    }
    CubicStencil stencil;
    stencil.first = std::clamp(cell - 1, 0, nodes - 4);
    const double x = cell + local_x - stencil.first;
    for (int p = 0; p < 4; ++p) {
        double w = 1.0;
        for (int r = 0; r < 4; ++r) {
            if (r != p) {
                w *= (x - r) / static_cast<double>(p - r);
            }
        }
        stencil.weights[p] = w;
    }
    return stencil;
}

ComplexVector SolutionTrajectory::at(double t) const {
    const int nodes = static_cast<int>(grid.size());
    if (nodes < 4 || values.size() != grid.size()) {
        throw InterpolationError("trajectory grid is degenerate");
    }
    const double omega = grid.back();
    if (!(t >= 0.0 && t <= omega)) {
        throw DomainError("SolutionTrajectory::at: t outside [0, omega]");
    }
    const double h = omega / (nodes - 1);
    const int cell = std::min(static_cast<int>(t / h), nodes - 2);
    const CubicStencil stencil = cubic_stencil(nodes, cell, t / h - cell);
    ComplexVector y = ComplexVector::Zero(values.front().size());
    for (int p = 0; p < 4; ++p) {
        y += stencil.weights[p] * values[static_cast<std::size_t>(stencil.first + p)];
    }
    return y;
}

double SolutionTrajectory::sup_norm() const {
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double n = vector_norm(values[i], spec.norm);
        if (n > best) {
            best = n;
            arg = i;
        }
    }
    if (grid.size() < 2) {
        return best;
    }
    const auto norm_at = [this](double t) { return vector_norm(at(t), spec.norm); };
    const double lo = grid[arg == 0 ? 0 : arg - 1];
    const double hi = grid[std::min(arg + 1, grid.size() - 1)];
    return std::max(best, norm_at(golden_section_max(norm_at, lo, hi, 1e-12 * spec.omega)));
}

namespace {

std::vector<double> uniform_grid(double omega, int nodes) {
    std::vector<double> grid(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) {
        grid[static_cast<std::size_t>(i)] = omega * i / (nodes - 1);
    }
    grid.back() = omega;
    return grid;
}

void check_grid(int grid_size) {
    if (grid_size < 9) {
        throw InterpolationError("grid_size must be at least 9 nodes (8 cells), got " +
                                 std::to_string(grid_size));
    }
}

double sup_difference(const std::vector<ComplexVector>& a, const std::vector<ComplexVector>& b,
                      NormKind norm) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        best = std::max(best, vector_norm(a[i] - b[i], norm));
    }
    return best;
}

// Interpolation weights from grid nodes to the Gauss points of each cell.
struct GaussSampling {
    std::vector<double> xi;      // local abscissae in (0, 1)
    std::vector<double> weights; // h * w_q / 2
    std::vector<CubicStencil> stencils; // [cell * Q + q]
};

GaussSampling gauss_sampling(int nodes, int gauss_nodes, double h) {
    const GaussRule& rule = gauss_legendre(gauss_nodes);
    GaussSampling sampling;
    for (int q = 0; q < gauss_nodes; ++q) {
        sampling.xi.push_back(0.5 * (1.0 + rule.nodes[static_cast<std::size_t>(q)]));
        sampling.weights.push_back(0.5 * h * rule.weights[static_cast<std::size_t>(q)]);
    }
    for (int cell = 0; cell + 1 < nodes; ++cell) {
        for (int q = 0; q < gauss_nodes; ++q) {
            sampling.stencils.push_back(cubic_stencil(nodes, cell, sampling.xi[static_cast<std::size_t>(q)]));
        }
    }
    return sampling;
}

// g(s_jq, y(s_jq)) at every Gauss point, y interpolated from nodal values.
std::vector<ComplexVector> forcing_at_gauss_points(const std::vector<ComplexVector>& nodal,
                                                   const GaussSampling& sampling,
                                                   const NonlinearitySpec& g, double h) {
    const std::size_t q_count = sampling.xi.size();
    std::vector<ComplexVector> forcing(sampling.stencils.size());
    for (std::size_t idx = 0; idx < sampling.stencils.size(); ++idx) {
        const CubicStencil& st = sampling.stencils[idx];
        ComplexVector y = st.weights[0] * nodal[static_cast<std::size_t>(st.first)];
        for (int p = 1; p < 4; ++p) {
            y += st.weights[p] * nodal[static_cast<std::size_t>(st.first + p)];
        }
        const std::size_t cell = idx / q_count;
        const double s = (static_cast<double>(cell) + sampling.xi[idx % q_count]) * h;
        forcing[idx] = g.evaluate(s, y);
    }
    return forcing;
}

void check_nonlinearity(const GreenKernelODE& kernel, const NonlinearitySpec& g) {
    if (!g.evaluate || g.dim != kernel.dim()) {
        throw DomainError("nonlinearity dimension does not match the generator");
    }
}

} // namespace

SolutionTrajectory picard_solve(const GreenKernelODE& kernel, const NonlinearitySpec& g,
                                const PicardOptions& options) {
    check_grid(options.grid_size);
    check_nonlinearity(kernel, g);
    const int nodes = options.grid_size;
    const int cells = nodes - 1;
    const int q_count = options.gauss_nodes;
    const PeriodicitySpec& spec = kernel.spec();
    const double h = spec.omega / cells;
    const Eigen::Index dim = kernel.dim();
    const GaussSampling sampling = gauss_sampling(nodes, q_count, h);

    // table[(m-1) Q + q] = (h w_q / 2) exp(A (m - xi_q) h) R, m = 1..cells
    std::vector<ComplexMatrix> table(static_cast<std::size_t>(cells * q_count));
    for (int m = 1; m <= cells; ++m) {
        for (int q = 0; q < q_count; ++q) {
            const auto qi = static_cast<std::size_t>(q);
            table[static_cast<std::size_t>((m - 1) * q_count + q)] =
                sampling.weights[qi] *
                (matrix_exponential(kernel.generator(), (m - sampling.xi[qi]) * h) * kernel.resolvent());
        }
    }

    SolutionTrajectory traj;
    traj.spec = spec;
    traj.grid = uniform_grid(spec.omega, nodes);
    if (options.initial) {
        if (options.initial->size() != static_cast<std::size_t>(nodes)) {
            throw DomainError("initial trajectory grid does not match grid_size");
        }
        traj.values = options.initial->values;
    } else {
        traj.values.assign(static_cast<std::size_t>(nodes), ComplexVector::Zero(dim));
    }

    double damping = 1.0;
    std::vector<ComplexVector> next(static_cast<std::size_t>(nodes));
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const std::vector<ComplexVector> forcing = forcing_at_gauss_points(traj.values, sampling, g, h);
        for (int i = 0; i < nodes; ++i) {
            ComplexVector lower = ComplexVector::Zero(dim);
            ComplexVector upper = ComplexVector::Zero(dim);
            for (int j = 0; j < cells; ++j) {
                const int m = j < i ? i - j : cells + i - j;
                const std::size_t row = static_cast<std::size_t>((m - 1) * q_count);
                const std::size_t col = static_cast<std::size_t>(j * q_count);
                ComplexVector& acc = j < i ? lower : upper;
                for (int q = 0; q < q_count; ++q) {
                    acc.noalias() += table[row + static_cast<std::size_t>(q)] *
                                     forcing[col + static_cast<std::size_t>(q)];
                }
            }
            next[static_cast<std::size_t>(i)] = spec.c * lower + upper;
        }
        for (int i = 0; i < nodes; ++i) {
            next[static_cast<std::size_t>(i)] =
                traj.values[static_cast<std::size_t>(i)] +
                damping * (next[static_cast<std::size_t>(i)] - traj.values[static_cast<std::size_t>(i)]);
        }
        const double update = sup_difference(next, traj.values, spec.norm);
        if (!traj.update_history.empty() && update > traj.update_history.back()) {
            damping = 0.5;
        }
        traj.update_history.push_back(update);
        traj.values.swap(next);
        traj.iterations = iter;
        traj.final_update = update;
        if (!std::isfinite(update)) {
            break;
        }
        if (update <= options.tol) {
            traj.residuals = residual_report(traj, kernel.generator(), g);
            return traj;
        }
    }
    throw NonConvergenceError("picard_solve: no convergence after " +
                                  std::to_string(traj.iterations) + " iterations (last update " +
                                  std::to_string(traj.final_update) + ")",
                              traj.final_update, traj.iterations);
}

ComplexVector extend_solution(const SolutionTrajectory& traj, double t) {
    if (!(traj.residuals.boundary <= 1e-6)) {
        throw PreconditionError("extend_solution: boundary residual " +
                                std::to_string(traj.residuals.boundary) + " exceeds 1e-6");
    }
    const double omega = traj.spec.omega;
    const double k = std::floor(t / omega);
    double local = t - k * omega;
    local = std::clamp(local, 0.0, omega);
    return integer_power(traj.spec.c, static_cast<long>(k)) * traj.at(local);
}

Residuals residual_report(const SolutionTrajectory& traj, const ComplexMatrix& a,
                          const NonlinearitySpec& g) {
    const int nodes = static_cast<int>(traj.size());
    if (nodes < 9) {
        throw InterpolationError("residual_report needs at least 9 grid nodes");
    }
    const PeriodicitySpec& spec = traj.spec;
    const NormKind norm = spec.norm;
    const int cells = nodes - 1;
    const double h = spec.omega / cells;

    Residuals r;
    r.boundary = vector_norm(traj.values.back() - spec.c * traj.values.front(), norm);

    // node index p in Z -> c^k y_r with p = k cells + r
    const auto extended_node = [&](int p) -> ComplexVector {
        const int k = static_cast<int>(std::floor(static_cast<double>(p) / cells));
        const int rem = p - k * cells;
        return integer_power(spec.c, static_cast<long>(k)) * traj.values[static_cast<std::size_t>(rem)];
    };
    for (int i = 1; i + 1 < nodes; ++i) {
        const ComplexVector derivative = (extended_node(i - 2) - 8.0 * extended_node(i - 1) +
                                          8.0 * extended_node(i + 1) - extended_node(i + 2)) /
                                         (12.0 * h);
        const ComplexVector& y = traj.values[static_cast<std::size_t>(i)];
        const ComplexVector defect = derivative - a * y - g.evaluate(traj.grid[static_cast<std::size_t>(i)], y);
        r.ode = std::max(r.ode, vector_norm(defect, norm));
    }

    // periodicity of the extension, probed at nodes and cell midpoints
    const auto extend = [&](double t) -> ComplexVector {
        const double k = std::floor(t / spec.omega);
        return integer_power(spec.c, static_cast<long>(k)) * traj.at(std::clamp(t - k * spec.omega, 0.0, spec.omega));
    };
    for (int i = 0; i < 2 * cells; ++i) {
        const double t = 0.5 * h * i;
        r.periodicity = std::max(r.periodicity, vector_norm(extend(t + spec.omega) - spec.c * extend(t), norm));
    }
    return r;
}

SolutionTrajectory poincare_solve(const GreenKernelODE& kernel, const NonlinearitySpec& g,
                                  const PoincareOptions& options) {
    check_grid(options.grid_size);
    check_nonlinearity(kernel, g);
    const int nodes = options.grid_size;
    const int cells = nodes - 1;
    const int q_count = options.gauss_nodes;
    const PeriodicitySpec& spec = kernel.spec();
    const double h = spec.omega / cells;
    const Eigen::Index dim = kernel.dim();
    const ComplexMatrix& a = kernel.generator();
    const GaussRule& rule = gauss_legendre(q_count);

    // output times: each node followed by the Gauss points of its cell
    std::vector<double> times;
    std::vector<double> convolution_weights;
    std::vector<ComplexMatrix> convolution;
    times.reserve(static_cast<std::size_t>(cells * (q_count + 1) + 1));
    for (int j = 0; j < cells; ++j) {
        times.push_back(j * h);
        for (int q = 0; q < q_count; ++q) {
            const double s = (j + 0.5 * (1.0 + rule.nodes[static_cast<std::size_t>(q)])) * h;
            times.push_back(s);
            convolution.push_back(0.5 * h * rule.weights[static_cast<std::size_t>(q)] *
                                  matrix_exponential(a, spec.omega - s));
        }
    }
    times.push_back(spec.omega);

    Dopri5Options ivp;
    ivp.abs_tol = options.tol / 10.0;
    ivp.rel_tol = options.tol / 10.0;
    const OdeRhs rhs = [&](double t, const ComplexVector& y) -> ComplexVector {
        return a * y + g.evaluate(t, y);
    };

    const auto propagate = [&](const ComplexVector& y0) {
        Dopri5 integrator(rhs, ivp);
        return integrator.integrate(y0, times);
    };
    const auto poincare_map = [&](const std::vector<ComplexVector>& path) {
        ComplexVector acc = ComplexVector::Zero(dim);
        std::size_t gauss = 0;
        for (std::size_t idx = 0; idx < path.size(); ++idx) {
            if (idx % static_cast<std::size_t>(q_count + 1) == 0) {
                continue; // node, not a Gauss point
            }
            acc.noalias() += convolution[gauss] * g.evaluate(times[idx], path[idx]);
            ++gauss;
        }
        return ComplexVector(kernel.resolvent() * acc);
    };

    SolutionTrajectory traj;
    traj.spec = spec;
    traj.grid = uniform_grid(spec.omega, nodes);
    ComplexVector y0 = ComplexVector::Zero(dim);
    double damping = 1.0;
    bool converged = false;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const ComplexVector mapped = poincare_map(propagate(y0));
        const ComplexVector next = y0 + damping * (mapped - y0);
        const double update = vector_norm(next - y0, spec.norm);
        if (!traj.update_history.empty() && update > traj.update_history.back()) {
            damping = 0.5;
        }
        traj.update_history.push_back(update);
        y0 = next;
        traj.iterations = iter;
        traj.final_update = update;
        if (!std::isfinite(update)) {
            break;
        }
        if (update <= options.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NonConvergenceError("poincare_solve: no convergence after " +
                                      std::to_string(traj.iterations) + " iterations",
                                  traj.final_update, traj.iterations);
    }
    const std::vector<ComplexVector> path = propagate(y0);
    traj.values.reserve(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) {
        traj.values.push_back(path[static_cast<std::size_t>(i * (q_count + 1))]);
    }
    traj.residuals = residual_report(traj, a, g);
    return traj;
}

double sup_distance(const SolutionTrajectory& a, const SolutionTrajectory& b) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        best = std::max(best, vector_norm(a.values[i] - b.at(a.grid[i]), a.spec.norm));
    }
    return best;
}

} // namespace wcperiod
