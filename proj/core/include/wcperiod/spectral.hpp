#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wcperiod/certificates.hpp"
#include "wcperiod/kernels.hpp"
#include "wcperiod/linalg.hpp"

namespace wcperiod {

enum class BasisKind {
    DirichletSine,       // sqrt(2/pi) sin(kx) on (0, pi), k = 1..K
    PeriodicExponential, // e^{ikx} / sqrt(2 pi) on (0, 2 pi), k = -K..K
};

enum class GeneratorFamily {
    HeatDirichlet,       // lambda_k = -k^2
    SchrodingerPeriodic, // lambda_k = -i k^2
    Custom,              // explicit finite eigenvalue list, no tail
};

/// A generator that is diagonal in an orthonormal basis: S(t) multiplies the
/// coefficient of mode k by exp(lambda_k t). Immutable.
class DiagonalGenerator {
public:
    static DiagonalGenerator heat_dirichlet(int truncation);
    static DiagonalGenerator schrodinger_periodic(int truncation);
    /// Finite generator with explicit modes and eigenvalues; Q and gamma must satisfy
    /// |exp(lambda_k t)| <= Q exp(gamma t) for t >= 0.
    static DiagonalGenerator custom(BasisKind basis, std::vector<long> modes,
                                    std::vector<Complex> eigenvalues, double q, double gamma);

    BasisKind basis() const noexcept { return basis_; }
    GeneratorFamily family() const noexcept { return family_; }
    int truncation() const noexcept { return truncation_; }
    std::size_t size() const noexcept { return modes_.size(); }
    /// Mode index of each coefficient slot.
    const std::vector<long>& modes() const noexcept { return modes_; }
    const std::vector<Complex>& eigenvalues() const noexcept { return eigenvalues_; }
    double growth_q() const noexcept { return q_; }
    double growth_gamma() const noexcept { return gamma_; }
    /// True when S(t) is a group (|exp(lambda_k t)| stays bounded for t < 0).
    bool is_group() const noexcept;
    /// Length of the spatial interval: pi (sine) or 2 pi (exponential).
    double domain_length() const noexcept;
    /// Orthonormal basis function of coefficient slot `slot` at x.
    Complex basis_function(std::size_t slot, double x) const;

private:
    DiagonalGenerator() = default;

    BasisKind basis_ = BasisKind::DirichletSine;
    GeneratorFamily family_ = GeneratorFamily::Custom;
    int truncation_ = 0;
    std::vector<long> modes_;
    std::vector<Complex> eigenvalues_;
    double q_ = 1.0;
    double gamma_ = 0.0;
};

/// Coefficients of a field in the generator's orthonormal basis. The state space
/// norm is the Euclidean norm of the coefficients (Parseval).
struct FieldState {
    ComplexVector coefficients;

    double norm() const { return coefficients.norm(); }
};

/// Coefficient-wise multiplication by exp(lambda_k t). Negative t is a DomainError
/// unless the generator is a group.
FieldState semigroup_apply(const DiagonalGenerator& gen, double t, const FieldState& state);

/// sup_k 1 / |c - exp(lambda_k omega)| over the truncated modes and, for the
/// closed-form families, over the analytic tail k > K. Throws ResonanceError
/// (with the mode index) when some distance is below `margin_tol`.
double resolvent_norm(const DiagonalGenerator& gen, const PeriodicitySpec& spec,
                      double margin_tol = kDefaultMarginTol);

/// (Q, gamma, resolvent_norm) for the mild-solution certificates.
GeneratorConstants generator_constants(const DiagonalGenerator& gen, const PeriodicitySpec& spec);

/// Evaluation of fields on a uniform spatial grid and orthonormal projection back.
/// Sine basis: interior points x_j = j pi / (N+1), j = 1..N.
/// Exponential basis: x_j = 2 pi j / N, j = 0..N-1.
class GridTransform {
public:
    /// Throws AliasingError unless points >= 2K + 2.
    GridTransform(const DiagonalGenerator& gen, int points);

    int points() const noexcept { return static_cast<int>(x_.size()); }
    const std::vector<double>& nodes() const noexcept { return x_; }
    /// Quadrature weight of each grid point (exact for products of basis functions).
    double weight() const noexcept { return weight_; }

    std::vector<Complex> forward(const FieldState& state) const;
    FieldState inverse(const std::vector<Complex>& samples) const;

    /// Column-wise versions: coefficients (modes x m) <-> samples (points x m).
    ComplexMatrix forward(const ComplexMatrix& coefficients) const;
    ComplexMatrix inverse(const ComplexMatrix& samples) const;

private:
    std::vector<double> x_;
    double weight_ = 0.0;
    ComplexMatrix synthesis_; // (j, slot) = e_slot(x_j)
    ComplexMatrix analysis_;  // weight * synthesis^H
};

/// g(t, y)(x) = forcing_time(t) forcing_profile(x) + reaction(t, x, y(x)).
///
/// The separable forcing is projected by accurate quadrature (not on the grid),
/// the reaction is applied pointwise on the grid.
struct FieldNonlinearity {
    std::function<Complex(double)> forcing_time;
    std::function<Complex(double)> forcing_profile;
    std::function<Complex(double t, double x, Complex u)> reaction;
    std::optional<double> lipschitz;
    std::optional<double> g1;
    std::optional<double> g2;
    bool c1_declared = false;
    bool real_valued = false;
};

/// L^2 projection of a profile onto the basis by composite Gauss quadrature.
FieldState project_profile(const DiagonalGenerator& gen, const std::function<Complex(double)>& profile);

/// The nonlinearity as a map on coefficient vectors, with ||g(t,0)|| computed by
/// quadrature in physical space. `grid_points` = 0 selects 4K.
NonlinearitySpec coefficient_nonlinearity(const DiagonalGenerator& gen, const FieldNonlinearity& field,
                                          int grid_points = 0);

struct MildResiduals {
    double boundary = 0.0; // ||y(omega) - c y(0)||
    double mild = 0.0;     // max_i ||y(t_i) - S(t_i) y(0) - int_0^{t_i} S(t_i - s) g ds||
};

struct MildTrajectory {
    PeriodicitySpec spec;
    std::vector<double> grid;
    std::vector<FieldState> states;
    int iterations = 0;
    double final_update = 0.0;
    std::vector<double> update_history;
    MildResiduals residuals;

    std::size_t size() const noexcept { return grid.size(); }
    /// Piecewise-cubic interpolation in time on [0, omega].
    FieldState at(double t) const;
    /// max over [0, omega] of ||y(., t)||, refined on the interpolant around the best node.
    double sup_norm() const;
};

struct MildOptions {
    int time_grid = 257;
    double tol = 1e-10;
    int max_iter = 200;
    int grid_points = 0; // spatial points; 0 selects 4K
};

/// Picard iteration on y(t) = int_0^omega G(t,s) g(s, y(s)) ds with the per-mode
/// scalar Green kernel G_k(t,s) = c e^{lambda_k (t-s)} / (c - e^{lambda_k omega}) for
/// s <= t and e^{lambda_k (omega+t-s)} / (c - e^{lambda_k omega}) for s > t. Time
/// integrals use exact exponential weights against the piecewise-cubic interpolant
/// of g, so stiff modes are integrated without step restrictions.
MildTrajectory mild_picard_solve(const DiagonalGenerator& gen, const FieldNonlinearity& field,
                                 const PeriodicitySpec& spec, const MildOptions& options = {});

/// Scalar Green kernel of mode lambda: c e^{lambda (t-s)} / (c - e^{lambda omega}) for s <= t,
/// e^{lambda (omega+t-s)} / (c - e^{lambda omega}) for s > t. DomainError outside [0, omega]^2.
Complex mode_green_kernel(Complex lambda, const PeriodicitySpec& spec, double t, double s);

/// c^k y(t - k omega). Throws PreconditionError if the boundary residual exceeds 1e-6.
FieldState mild_extend(const MildTrajectory& traj, double t);

/// Cox-Matthews fourth-order exponential time differencing for y' = diag(lambda) y + g(t, y)
/// on coefficient vectors: `steps` uniform steps from t0 to t1 (t1 >= t0).
FieldState etdrk4_propagate(const DiagonalGenerator& gen, const NonlinearitySpec& g, const FieldState& y0,
                            double t0, double t1, int steps);

/// phi_m(z) = int_0^1 e^{(1-theta) z} theta^{m-1} / (m-1)! d theta, m >= 0 (phi_0 = e^z).
Complex phi_function(int m, Complex z);

} // namespace wcperiod
