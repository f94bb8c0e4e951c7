#include "wcperiod/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "wcperiod/errors.hpp"
#include "wcperiod/ode_solver.hpp"
#include "wcperiod/quadrature.hpp"

namespace wcperiod {

namespace {

constexpr double kPi = std::numbers::pi;

void check_truncation(int truncation) {
    if (truncation < 1) {
        throw DomainError("spectral truncation must be at least 1, got " + std::to_string(truncation));
    }
}

// Composite Gauss-Legendre nodes and weights on [0, length].
struct SpatialRule {
    std::vector<double> x;
    std::vector<double> w;
};

SpatialRule spatial_rule(double length, int panels = 64, int per_panel = 16) {
    const GaussRule& rule = gauss_legendre(per_panel);
    SpatialRule out;
    const double width = length / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        for (int q = 0; q < per_panel; ++q) {
            out.x.push_back(mid + 0.5 * width * rule.nodes[static_cast<std::size_t>(q)]);
            out.w.push_back(0.5 * width * rule.weights[static_cast<std::size_t>(q)]);
        }
    }
    return out;
}

// Best rational approximation p/q of x with q <= max_den, if |x - p/q| <= tol.
bool rational_approximation(double x, long max_den, double tol, long& num, long& den) {
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(r);
        const long ai = static_cast<long>(a);
        const long h2 = ai * h1 + h0;
        const long k2 = ai * k1 + k0;
        if (k2 > max_den) {
            return false;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) {
            num = h1;
            den = k1;
            return true;
        }
        const double frac = r - a;
        if (frac <= 0.0) {
            break;
        }
        r = 1.0 / frac;
    }
    return false;
}

struct ResolventScan {
    double sup = 0.0;
    double min_distance = std::numeric_limits<double>::infinity();
    Complex eigenvalue{0.0, 0.0};
    long mode = 0;

    void add(Complex c, Complex lambda, double omega, long k) {
        const double d = std::abs(c - std::exp(lambda * omega));
        if (d < min_distance) {
            min_distance = d;
            eigenvalue = lambda;
            mode = k;
        }
    }
    // accumulation point with no eigenvalue attached
    void add_limit(Complex c, Complex mu) {
        const double d = std::abs(c - mu);
        if (d < min_distance) {
            min_distance = d;
            eigenvalue = Complex(-std::numeric_limits<double>::infinity(), 0.0);
            mode = 0;
        }
    }
};

// Lagrange basis l_p(offset + theta) on nodes 0..3 as a cubic in theta.
std::array<std::array<double, 4>, 4> shifted_lagrange(int offset) {
    std::array<std::array<double, 4>, 4> coeffs{};
    for (int p = 0; p < 4; ++p) {
        std::array<double, 4> poly{1.0, 0.0, 0.0, 0.0};
        int degree = 0;
        for (int r = 0; r < 4; ++r) {
            if (r == p) {
                continue;
            }
            const double shift = offset - r;
            const double scale = 1.0 / static_cast<double>(p - r);
            std::array<double, 4> next{};
            for (int n = 0; n <= degree; ++n) {
                next[static_cast<std::size_t>(n)] += shift * poly[static_cast<std::size_t>(n)] * scale;
                next[static_cast<std::size_t>(n + 1)] += poly[static_cast<std::size_t>(n)] * scale;
            }
            poly = next;
            ++degree;
        }
        coeffs[static_cast<std::size_t>(p)] = poly;
    }
    return coeffs;
}

void check_field(const DiagonalGenerator& gen, const FieldNonlinearity& field) {
    if (gen.size() == 0) {
        throw DomainError("generator has no modes");
    }
    if (static_cast<bool>(field.forcing_time) != static_cast<bool>(field.forcing_profile)) {
        throw DomainError("forcing_time and forcing_profile must be given together");
    }
}

int default_points(const DiagonalGenerator& gen, int grid_points) {
    if (grid_points > 0) {
        return grid_points;
    }
    const int k = gen.truncation() > 0 ? gen.truncation() : static_cast<int>(gen.size());
    return 4 * k;
}

// g(t_i, y_i) for every column i of `states`.
class FieldEvaluator {
public:
    FieldEvaluator(const DiagonalGenerator& gen, const FieldNonlinearity& field, int points)
        : field_(field), transform_(gen, points) {
        if (field.forcing_profile) {
            profile_ = project_profile(gen, field.forcing_profile).coefficients;
        }
    }

    const GridTransform& transform() const { return transform_; }

    ComplexMatrix evaluate(const std::vector<double>& times, const ComplexMatrix& states) const {
        const auto m = states.cols();
        ComplexMatrix result = ComplexMatrix::Zero(states.rows(), m);
        if (field_.reaction) {
            ComplexMatrix samples = transform_.forward(states);
            const std::vector<double>& x = transform_.nodes();
            for (Eigen::Index col = 0; col < m; ++col) {
                const double t = times[static_cast<std::size_t>(col)];
                for (Eigen::Index j = 0; j < samples.rows(); ++j) {
                    samples(j, col) = field_.reaction(t, x[static_cast<std::size_t>(j)], samples(j, col));
                }
            }
            result = transform_.inverse(samples);
        }
        if (field_.forcing_time) {
            for (Eigen::Index col = 0; col < m; ++col) {
                result.col(col) += field_.forcing_time(times[static_cast<std::size_t>(col)]) * profile_;
            }
        }
        return result;
    }

private:
    FieldNonlinearity field_;
    GridTransform transform_;
    ComplexVector profile_;
};

} // namespace

DiagonalGenerator DiagonalGenerator::heat_dirichlet(int truncation) {
    check_truncation(truncation);
    DiagonalGenerator gen;
    gen.basis_ = BasisKind::DirichletSine;
    gen.family_ = GeneratorFamily::HeatDirichlet;
    gen.truncation_ = truncation;
    for (long k = 1; k <= truncation; ++k) {
        gen.modes_.push_back(k);
        gen.eigenvalues_.emplace_back(-static_cast<double>(k * k), 0.0);
    }
    gen.q_ = 1.0;
    gen.gamma_ = -1.0;
    return gen;
}

DiagonalGenerator DiagonalGenerator::schrodinger_periodic(int truncation) {
    check_truncation(truncation);
    DiagonalGenerator gen;
    gen.basis_ = BasisKind::PeriodicExponential;
    gen.family_ = GeneratorFamily::SchrodingerPeriodic;
    gen.truncation_ = truncation;
    for (long k = -truncation; k <= truncation; ++k) {
        gen.modes_.push_back(k);
        gen.eigenvalues_.emplace_back(0.0, -static_cast<double>(k * k));
    }
    gen.q_ = 1.0;
    gen.gamma_ = 0.0;
    return gen;
}

DiagonalGenerator DiagonalGenerator::custom(BasisKind basis, std::vector<long> modes,
                                            std::vector<Complex> eigenvalues, double q, double gamma) {
    if (modes.empty() || modes.size() != eigenvalues.size()) {
        throw DomainError("custom generator needs one eigenvalue per mode");
    }
    if (!(q >= 1.0) || !std::isfinite(q) || !std::isfinite(gamma)) {
        throw DomainError("custom generator needs finite Q >= 1 and finite gamma");
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (basis == BasisKind::DirichletSine && modes[i] < 1) {
            throw DomainError("sine modes start at 1");
        }
        const Complex lambda = eigenvalues[i];
        if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
            throw DomainError("custom generator eigenvalues must be finite");
        }
        if (lambda.real() > gamma + 1e-14 * std::max(1.0, std::abs(gamma))) {
            throw DomainError("custom generator eigenvalue has real part above gamma");
        }
    }
    DiagonalGenerator gen;
    gen.basis_ = basis;
    gen.family_ = GeneratorFamily::Custom;
    long k_max = 0;
    for (long k : modes) {
        k_max = std::max(k_max, std::abs(k));
    }
    gen.truncation_ = static_cast<int>(k_max);
    gen.modes_ = std::move(modes);
    gen.eigenvalues_ = std::move(eigenvalues);
    gen.q_ = q;
    gen.gamma_ = gamma;
    return gen;
}

bool DiagonalGenerator::is_group() const noexcept {
    return family_ != GeneratorFamily::HeatDirichlet;
}

double DiagonalGenerator::domain_length() const noexcept {
    return basis_ == BasisKind::DirichletSine ? kPi : 2.0 * kPi;
}

Complex DiagonalGenerator::basis_function(std::size_t slot, double x) const {
    const double k = static_cast<double>(modes_.at(slot));
    if (basis_ == BasisKind::DirichletSine) {
        return {std::sqrt(2.0 / kPi) * std::sin(k * x), 0.0};
    }
    return std::polar(1.0 / std::sqrt(2.0 * kPi), k * x);
}

FieldState semigroup_apply(const DiagonalGenerator& gen, double t, const FieldState& state) {
    if (!std::isfinite(t)) {
        throw DomainError("semigroup_apply: t must be finite");
    }
    if (t < 0.0 && !gen.is_group()) {
        throw DomainError("semigroup_apply: negative time for a semigroup that is not a group");
    }
    if (static_cast<std::size_t>(state.coefficients.size()) != gen.size()) {
        throw DomainError("semigroup_apply: state size does not match the generator");
    }
    FieldState out = state;
    for (std::size_t i = 0; i < gen.size(); ++i) {
        out.coefficients(static_cast<Eigen::Index>(i)) *= std::exp(gen.eigenvalues()[i] * t);
    }
    return out;
}

double resolvent_norm(const DiagonalGenerator& gen, const PeriodicitySpec& spec, double margin_tol) {
    spec.validate();
    const Complex c = spec.c;
    const double omega = spec.omega;
    ResolventScan scan;
    for (std::size_t i = 0; i < gen.size(); ++i) {
        scan.add(c, gen.eigenvalues()[i], omega, gen.modes()[i]);
    }

    if (gen.family() == GeneratorFamily::HeatDirichlet) {
        // e^{-k^2 omega} decreases to 0; stop once it cannot move the distance
        const double cutoff = 1e-17 * std::abs(c);
        for (long k = gen.truncation() + 1;; ++k) {
            const double mu = std::exp(-static_cast<double>(k) * static_cast<double>(k) * omega);
            if (mu < cutoff || k > gen.truncation() + 10'000'000L) {
                break;
            }
            scan.add(c, Complex(-static_cast<double>(k * k), 0.0), omega, k);
        }
        scan.add_limit(c, Complex(0.0, 0.0));
    } else if (gen.family() == GeneratorFamily::SchrodingerPeriodic) {
        // e^{-i k^2 omega} depends only on k mod q when omega / (2 pi) = p / q
        long num = 0, den = 0;
        if (rational_approximation(omega / (2.0 * kPi), 100000, 1e-13, num, den)) {
            for (long k = gen.truncation() + 1; k <= gen.truncation() + den; ++k) {
                scan.add(c, Complex(0.0, -static_cast<double>(k) * static_cast<double>(k)), omega, k);
            }
        } else {
            // k^2 alpha mod 1 is equidistributed for irrational alpha: the tail is dense on |z| = 1
            const double d = std::abs(std::abs(c) - 1.0);
            if (d < scan.min_distance) {
                scan.min_distance = d;
                scan.eigenvalue = Complex(0.0, std::numeric_limits<double>::quiet_NaN());
                scan.mode = 0;
            }
        }
    }

    if (scan.min_distance < margin_tol) {
        throw ResonanceError("resolvent: c is within " + std::to_string(scan.min_distance) +
                                 " of the spectrum of the period map (mode " + std::to_string(scan.mode) + ")",
                             scan.eigenvalue, scan.min_distance, scan.mode);
    }
    return 1.0 / scan.min_distance;
}

GeneratorConstants generator_constants(const DiagonalGenerator& gen, const PeriodicitySpec& spec) {
    GeneratorConstants out;
    out.q = gen.growth_q();
    out.gamma = gen.growth_gamma();
    out.resolvent_norm = resolvent_norm(gen, spec);
    return out;
}

GridTransform::GridTransform(const DiagonalGenerator& gen, int points) {
    const int k = gen.truncation();
    if (points < 2 * k + 2) {
        throw AliasingError("spatial grid of " + std::to_string(points) + " points aliases " +
                            std::to_string(k) + " modes (need at least " + std::to_string(2 * k + 2) + ")");
    }
    const auto n = static_cast<std::size_t>(points);
    x_.resize(n);
    if (gen.basis() == BasisKind::DirichletSine) {
        for (std::size_t j = 0; j < n; ++j) {
            x_[j] = static_cast<double>(j + 1) * kPi / static_cast<double>(points + 1);
        }
        weight_ = kPi / static_cast<double>(points + 1);
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            x_[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(points);
        }
        weight_ = 2.0 * kPi / static_cast<double>(points);
    }
    synthesis_.resize(points, static_cast<Eigen::Index>(gen.size()));
    for (Eigen::Index j = 0; j < synthesis_.rows(); ++j) {
        for (Eigen::Index s = 0; s < synthesis_.cols(); ++s) {
            synthesis_(j, s) = gen.basis_function(static_cast<std::size_t>(s), x_[static_cast<std::size_t>(j)]);
        }
    }
    analysis_ = weight_ * synthesis_.adjoint();
}

std::vector<Complex> GridTransform::forward(const FieldState& state) const {
    const ComplexVector u = synthesis_ * state.coefficients;
    return {u.data(), u.data() + u.size()};
}

FieldState GridTransform::inverse(const std::vector<Complex>& samples) const {
    if (static_cast<Eigen::Index>(samples.size()) != synthesis_.rows()) {
        throw DomainError("GridTransform::inverse: wrong number of samples");
    }
    const Eigen::Map<const ComplexVector> u(samples.data(), static_cast<Eigen::Index>(samples.size()));
    return {analysis_ * u};
}

ComplexMatrix GridTransform::forward(const ComplexMatrix& coefficients) const {
    return synthesis_ * coefficients;
}

ComplexMatrix GridTransform::inverse(const ComplexMatrix& samples) const {
    return analysis_ * samples;
}

FieldState project_profile(const DiagonalGenerator& gen, const std::function<Complex(double)>& profile) {
    const SpatialRule rule = spatial_rule(gen.domain_length());
    FieldState out{ComplexVector::Zero(static_cast<Eigen::Index>(gen.size()))};
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const Complex value = profile(rule.x[q]) * rule.w[q];
        for (std::size_t s = 0; s < gen.size(); ++s) {
            out.coefficients(static_cast<Eigen::Index>(s)) += value * std::conj(gen.basis_function(s, rule.x[q]));
        }
    }
    return out;
}

NonlinearitySpec coefficient_nonlinearity(const DiagonalGenerator& gen, const FieldNonlinearity& field,
                                          int grid_points) {
    check_field(gen, field);
    const auto evaluator = std::make_shared<FieldEvaluator>(gen, field, default_points(gen, grid_points));
    NonlinearitySpec spec;
    spec.dim = static_cast<Eigen::Index>(gen.size());
    spec.evaluate = [evaluator](double t, const ComplexVector& y) -> ComplexVector {
        return evaluator->evaluate({t}, y).col(0);
    };
    spec.lipschitz = field.lipschitz;
    spec.g1 = field.g1;
    spec.g2 = field.g2;
    spec.c1_declared = field.c1_declared;
    spec.real_valued = field.real_valued;

    const auto rule = std::make_shared<SpatialRule>(spatial_rule(gen.domain_length()));
    spec.forcing_norm = [rule, field](double t) {
        const Complex time_factor = field.forcing_time ? field.forcing_time(t) : Complex(0.0, 0.0);
        double sum = 0.0;
        for (std::size_t q = 0; q < rule->x.size(); ++q) {
            const double x = rule->x[q];
            Complex v = field.forcing_profile ? time_factor * field.forcing_profile(x) : Complex(0.0, 0.0);
            if (field.reaction) {
                v += field.reaction(t, x, Complex(0.0, 0.0));
            }
            sum += rule->w[q] * std::norm(v);
        }
        return std::sqrt(sum);
    };
    return spec;
}

FieldState MildTrajectory::at(double t) const {
    const int nodes = static_cast<int>(grid.size());
    if (nodes < 4 || states.size() != grid.size()) {
        throw InterpolationError("trajectory grid is degenerate");
    }
    const double omega = grid.back();
    if (!(t >= 0.0 && t <= omega)) {
        throw DomainError("MildTrajectory::at: t outside [0, omega]");
    }
    const double h = omega / (nodes - 1);
    const int cell = std::min(static_cast<int>(t / h), nodes - 2);
    const CubicStencil stencil = cubic_stencil(nodes, cell, t / h - cell);
    FieldState out{ComplexVector::Zero(states.front().coefficients.size())};
    for (int p = 0; p < 4; ++p) {
        out.coefficients += stencil.weights[p] * states[static_cast<std::size_t>(stencil.first + p)].coefficients;
    }
    return out;
}

double MildTrajectory::sup_norm() const {
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].norm() > best) {
            best = states[i].norm();
            arg = i;
        }
    }
    if (grid.size() < 2) {
        return best;
    }
    const auto norm_at = [this](double t) { return at(t).norm(); };
    const double lo = grid[arg == 0 ? 0 : arg - 1];
    const double hi = grid[std::min(arg + 1, grid.size() - 1)];
    return std::max(best, norm_at(golden_section_max(norm_at, lo, hi, 1e-12 * spec.omega)));
}

Complex phi_function(int m, Complex z) {
    if (m < 0) {
        throw DomainError("phi_function: m must be non-negative");
    }
    if (m == 0) {
        return std::exp(z);
    }
    if (std::abs(z) < 2.0) {
        // sum_j z^j / (j + m)!
        double factorial = 1.0;
        for (int i = 2; i <= m; ++i) {
            factorial *= i;
        }
        Complex term = 1.0 / factorial;
        Complex sum = term;
        for (int j = 1; j < 60; ++j) {
            term *= z / static_cast<double>(j + m);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        return sum;
    }
    Complex phi = std::exp(z);
    double inv_factorial = 1.0; // 1 / (j-1)!
    for (int j = 1; j <= m; ++j) {
        phi = (phi - inv_factorial) / z;
        inv_factorial /= j;
    }
    return phi;
}

MildTrajectory mild_picard_solve(const DiagonalGenerator& gen, const FieldNonlinearity& field,
                                 const PeriodicitySpec& spec, const MildOptions& options) {
    spec.validate();
    check_field(gen, field);
    if (options.time_grid < 9) {
        throw InterpolationError("time_grid must be at least 9 nodes, got " + std::to_string(options.time_grid));
    }
    if (!(options.tol > 0.0) || options.max_iter < 1) {
        throw DomainError("mild_picard_solve: tol must be positive and max_iter at least 1");
    }
    const FieldEvaluator evaluator(gen, field, default_points(gen, options.grid_points));
    const int nodes = options.time_grid;
    const int cells = nodes - 1;
    const double omega = spec.omega;
    const double h = omega / cells;
    const Complex c = spec.c;
    const auto modes = static_cast<Eigen::Index>(gen.size());
    const std::vector<Complex>& lambda = gen.eigenvalues();

    ComplexVector step_factor(modes), denominator(modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        const Complex lk = lambda[static_cast<std::size_t>(k)];
        step_factor(k) = std::exp(lk * h);
        denominator(k) = c - std::exp(lk * omega);
        if (std::abs(denominator(k)) < kDefaultMarginTol) {
            throw ResonanceError("mild_picard_solve: c is resonant with mode " +
                                     std::to_string(gen.modes()[static_cast<std::size_t>(k)]),
                                 lk, std::abs(denominator(k)), gen.modes()[static_cast<std::size_t>(k)]);
        }
    }

    // weights[offset](k, p) = int_0^h e^{lambda_k (h - s)} l_p(offset + s/h) ds
    std::array<ComplexMatrix, 3> weights;
    for (int offset = 0; offset < 3; ++offset) {
        const auto poly = shifted_lagrange(offset);
        ComplexMatrix& w = weights[static_cast<std::size_t>(offset)];
        w.resize(modes, 4);
        for (Eigen::Index k = 0; k < modes; ++k) {
            const Complex z = lambda[static_cast<std::size_t>(k)] * h;
            // n! phi_{n+1}(z) = int_0^1 e^{z(1-theta)} theta^n d theta
            std::array<Complex, 4> moments;
            double factorial = 1.0;
            for (int n = 0; n < 4; ++n) {
                if (n > 0) {
                    factorial *= n;
                }
                moments[static_cast<std::size_t>(n)] = factorial * phi_function(n + 1, z);
            }
            for (int p = 0; p < 4; ++p) {
                Complex sum = 0.0;
                for (int n = 0; n < 4; ++n) {
                    sum += poly[static_cast<std::size_t>(p)][static_cast<std::size_t>(n)] *
                           moments[static_cast<std::size_t>(n)];
                }
                w(k, p) = h * sum;
            }
        }
    }
    std::vector<CubicStencil> stencils;
    for (int cell = 0; cell < cells; ++cell) {
        stencils.push_back(cubic_stencil(nodes, cell, 0.5));
    }

    // power(k, m) = e^{lambda_k m h}
    ComplexMatrix power(modes, nodes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        for (int m = 0; m < nodes; ++m) {
            power(k, m) = std::exp(lambda[static_cast<std::size_t>(k)] * (m * h));
        }
    }

    MildTrajectory traj;
    traj.spec = spec;
    traj.grid.resize(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) {
        traj.grid[static_cast<std::size_t>(i)] = omega * i / cells;
    }
    traj.grid.back() = omega;

    // cell integrals C(:, j) = int_{t_j}^{t_{j+1}} e^{lambda (t_{j+1} - s)} g(s) ds
    const auto cell_integrals = [&](const ComplexMatrix& values) {
        const ComplexMatrix g = evaluator.evaluate(traj.grid, values);
        ComplexMatrix integrals(modes, cells);
        for (int j = 0; j < cells; ++j) {
            const CubicStencil& st = stencils[static_cast<std::size_t>(j)];
            const ComplexMatrix& w = weights[static_cast<std::size_t>(j - st.first)];
            integrals.col(j) = w.col(0).cwiseProduct(g.col(st.first)) + w.col(1).cwiseProduct(g.col(st.first + 1)) +
                               w.col(2).cwiseProduct(g.col(st.first + 2)) +
                               w.col(3).cwiseProduct(g.col(st.first + 3));
        }
        return integrals;
    };
    // forward(:, i) = int_0^{t_i} e^{lambda (t_i - s)} g(s) ds
    const auto forward_sums = [&](const ComplexMatrix& integrals) {
        ComplexMatrix fwd(modes, nodes);
        fwd.col(0).setZero();
        for (int i = 1; i < nodes; ++i) {
            fwd.col(i) = step_factor.cwiseProduct(fwd.col(i - 1)) + integrals.col(i - 1);
        }
        return fwd;
    };

    ComplexMatrix values = ComplexMatrix::Zero(modes, nodes);
    ComplexMatrix next(modes, nodes);
    double damping = 1.0;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const ComplexMatrix integrals = cell_integrals(values);
        const ComplexMatrix fwd = forward_sums(integrals);
        // tail(:, i) = sum_{j >= i} e^{lambda (cells - 1 - j) h} C(:, j)
        ComplexVector tail = ComplexVector::Zero(modes);
        for (int i = nodes - 1; i >= 0; --i) {
            if (i < cells) {
                tail += power.col(cells - 1 - i).cwiseProduct(integrals.col(i));
            }
            next.col(i) = (c * fwd.col(i) + power.col(i).cwiseProduct(tail)).cwiseQuotient(denominator);
        }
        next = values + damping * (next - values);

        double update = 0.0;
        for (int i = 0; i < nodes; ++i) {
            update = std::max(update, (next.col(i) - values.col(i)).norm());
        }
        if (!traj.update_history.empty() && update > traj.update_history.back()) {
            damping = 0.5;
        }
        traj.update_history.push_back(update);
        values.swap(next);
        traj.iterations = iter;
        traj.final_update = update;
        if (!std::isfinite(update)) {
            break;
        }
        if (update <= options.tol) {
            traj.states.resize(static_cast<std::size_t>(nodes));
            for (int i = 0; i < nodes; ++i) {
                traj.states[static_cast<std::size_t>(i)].coefficients = values.col(i);
            }
            traj.residuals.boundary = (values.col(cells) - c * values.col(0)).norm();
            const ComplexMatrix check = forward_sums(cell_integrals(values));
            for (int i = 0; i < nodes; ++i) {
                const ComplexVector defect =
                    values.col(i) - power.col(i).cwiseProduct(values.col(0)) - check.col(i);
                traj.residuals.mild = std::max(traj.residuals.mild, defect.norm());
            }
            return traj;
        }
    }
    throw NonConvergenceError("mild_picard_solve: no convergence after " + std::to_string(traj.iterations) +
                                  " iterations (last update " + std::to_string(traj.final_update) + ")",
                              traj.final_update, traj.iterations);
}

Complex mode_green_kernel(Complex lambda, const PeriodicitySpec& spec, double t, double s) {
    spec.validate();
    if (!(t >= 0.0 && t <= spec.omega && s >= 0.0 && s <= spec.omega)) {
        throw DomainError("mode_green_kernel: arguments must lie in [0, omega]");
    }
    const Complex denominator = spec.c - std::exp(lambda * spec.omega);
    if (s <= t) {
        return spec.c * std::exp(lambda * (t - s)) / denominator;
    }
    return std::exp(lambda * (spec.omega + t - s)) / denominator;
}

FieldState mild_extend(const MildTrajectory& traj, double t) {
    if (!(traj.residuals.boundary <= 1e-6)) {
        throw PreconditionError("mild_extend: boundary residual " + std::to_string(traj.residuals.boundary) +
                                " exceeds 1e-6");
    }
    const double omega = traj.spec.omega;
    const double k = std::floor(t / omega);
    const double local = std::clamp(t - k * omega, 0.0, omega);
    FieldState out = traj.at(local);
    out.coefficients *= integer_power(traj.spec.c, static_cast<long>(k));
    return out;
}

FieldState etdrk4_propagate(const DiagonalGenerator& gen, const NonlinearitySpec& g, const FieldState& y0,
                            double t0, double t1, int steps) {
    if (steps < 1 || !(t1 >= t0)) {
        throw DomainError("etdrk4_propagate: need steps >= 1 and t1 >= t0");
    }
    const auto modes = static_cast<Eigen::Index>(gen.size());
    if (y0.coefficients.size() != modes || g.dim != modes) {
        throw DomainError("etdrk4_propagate: state size does not match the generator");
    }
    const double h = (t1 - t0) / steps;
    ComplexVector e(modes), e_half(modes), p_half(modes), f1(modes), f2(modes), f3(modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        const Complex z = gen.eigenvalues()[static_cast<std::size_t>(k)] * h;
        const Complex p1 = phi_function(1, z);
        const Complex p2 = phi_function(2, z);
        const Complex p3 = phi_function(3, z);
        e(k) = std::exp(z);
        e_half(k) = std::exp(0.5 * z);
        p_half(k) = 0.5 * h * phi_function(1, 0.5 * z);
        f1(k) = h * (p1 - 3.0 * p2 + 4.0 * p3);
        f2(k) = h * 2.0 * (p2 - 2.0 * p3);
        f3(k) = h * (4.0 * p3 - p2);
    }
    ComplexVector u = y0.coefficients;
    for (int n = 0; n < steps; ++n) {
        const double t = t0 + n * h;
        const ComplexVector nu = g.evaluate(t, u);
        const ComplexVector a = e_half.cwiseProduct(u) + p_half.cwiseProduct(nu);
        const ComplexVector na = g.evaluate(t + 0.5 * h, a);
        const ComplexVector b = e_half.cwiseProduct(u) + p_half.cwiseProduct(na);
        const ComplexVector nb = g.evaluate(t + 0.5 * h, b);
        const ComplexVector c = e_half.cwiseProduct(a) + p_half.cwiseProduct(2.0 * nb - nu);
        const ComplexVector nc = g.evaluate(t + h, c);
        u = e.cwiseProduct(u) + f1.cwiseProduct(nu) + f2.cwiseProduct(na + nb) + f3.cwiseProduct(nc);
    }
    return {u};
}

} // namespace wcperiod
