#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcperiod/kernels.hpp"
#include "wcperiod/linalg.hpp"

namespace wcperiod {

using VectorField = std::function<ComplexVector(double t, const ComplexVector& y)>;

/// The nonlinearity g(t, y) together with its analytically declared constants.
///
/// The constants are never derived from samples; `spot_check_constants` only
/// looks for evidence that a declared value is wrong.
struct NonlinearitySpec {
    Eigen::Index dim = 0;
    VectorField evaluate;
    std::optional<double> lipschitz; // ||g(t,y1) - g(t,y2)|| <= L ||y1 - y2||
    std::optional<double> g1;        // ||g(t,y)|| <= g1 + g2 ||y||
    std::optional<double> g2;
    bool c1_declared = false;        // g(t + omega, c y) = c g(t, y)
    bool real_valued = false;        // sample y in R^n rather than C^n
    /// Optional exact ||g(t, 0)||. Used when the state space norm is not the norm
    /// of the evaluated vector (e.g. an L^2 field represented by truncated modes).
    std::function<double(double)> forcing_norm;
};

/// max over deterministic samples (t in [0, 2 omega], y in the ball of radius 5)
/// of ||g(t + omega, c y) - c g(t, y)||.
double verify_c1(const NonlinearitySpec& g, const PeriodicitySpec& spec, int samples,
                 std::uint64_t seed = 20240611);

struct ConstantSpotCheck {
    double lipschitz_ratio = 0.0; // max sampled difference quotient / L (<= 1 + 1e-6 is consistent)
    double growth_excess = 0.0;   // max sampled ||g|| - (g1 + g2 ||y||) (<= 1e-9 is consistent)
};

ConstantSpotCheck spot_check_constants(const NonlinearitySpec& g, const PeriodicitySpec& spec,
                                       int samples, std::uint64_t seed = 20240611);

/// ||g(., 0)||_0 = max_{t in [0, omega]} ||g(t, 0)|| by dense sampling and
/// golden-section refinement of the best sample.
double zero_forcing_sup_norm(const NonlinearitySpec& g, const PeriodicitySpec& spec,
                             int t_samples = 1025);

enum class Theorem { T31, T41, T51, T52 };
std::string_view to_string(Theorem theorem);

/// Which value of M a finite-dimensional certificate used.
enum class MSource { ExactM, Mb, Mc };
std::string_view to_string(MSource source);
MSource parse_m_source(std::string_view name);

struct Verdict {
    bool certified = false;
    std::string reason; // empty when certified
};

struct Certificate {
    Theorem theorem = Theorem::T31;
    std::map<std::string, double> constants;
    Verdict verdict;
    std::string inputs_digest;
    std::optional<MSource> m_source;
    std::vector<std::string> notes;
    /// T52 only: Gronwall bound ||y(y0, t)|| <= Q(||y0|| + g1 omega e^{|gamma| omega}) e^{(Q g2 + gamma) t}.
    std::function<double(double y0_norm, double t)> trajectory_bound;

    double constant(const std::string& name) const;
    bool has(const std::string& name) const { return constants.count(name) != 0; }
};

inline constexpr double kVerdictSlack = 1e-12;

/// certified iff contraction < 1 - slack; |contraction - 1| <= slack is a boundary case.
Verdict strict_verdict(double contraction, std::string_view condition);

/// Uniqueness for y' = Ay + g with bounded A: L M < 1, ||y||_0 <= M ||g(.,0)||_0 / (1 - L M).
Certificate certify_theorem1(const GreenKernelODE& kernel, const NonlinearitySpec& g,
                             const QuadratureSpec& quad = {}, MSource use = MSource::Mc);

/// Existence in finite dimension: g2 M < 1, ||y||_0 <= M g1 / (1 - M g2).
Certificate certify_theorem2(const GreenKernelODE& kernel, const NonlinearitySpec& g,
                             const QuadratureSpec& quad = {}, MSource use = MSource::Mc);

/// Growth and resolvent constants of a semigroup generator: ||S(t)|| <= Q e^{gamma t},
/// resolvent_norm = ||(cI - S(omega))^{-1}||.
struct GeneratorConstants {
    double q = 1.0;
    double gamma = 0.0;
    double resolvent_norm = 1.0;
};

/// U = Q (e^{gamma omega} - 1)/gamma ||R|| max{|c|, 1}, or Q omega ||R|| max{|c|, 1}
/// when |gamma| < 1e-12.
double mild_constant_U(const GeneratorConstants& gen, const PeriodicitySpec& spec);

/// Uniqueness of mild solutions: L U < 1, ||y||_0 <= U ||g(.,0)||_0 / (1 - L U).
Certificate certify_theorem3(const GeneratorConstants& gen, const PeriodicitySpec& spec,
                             const NonlinearitySpec& g);

/// Existence of mild solutions via the Poincare map:
/// Q ||R|| e^{gamma omega} (e^{Q g2 omega} - 1) < 1, with invariant ball radius Xi.
Certificate certify_theorem4(const GeneratorConstants& gen, const PeriodicitySpec& spec,
                             const NonlinearitySpec& g);

/// Xi = Q||R|| (g1 e^{|gamma| omega} omega + e^{gamma omega} Q g1 omega e^{|gamma| omega}(e^{Q g2 omega} - 1))
///      / (1 - Q||R|| e^{gamma omega}(e^{Q g2 omega} - 1))
double poincare_ball_radius(const GeneratorConstants& gen, const PeriodicitySpec& spec, double g1,
                            double g2);

} // namespace wcperiod
