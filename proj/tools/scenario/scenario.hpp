#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wcperiod/certificates.hpp"
#include "wcperiod/kernels.hpp"
#include "wcperiod/linalg.hpp"
#include "wcperiod/spectral.hpp"

namespace wcperiod::scenario {

struct Diagnostic {
    std::size_t line = 0; // 1-based, 0 when unknown
    std::string message;
};

/// Parse or validation failure; carries every problem found.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

enum class ProblemKind { Ode, Spectral };
enum class SolverMethod { Picard, Poincare, Both };

struct NonlinearityDesc {
    std::string builtin;                  // empty when components are given
    std::vector<std::string> components;  // expressions, one per dimension
    std::map<std::string, double> params;

    bool operator==(const NonlinearityDesc&) const = default;
};

struct ConstantsDesc {
    std::optional<double> lipschitz;
    std::optional<double> g1;
    std::optional<double> g2;

    bool operator==(const ConstantsDesc&) const = default;
};

struct SolverDesc {
    int grid = 257;
    double tol = 1e-10;
    int max_iter = 200;
    SolverMethod method = SolverMethod::Picard;

    bool operator==(const SolverDesc&) const = default;
};

struct OutputsDesc {
    std::string certificate;
    std::string trajectory_csv;
    std::string report;

    bool operator==(const OutputsDesc&) const = default;
};

struct Scenario {
    std::string name;
    ProblemKind kind = ProblemKind::Ode;
    ComplexMatrix matrix;             // ode
    std::string generator;            // spectral: heat_dirichlet | schrodinger_periodic
    int truncation = 0;               // spectral K
    double omega = 1.0;
    Complex c{1.0, 0.0};
    NormKind norm = NormKind::L2;
    NonlinearityDesc nonlinearity;
    ConstantsDesc constants;
    SolverDesc solver;
    OutputsDesc outputs;
    std::vector<Theorem> certificates; // empty selects every theorem whose constants are available
    MSource m_source = MSource::Mc;

    bool operator==(const Scenario& other) const;
};

/// Parses and validates a JSON scenario document. Numeric fields may be numbers or
/// constant expressions such as "pi" or "3*pi/4".
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

std::string_view to_string(SolverMethod method);
std::string_view to_string(ProblemKind kind);

/// Periodicity spec of an ODE or spectral scenario.
PeriodicitySpec periodicity(const Scenario& scenario);

/// Nonlinearity for an ODE scenario: builtin catalog entry or component expressions,
/// with scenario constants overriding the builtin ones.
NonlinearitySpec ode_nonlinearity(const Scenario& scenario);

DiagonalGenerator spectral_generator(const Scenario& scenario);
FieldNonlinearity spectral_nonlinearity(const Scenario& scenario);

/// Names accepted in "nonlinearity.builtin".
const std::vector<std::string>& builtin_names();

} // namespace wcperiod::scenario
