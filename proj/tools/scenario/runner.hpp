#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scenario/scenario.hpp"

namespace wcperiod::scenario {

enum ExitCode : int {
    kExitOk = 0,
    kExitMismatch = 1,
    kExitResonance = 2,
    kExitCertificateFailed = 3,
    kExitNonConvergence = 4,
    kExitUsage = 64,
    kExitParse = 65,
    kExitIo = 74,
};

struct RunOptions {
    bool solve = true;
    std::string out_dir; // empty: only the paths named in the scenario are written
};

struct SolveSummary {
    std::string method;
    bool converged = false;
    int iterations = 0;
    double final_update = 0.0;
    double sup_norm = 0.0;
    double boundary_residual = 0.0;
    double equation_residual = 0.0; // ODE residual or mild-equation residual
    std::vector<double> update_history;
    std::optional<double> oracle_gap; // picard vs poincare when method is both
    std::string message;
};

struct RunResult {
    int exit_code = kExitOk;
    std::vector<Certificate> certificates;
    std::vector<std::string> certificate_errors; // requested theorems that could not be evaluated
    std::optional<SolveSummary> solve;
    std::string resonance;
    std::vector<double> grid;
    std::vector<ComplexVector> values; // the trajectory written to CSV
    std::vector<std::string> written;
};

/// Exit code: 2 on resonance, else 3 if any certificate failed, else 4 if a solver
/// did not converge, else 0. Output files are written even on failure.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

std::string trajectory_csv(const std::vector<double>& grid, const std::vector<ComplexVector>& values);
std::string certificates_json(const Scenario& scenario, const RunResult& result);
std::string report_json(const Scenario& scenario, const RunResult& result);
void print_summary(std::ostream& out, const Scenario& scenario, const RunResult& result);

struct ReproduceRow {
    std::string quantity;
    double published = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;
    bool relative = true;

    double difference() const; // relative or absolute, per `relative`
    bool pass() const;
};

const std::vector<std::string>& reproduce_ids();
/// Rows for one worked example; throws std::invalid_argument for an unknown id.
std::vector<ReproduceRow> reproduce(const std::string& id);
void print_reproduce(std::ostream& out, const std::string& id, const std::vector<ReproduceRow>& rows);

struct OracleComparison {
    std::string description;
    double gap = 0.0;
    double tolerance = 0.0;
    bool pass() const { return gap <= tolerance; }
};

/// ODE: picard_solve vs poincare_solve. Spectral: the mild solution extended to
/// 1.5 omega vs fourth-order exponential time differencing from y(0).
/// Throws ResonanceError / NonConvergenceError.
OracleComparison oracle_compare(const Scenario& scenario);

} // namespace wcperiod::scenario
