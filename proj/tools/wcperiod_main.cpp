#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "scenario/runner.hpp"
#include "scenario/scenario.hpp"
#include "wcperiod/errors.hpp"

using namespace wcperiod;
using namespace wcperiod::scenario;

namespace {

struct Overrides {
    std::optional<int> grid;
    std::optional<double> tol;
    std::optional<std::string> norm;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--grid", o.grid, "time grid nodes on [0, omega]")->check(CLI::Range(9, 1 << 20));
    cmd->add_option("--tol", o.tol, "fixed-point tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--norm", o.norm, "state norm (ode problems)")->check(CLI::IsMember({"l1", "l2", "linf"}));
    cmd->add_option("--out", o.out_dir, "directory for certificate, report and CSV files")->capture_default_str();
}

// Loads the scenario and applies command-line overrides; returns an exit code on failure.
std::optional<int> prepare(const std::string& path, const Overrides& o, Scenario& s) {
    try {
        s = load_scenario(path);
    } catch (const ScenarioError& e) {
        for (const Diagnostic& d : e.diagnostics()) {
            std::cerr << path << ':' << d.line << ": " << d.message << '\n';
        }
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    if (o.grid) {
        s.solver.grid = *o.grid;
    }
    if (o.tol) {
        s.solver.tol = *o.tol;
    }
    if (o.norm) {
        const NormKind n = parse_norm_kind(*o.norm);
        if (s.kind == ProblemKind::Spectral && n != NormKind::L2) {
            std::cerr << "error: spectral problems use the L2 state norm\n";
            return kExitUsage;
        }
        s.norm = n;
    }
    return std::nullopt;
}

int run(const std::string& path, const Overrides& o, bool solve) {
    Scenario s;
    if (auto code = prepare(path, o, s)) {
        return *code;
    }
    RunOptions options;
    options.solve = solve;
    options.out_dir = o.out_dir;
    try {
        const RunResult result = run_scenario(s, options);
        print_summary(std::cout, s, result);
        return result.exit_code;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

int compare(const std::string& path, const Overrides& o) {
    Scenario s;
    if (auto code = prepare(path, o, s)) {
        return *code;
    }
    try {
        const OracleComparison cmp = oracle_compare(s);
        std::cout << cmp.description << '\n'
                  << "gap " << std::setprecision(6) << cmp.gap << "  tolerance " << cmp.tolerance << "  "
                  << (cmp.pass() ? "PASS" : "FAIL") << '\n';
        return cmp.pass() ? kExitOk : kExitMismatch;
    } catch (const ResonanceError& e) {
        std::cerr << "resonance: " << e.what() << '\n';
        return kExitResonance;
    } catch (const NonConvergenceError& e) {
        std::cerr << "nonconvergence: " << e.what() << '\n';
        return kExitNonConvergence;
    }
}

int reproduce_command(const std::string& id) {
    std::vector<ReproduceRow> rows;
    try {
        rows = reproduce(id);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "; known ids:";
        for (const std::string& known : reproduce_ids()) {
            std::cerr << ' ' << known;
        }
        std::cerr << '\n';
        return kExitUsage;
    }
    print_reproduce(std::cout, id, rows);
    for (const ReproduceRow& row : rows) {
        if (!row.pass()) {
            return kExitMismatch;
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certificates and solvers for (omega, c)-periodic solutions"};
    app.require_subcommand(1);

    Overrides overrides;
    std::string scenario_path;
    std::string example_id;

    CLI::App* certify = app.add_subcommand("certify", "evaluate the certificates of a scenario");
    certify->add_option("scenario", scenario_path, "scenario JSON file")->required();
    add_common(certify, overrides);

    CLI::App* solve = app.add_subcommand("solve", "certify and solve a scenario, writing CSV and reports");
    solve->add_option("scenario", scenario_path, "scenario JSON file")->required();
    add_common(solve, overrides);

    CLI::App* repro = app.add_subcommand("reproduce", "compare computed constants with a worked example");
    repro->add_option("id", example_id, "3.1, 4.2, 4.3, 5.4, 5.5 or 5.6")->required();

    CLI::App* oracle = app.add_subcommand("oracle-compare", "cross-check a solve against an independent method");
    oracle->add_option("scenario", scenario_path, "scenario JSON file")->required();
    add_common(oracle, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*certify) {
        return run(scenario_path, overrides, false);
    }
    if (*solve) {
        return run(scenario_path, overrides, true);
    }
    if (*repro) {
        return reproduce_command(example_id);
    }
    return compare(scenario_path, overrides);
}
