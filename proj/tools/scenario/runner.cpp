#include "scenario/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "wcperiod/catalog.hpp"
#include "wcperiod/errors.hpp"
#include "wcperiod/ode_solver.hpp"

namespace wcperiod::scenario {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json certificate_to_json(const Certificate& cert) {
    json constants = json::object();
    for (const auto& [name, value] : cert.constants) {
        constants[name] = finite_or_null(value);
    }
    json out = {{"theorem", std::string(to_string(cert.theorem))},
                {"constants", constants},
                {"verdict", {{"certified", cert.verdict.certified}, {"reason", cert.verdict.reason}}},
                {"inputs_digest", cert.inputs_digest},
                {"notes", cert.notes}};
    out["m_source"] = cert.m_source ? json(std::string(to_string(*cert.m_source))) : json(nullptr);
    return out;
}

std::vector<Theorem> requested_theorems(const Scenario& s, bool has_lipschitz, bool has_growth) {
    if (!s.certificates.empty()) {
        return s.certificates;
    }
    std::vector<Theorem> out;
    if (s.kind == ProblemKind::Ode) {
        if (has_lipschitz) {
            out.push_back(Theorem::T31);
        }
        if (has_growth) {
            out.push_back(Theorem::T41);
        }
    } else {
        if (has_lipschitz) {
            out.push_back(Theorem::T51);
        }
        if (has_growth) {
            out.push_back(Theorem::T52);
        }
    }
    return out;
}

std::string resolve_path(const std::string& path, const std::string& out_dir, const std::string& fallback) {
    if (path.empty()) {
        return out_dir.empty() ? std::string() : (fs::path(out_dir) / fallback).string();
    }
    if (out_dir.empty() || fs::path(path).is_absolute()) {
        return path;
    }
    return (fs::path(out_dir) / path).string();
}

void write_file(const std::string& path, const std::string& content, RunResult& result) {
    if (path.empty()) {
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush()) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    result.written.push_back(path);
}

std::string stem(const Scenario& s) {
    std::string out;
    for (char ch : s.name) {
        out += std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ? ch : '_';
    }
    return out.empty() ? "scenario" : out;
}

SolveSummary summarize(const SolutionTrajectory& traj, const std::string& method) {
    SolveSummary out;
    out.method = method;
    out.converged = true;
    out.iterations = traj.iterations;
    out.final_update = traj.final_update;
    out.sup_norm = traj.sup_norm();
    out.boundary_residual = traj.residuals.boundary;
    out.equation_residual = traj.residuals.ode;
    out.update_history = traj.update_history;
    return out;
}

void run_ode(const Scenario& s, const RunOptions& options, RunResult& result, bool& any_failed,
             bool& nonconverged) {
    const PeriodicitySpec spec = periodicity(s);
    const GreenKernelODE kernel(s.matrix, spec);
    const NonlinearitySpec g = ode_nonlinearity(s);

    for (Theorem t : requested_theorems(s, g.lipschitz.has_value(), g.g1 && g.g2)) {
        try {
            Certificate cert = t == Theorem::T31 ? certify_theorem1(kernel, g, {}, s.m_source)
                                                 : certify_theorem2(kernel, g, {}, s.m_source);
            any_failed = any_failed || !cert.verdict.certified;
            result.certificates.push_back(std::move(cert));
        } catch (const MissingConstantError& e) {
            any_failed = true;
            result.certificate_errors.push_back(std::string(to_string(t)) + ": " + e.what());
        }
    }
    if (!options.solve) {
        return;
    }

    std::optional<SolutionTrajectory> picard;
    std::optional<SolutionTrajectory> poincare;
    SolveSummary summary;
    summary.method = std::string(to_string(s.solver.method));
    try {
        if (s.solver.method != SolverMethod::Poincare) {
            PicardOptions po;
            po.grid_size = s.solver.grid;
            po.tol = s.solver.tol;
            po.max_iter = s.solver.max_iter;
            picard = picard_solve(kernel, g, po);
        }
        if (s.solver.method != SolverMethod::Picard) {
            PoincareOptions po;
            po.grid_size = s.solver.grid;
            po.tol = s.solver.tol;
            po.max_iter = s.solver.max_iter;
            poincare = poincare_solve(kernel, g, po);
        }
    } catch (const NonConvergenceError& e) {
        nonconverged = true;
        summary.converged = false;
        summary.iterations = e.iterations();
        summary.final_update = e.last_update();
        summary.message = e.what();
        result.solve = summary;
        return;
    }
    const SolutionTrajectory& primary = picard ? *picard : *poincare;
    summary = summarize(primary, std::string(to_string(s.solver.method)));
    if (picard && poincare) {
        summary.oracle_gap = sup_distance(*picard, *poincare);
    }
    result.solve = summary;
    result.grid = primary.grid;
    result.values = primary.values;
}

void run_spectral(const Scenario& s, const RunOptions& options, RunResult& result, bool& any_failed,
                  bool& nonconverged) {
    const PeriodicitySpec spec = periodicity(s);
    const DiagonalGenerator gen = spectral_generator(s);
    const FieldNonlinearity field = spectral_nonlinearity(s);
    const GeneratorConstants constants = generator_constants(gen, spec);
    const NonlinearitySpec g = coefficient_nonlinearity(gen, field);

    for (Theorem t : requested_theorems(s, g.lipschitz.has_value(), g.g1 && g.g2)) {
        try {
            Certificate cert = t == Theorem::T51 ? certify_theorem3(constants, spec, g)
                                                 : certify_theorem4(constants, spec, g);
            any_failed = any_failed || !cert.verdict.certified;
            result.certificates.push_back(std::move(cert));
        } catch (const MissingConstantError& e) {
            any_failed = true;
            result.certificate_errors.push_back(std::string(to_string(t)) + ": " + e.what());
        }
    }
    if (!options.solve) {
        return;
    }

    MildOptions mo;
    mo.time_grid = s.solver.grid;
    mo.tol = s.solver.tol;
    mo.max_iter = s.solver.max_iter;
    SolveSummary summary;
    summary.method = "picard";
    try {
        const MildTrajectory traj = mild_picard_solve(gen, field, spec, mo);
        summary.converged = true;
        summary.iterations = traj.iterations;
        summary.final_update = traj.final_update;
        summary.sup_norm = traj.sup_norm();
        summary.boundary_residual = traj.residuals.boundary;
        summary.equation_residual = traj.residuals.mild;
        summary.update_history = traj.update_history;
        result.grid = traj.grid;
        for (const FieldState& state : traj.states) {
            result.values.push_back(state.coefficients);
        }
    } catch (const NonConvergenceError& e) {
        nonconverged = true;
        summary.converged = false;
        summary.iterations = e.iterations();
        summary.final_update = e.last_update();
        summary.message = e.what();
    }
    result.solve = summary;
}

} // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
    RunResult result;
    bool any_failed = false;
    bool nonconverged = false;
    try {
        if (s.kind == ProblemKind::Ode) {
            run_ode(s, options, result, any_failed, nonconverged);
        } else {
            run_spectral(s, options, result, any_failed, nonconverged);
        }
    } catch (const ResonanceError& e) {
        result.resonance = e.what();
    }

    if (!result.resonance.empty()) {
        result.exit_code = kExitResonance;
    } else if (any_failed) {
        result.exit_code = kExitCertificateFailed;
    } else if (nonconverged) {
        result.exit_code = kExitNonConvergence;
    } else {
        result.exit_code = kExitOk;
    }

    const std::string name = stem(s);
    write_file(resolve_path(s.outputs.certificate, options.out_dir, name + ".certificate.json"),
               certificates_json(s, result), result);
    if (options.solve) {
        if (!result.grid.empty()) {
            write_file(resolve_path(s.outputs.trajectory_csv, options.out_dir, name + ".csv"),
                       trajectory_csv(result.grid, result.values), result);
        }
        write_file(resolve_path(s.outputs.report, options.out_dir, name + ".report.json"), report_json(s, result),
                   result);
    }
    return result;
}

std::string trajectory_csv(const std::vector<double>& grid, const std::vector<ComplexVector>& values) {
    const Eigen::Index dim = values.empty() ? 0 : values.front().size();
    std::string out = "t";
    for (Eigen::Index i = 1; i <= dim; ++i) {
        out += ",re_y" + std::to_string(i) + ",im_y" + std::to_string(i);
    }
    out += '\n';
    for (std::size_t row = 0; row < grid.size(); ++row) {
        out += format17(grid[row]);
        for (Eigen::Index i = 0; i < dim; ++i) {
            out += ',' + format17(values[row](i).real()) + ',' + format17(values[row](i).imag());
        }
        out += '\n';
    }
    return out;
}

std::string certificates_json(const Scenario& s, const RunResult& result) {
    json certs = json::array();
    for (const Certificate& cert : result.certificates) {
        certs.push_back(certificate_to_json(cert));
    }
    json doc = {{"scenario", s.name}, {"certificates", certs}, {"errors", result.certificate_errors}};
    if (!result.resonance.empty()) {
        doc["resonance"] = result.resonance;
    }
    return doc.dump(2) + "\n";
}

std::string report_json(const Scenario& s, const RunResult& result) {
    json doc = json::parse(certificates_json(s, result));
    doc["kind"] = std::string(to_string(s.kind));
    doc["exit_code"] = result.exit_code;
    if (result.solve) {
        const SolveSummary& sv = *result.solve;
        json solver = {{"method", sv.method},
                       {"converged", sv.converged},
                       {"iterations", sv.iterations},
                       {"final_update", finite_or_null(sv.final_update)},
                       {"update_history", sv.update_history}};
        if (sv.converged) {
            solver["sup_norm"] = finite_or_null(sv.sup_norm);
            solver["residuals"] = {{"boundary", finite_or_null(sv.boundary_residual)},
                                   {s.kind == ProblemKind::Ode ? "ode" : "mild",
                                    finite_or_null(sv.equation_residual)}};
        }
        if (sv.oracle_gap) {
            solver["oracle_gap"] = finite_or_null(*sv.oracle_gap);
        }
        if (!sv.message.empty()) {
            solver["message"] = sv.message;
        }
        doc["solver"] = solver;
    }
    return doc.dump(2) + "\n";
}

void print_summary(std::ostream& out, const Scenario& s, const RunResult& result) {
    out << "scenario " << (s.name.empty() ? "(unnamed)" : s.name) << '\n';
    if (!result.resonance.empty()) {
        out << result.resonance << '\n';
    }
    for (const Certificate& cert : result.certificates) {
        out << to_string(cert.theorem) << ' ' << (cert.verdict.certified ? "certified" : "not certified");
        out << "  contraction=" << std::setprecision(9) << cert.constant("contraction");
        if (cert.has("bound")) {
            out << "  bound=" << cert.constant("bound");
        }
        if (!cert.verdict.reason.empty()) {
            out << "  (" << cert.verdict.reason << ')';
        }
        out << '\n';
    }
    for (const std::string& e : result.certificate_errors) {
        out << "certificate error: " << e << '\n';
    }
    if (result.solve) {
        const SolveSummary& sv = *result.solve;
        if (sv.converged) {
            out << "solve " << sv.method << ": " << sv.iterations << " iterations, sup norm " << std::setprecision(12)
                << sv.sup_norm << ", boundary residual " << std::setprecision(3) << sv.boundary_residual
                << ", equation residual " << sv.equation_residual;
            if (sv.oracle_gap) {
                out << ", oracle gap " << *sv.oracle_gap;
            }
            out << '\n';
        } else {
            out << "solve " << sv.method << ": " << sv.message << '\n';
        }
    }
    for (const std::string& path : result.written) {
        out << "wrote " << path << '\n';
    }
    out << "exit " << result.exit_code << '\n';
}

double ReproduceRow::difference() const {
    const double abs_diff = std::abs(computed - published);
    return relative ? abs_diff / std::abs(published) : abs_diff;
}

bool ReproduceRow::pass() const {
    return std::isfinite(computed) && difference() <= tolerance;
}

const std::vector<std::string>& reproduce_ids() {
    static const std::vector<std::string> ids = {"3.1", "4.2", "4.3", "5.4", "5.5", "5.6"};
    return ids;
}

namespace {

const char* norm_label(NormKind n) {
    switch (n) {
    case NormKind::L1: return "L1";
    case NormKind::LInf: return "LINF";
    case NormKind::L2: return "L2";
    }
    return "L2";
}

GeneratorConstants heat_constants() {
    const DiagonalGenerator gen = DiagonalGenerator::heat_dirichlet(64);
    PeriodicitySpec spec{std::numbers::pi, Complex(-1.0, 0.0), NormKind::L2};
    return generator_constants(gen, spec);
}

NonlinearitySpec heat_spec(double a, double eta) {
    const DiagonalGenerator gen = DiagonalGenerator::heat_dirichlet(16);
    return coefficient_nonlinearity(gen, catalog::heat_cubic(a, eta));
}

} // namespace

std::vector<ReproduceRow> reproduce(const std::string& id) {
    std::vector<ReproduceRow> rows;
    const ComplexMatrix a = catalog::planar_matrix();
    const NormKind norms[] = {NormKind::L1, NormKind::LInf, NormKind::L2};

    if (id == "3.1") {
        std::vector<Complex> eig = spectrum(a);
        std::sort(eig.begin(), eig.end(), [](Complex x, Complex y) { return x.real() < y.real(); });
        rows.push_back({"eigenvalue 1", -4.0, eig.at(0).real(), 1e-10, false});
        rows.push_back({"eigenvalue 2", -2.0, eig.at(1).real(), 1e-10, false});
        const double published_m[] = {1.73883, 1.4907, 1.40635};
        const double published_threshold[] = {0.287549, 0.335414, 0.502795};
        for (int i = 0; i < 3; ++i) {
            const GreenKernelODE kernel(a, catalog::antiperiodic_pi(norms[i]));
            const Certificate cert = certify_theorem1(kernel, catalog::planar_trig(1.0, norms[i]), {}, MSource::Mc);
            rows.push_back({std::string("M (Mc) ") + norm_label(norms[i]), published_m[i], cert.constant("M"), 1e-3, true});
            rows.push_back({std::string("a threshold LM<1 ") + norm_label(norms[i]), published_threshold[i],
                            1.0 / cert.constant("contraction"), 1e-3, true});
        }
    } else if (id == "4.2") {
        const GreenKernelODE kernel(a, catalog::antiperiodic_pi(NormKind::L1));
        NonlinearitySpec g = catalog::planar_trig(1.0, NormKind::L1);
        g.g1 = 2.0;
        g.g2 = 0.0;
        const Certificate cert = certify_theorem2(kernel, g, {}, MSource::Mc);
        rows.push_back({"bound / |a| L1", 3.47767, cert.constant("bound"), 1e-3, true});
    } else if (id == "4.3") {
        const double published_threshold[] = {0.406656, 0.335414, 0.35553};
        for (int i = 0; i < 3; ++i) {
            const GreenKernelODE kernel(a, catalog::antiperiodic_pi(norms[i]));
            const Certificate cert = certify_theorem2(kernel, catalog::planar_abs(1.0, norms[i]), {}, MSource::Mc);
            rows.push_back({std::string("a threshold g2 M<1 ") + norm_label(norms[i]), published_threshold[i],
                            1.0 / cert.constant("contraction"), 1e-3, true});
        }
    } else if (id == "5.4") {
        const GeneratorConstants gen = heat_constants();
        const PeriodicitySpec spec{std::numbers::pi, Complex(-1.0, 0.0), NormKind::L2};
        const Certificate cert = certify_theorem3(gen, spec, heat_spec(1.0, 0.5));
        rows.push_back({"U", 1.0 - std::exp(-std::numbers::pi), cert.constant("U"), 1e-9, true});
        rows.push_back({"L U (eta = 0.5)", 0.538192, cert.constant("contraction"), 1e-5, false});
        rows.push_back({"resolvent norm", 1.0, cert.constant("resolvent_norm"), 1e-9, false});
        rows.push_back({"bound / |a|", 3.67222, cert.constant("bound"), 1e-4, true});
    } else if (id == "5.5") {
        const DiagonalGenerator dg = DiagonalGenerator::schrodinger_periodic(16);
        const PeriodicitySpec spec = catalog::schrodinger_spec();
        const GeneratorConstants gen = generator_constants(dg, spec);
        const Certificate cert =
            certify_theorem3(gen, spec, coefficient_nonlinearity(dg, catalog::schrodinger_cubic(Complex(1.0, 0.0))));
        rows.push_back({"resolvent norm", 1.30656, cert.constant("resolvent_norm"), 1e-5, false});
        rows.push_back({"U", 4.10469, cert.constant("U"), 1e-5, false});
        rows.push_back({"L U", 0.923555, cert.constant("contraction"), 1e-5, false});
        rows.push_back({"bound / |a|", 207.421, cert.constant("bound"), 1e-3, true});
    } else if (id == "5.6") {
        const GeneratorConstants gen = heat_constants();
        const PeriodicitySpec spec{std::numbers::pi, Complex(-1.0, 0.0), NormKind::L2};
        const Certificate t51 = certify_theorem3(gen, spec, heat_spec(1.0, 1.0));
        rows.push_back({"eta threshold (mild uniqueness)", 0.929036, 1.0 / t51.constant("contraction"), 1e-4, true});
        const auto contraction = [&](double eta) {
            return certify_theorem4(gen, spec, heat_spec(1.0, eta)).constant("contraction");
        };
        double lo = 0.0;
        double hi = 4.0;
        for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
            const double mid = 0.5 * (lo + hi);
            (contraction(mid) < 1.0 ? lo : hi) = mid;
        }
        rows.push_back({"eta threshold (Poincare map)", 1.01347, 0.5 * (lo + hi), 1e-4, true});
    } else {
        throw std::invalid_argument("unknown example id '" + id + "'");
    }
    return rows;
}

void print_reproduce(std::ostream& out, const std::string& id, const std::vector<ReproduceRow>& rows) {
    out << "example " << id << '\n';
    out << std::left << std::setw(36) << "quantity" << std::setw(16) << "published" << std::setw(20) << "computed"
        << std::setw(12) << "diff" << std::setw(10) << "tol" << "status\n";
    for (const ReproduceRow& row : rows) {
        out << std::left << std::setw(36) << row.quantity << std::setw(16) << std::setprecision(9) << row.published
            << std::setw(20) << std::setprecision(12) << row.computed << std::setw(12) << std::setprecision(3)
            << row.difference() << std::setw(10) << row.tolerance << (row.pass() ? "PASS" : "FAIL")
            << (row.relative ? "" : " (abs)") << '\n';
    }
}

OracleComparison oracle_compare(const Scenario& s) {
    const PeriodicitySpec spec = periodicity(s);
    OracleComparison out;
    if (s.kind == ProblemKind::Ode) {
        const GreenKernelODE kernel(s.matrix, spec);
        const NonlinearitySpec g = ode_nonlinearity(s);
        PicardOptions pic;
        pic.grid_size = s.solver.grid;
        pic.tol = s.solver.tol;
        pic.max_iter = s.solver.max_iter;
        PoincareOptions poi;
        poi.grid_size = s.solver.grid;
        poi.tol = s.solver.tol;
        poi.max_iter = s.solver.max_iter;
        const SolutionTrajectory a = picard_solve(kernel, g, pic);
        const SolutionTrajectory b = poincare_solve(kernel, g, poi);
        out.description = "picard vs poincare sup-norm gap";
        out.gap = sup_distance(a, b);
        out.tolerance = 1e-6;
        return out;
    }
    const DiagonalGenerator gen = spectral_generator(s);
    const FieldNonlinearity field = spectral_nonlinearity(s);
    MildOptions mo;
    mo.time_grid = s.solver.grid;
    mo.tol = s.solver.tol;
    mo.max_iter = s.solver.max_iter;
    const MildTrajectory traj = mild_picard_solve(gen, field, spec, mo);
    const NonlinearitySpec g = coefficient_nonlinearity(gen, field);
    constexpr int kChunks = 6;
    constexpr int kStepsPerChunk = 2500;
    const double dt = 1.5 * spec.omega / kChunks;
    FieldState y = traj.states.front();
    double gap = 0.0;
    for (int j = 0; j < kChunks; ++j) {
        y = etdrk4_propagate(gen, g, y, j * dt, (j + 1) * dt, kStepsPerChunk);
        const FieldState ext = mild_extend(traj, (j + 1) * dt);
        gap = std::max(gap, (y.coefficients - ext.coefficients).norm());
    }
    out.description = "mild solution vs exponential propagation from y(0) on [0, 1.5 omega]";
    out.gap = gap;
    out.tolerance = 1e-5;
    return out;
}

} // namespace wcperiod::scenario
