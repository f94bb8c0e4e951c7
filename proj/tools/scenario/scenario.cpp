#include "scenario/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"

#include "scenario/expression.hpp"
#include "wcperiod/catalog.hpp"
#include "wcperiod/errors.hpp"

namespace wcperiod::scenario {

using nlohmann::json;

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    std::ostringstream out;
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
        if (i > 0) {
            out << "; ";
        }
        if (diagnostics[i].line > 0) {
            out << "line " << diagnostics[i].line << ": ";
        }
        out << diagnostics[i].message;
    }
    return out.str();
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the last key of `path`, found by scanning for each quoted key in turn.
std::size_t locate(std::string_view text, const std::vector<std::string>& path) {
    std::size_t pos = 0;
    for (const std::string& key : path) {
        const std::string quoted = "\"" + key + "\"";
        std::size_t found = text.find(quoted, pos);
        while (found != std::string_view::npos) {
            std::size_t after = found + quoted.size();
            while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) {
                ++after;
            }
            if (after < text.size() && text[after] == ':') {
                break;
            }
            found = text.find(quoted, found + 1);
        }
        if (found == std::string_view::npos) {
            return pos == 0 ? 0 : line_of_offset(text, pos);
        }
        pos = found;
    }
    return line_of_offset(text, pos);
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    void error(const std::vector<std::string>& path, const std::string& message) {
        diagnostics_.push_back({locate(text_, path), message});
    }

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

    std::optional<double> number(const json& node, const std::vector<std::string>& path,
                                 const std::map<std::string, double>& params = {}) {
        if (node.is_number()) {
            return node.get<double>();
        }
        if (node.is_string()) {
            try {
                return evaluate_constant(node.get<std::string>(), params);
            } catch (const ExpressionParseError& e) {
                error(path, "'" + dotted(path) + "': " + e.what() + " (column " + std::to_string(e.column()) + ")");
                return std::nullopt;
            } catch (const std::exception& e) {
                error(path, "'" + dotted(path) + "': " + e.what());
                return std::nullopt;
            }
        }
        error(path, "'" + dotted(path) + "' must be a number or a constant expression");
        return std::nullopt;
    }

    std::optional<Complex> complex(const json& node, const std::vector<std::string>& path) {
        if (node.is_array() && node.size() == 2) {
            const auto re = number(node[0], path);
            const auto im = number(node[1], path);
            if (re && im) {
                return Complex(*re, *im);
            }
            return std::nullopt;
        }
        if (node.is_number() || node.is_string()) {
            if (const auto re = number(node, path)) {
                return Complex(*re, 0.0);
            }
            return std::nullopt;
        }
        error(path, "'" + dotted(path) + "' must be a [re, im] pair");
        return std::nullopt;
    }

    std::optional<int> integer(const json& node, const std::vector<std::string>& path) {
        if (node.is_number_integer()) {
            return node.get<int>();
        }
        if (node.is_number_float()) {
            const double v = node.get<double>();
            if (v == std::round(v) && std::abs(v) < 1e9) {
                return static_cast<int>(v);
            }
        }
        error(path, "'" + dotted(path) + "' must be an integer");
        return std::nullopt;
    }

    std::optional<std::string> string(const json& node, const std::vector<std::string>& path) {
        if (node.is_string()) {
            return node.get<std::string>();
        }
        error(path, "'" + dotted(path) + "' must be a string");
        return std::nullopt;
    }

    void allow_keys(const json& object, const std::vector<std::string>& path, const std::set<std::string>& keys) {
        for (const auto& [key, value] : object.items()) {
            if (keys.count(key) == 0) {
                std::vector<std::string> p = path;
                p.push_back(key);
                error(p, "unknown field '" + dotted(p) + "'");
            }
        }
    }

    static std::string dotted(const std::vector<std::string>& path) {
        std::string out;
        for (const std::string& p : path) {
            if (!out.empty()) {
                out += '.';
            }
            out += p;
        }
        return out;
    }

private:
    std::string_view text_;
    std::vector<Diagnostic> diagnostics_;
};

struct BuiltinInfo {
    ProblemKind kind;
    std::vector<std::string> required;
    std::vector<std::string> optional;
};

const std::map<std::string, BuiltinInfo>& builtins() {
    static const std::map<std::string, BuiltinInfo> table = {
        {"example_3_1", {ProblemKind::Ode, {"a"}, {}}},
        {"example_4_3", {ProblemKind::Ode, {"a"}, {}}},
        {"heat_cubic", {ProblemKind::Spectral, {"a", "eta"}, {}}},
        {"schrodinger_cubic", {ProblemKind::Spectral, {"a"}, {"a_im"}}},
    };
    return table;
}

json complex_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

std::optional<double> param(const NonlinearityDesc& desc, const std::string& name) {
    if (auto it = desc.params.find(name); it != desc.params.end()) {
        return it->second;
    }
    return std::nullopt;
}

} // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

bool Scenario::operator==(const Scenario& other) const {
    const bool same_matrix = matrix.rows() == other.matrix.rows() && matrix.cols() == other.matrix.cols() &&
                             (matrix.size() == 0 || matrix == other.matrix);
    return name == other.name && kind == other.kind && same_matrix && generator == other.generator &&
           truncation == other.truncation && omega == other.omega && c == other.c && norm == other.norm &&
           nonlinearity == other.nonlinearity && constants == other.constants && solver == other.solver &&
           outputs == other.outputs && certificates == other.certificates && m_source == other.m_source;
}

std::string_view to_string(SolverMethod method) {
    switch (method) {
    case SolverMethod::Picard: return "picard";
    case SolverMethod::Poincare: return "poincare";
    case SolverMethod::Both: return "both";
    }
    return "picard";
}

std::string_view to_string(ProblemKind kind) {
    return kind == ProblemKind::Ode ? "ode" : "spectral";
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, info] : builtins()) {
            out.push_back(name);
        }
        return out;
    }();
    return names;
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t line = e.byte > 0 ? line_of_offset(text, e.byte - 1) : 0;
        throw ScenarioError({{line, std::string("malformed JSON: ") + e.what()}});
    }
    Reader r(text);
    if (!doc.is_object()) {
        throw ScenarioError({{1, "scenario must be a JSON object"}});
    }
    r.allow_keys(doc, {}, {"name", "problem", "omega", "c", "norm", "nonlinearity", "constants", "solver",
                           "outputs", "certificates", "m_source"});

    Scenario s;
    if (doc.contains("name")) {
        if (auto v = r.string(doc["name"], {"name"})) {
            s.name = *v;
        }
    }

    // problem
    if (!doc.contains("problem") || !doc["problem"].is_object()) {
        r.error({"problem"}, "'problem' object is required");
    } else {
        const json& p = doc["problem"];
        const std::string kind = p.contains("kind") && p["kind"].is_string() ? p["kind"].get<std::string>() : "";
        if (kind == "ode") {
            s.kind = ProblemKind::Ode;
            r.allow_keys(p, {"problem"}, {"kind", "matrix"});
            if (!p.contains("matrix") || !p["matrix"].is_array() || p["matrix"].empty()) {
                r.error({"problem", "matrix"}, "'problem.matrix' must be a non-empty array of rows");
            } else {
                const json& rows = p["matrix"];
                const auto n = static_cast<Eigen::Index>(rows.size());
                s.matrix = ComplexMatrix::Zero(n, n);
                bool square = true;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const json& row = rows[static_cast<std::size_t>(i)];
                    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                        square = false;
                        continue;
                    }
                    for (Eigen::Index j = 0; j < n; ++j) {
                        if (auto z = r.complex(row[static_cast<std::size_t>(j)], {"problem", "matrix"})) {
                            s.matrix(i, j) = *z;
                        }
                    }
                }
                if (!square) {
                    r.error({"problem", "matrix"}, "'problem.matrix' must be square");
                } else if (!s.matrix.allFinite()) {
                    r.error({"problem", "matrix"}, "'problem.matrix' entries must be finite");
                }
            }
        } else if (kind == "spectral") {
            s.kind = ProblemKind::Spectral;
            r.allow_keys(p, {"problem"}, {"kind", "generator", "K"});
            if (p.contains("generator")) {
                if (auto g = r.string(p["generator"], {"problem", "generator"})) {
                    s.generator = *g;
                    if (s.generator != "heat_dirichlet" && s.generator != "schrodinger_periodic") {
                        r.error({"problem", "generator"},
                                "unknown generator '" + s.generator + "' (heat_dirichlet, schrodinger_periodic)");
                    }
                }
            } else {
                r.error({"problem"}, "'problem.generator' is required for spectral problems");
            }
            if (p.contains("K")) {
                if (auto k = r.integer(p["K"], {"problem", "K"})) {
                    s.truncation = *k;
                    if (*k < 1) {
                        r.error({"problem", "K"}, "'problem.K' must be at least 1");
                    }
                }
            } else {
                r.error({"problem"}, "'problem.K' is required for spectral problems");
            }
        } else {
            r.error({"problem", "kind"}, "'problem.kind' must be \"ode\" or \"spectral\"");
        }
    }

    if (!doc.contains("omega")) {
        r.error({"omega"}, "'omega' is required");
    } else if (auto w = r.number(doc["omega"], {"omega"})) {
        s.omega = *w;
        if (!std::isfinite(s.omega) || !(s.omega > 0.0)) {
            r.error({"omega"}, "'omega' must be positive and finite");
        }
    }
    if (!doc.contains("c")) {
        r.error({"c"}, "'c' is required");
    } else if (auto c = r.complex(doc["c"], {"c"})) {
        s.c = *c;
        if (!std::isfinite(s.c.real()) || !std::isfinite(s.c.imag()) || std::abs(s.c) == 0.0) {
            r.error({"c"}, "'c' must be finite and nonzero");
        }
    }
    if (doc.contains("norm")) {
        if (auto n = r.string(doc["norm"], {"norm"})) {
            try {
                s.norm = parse_norm_kind(*n);
            } catch (const std::exception&) {
                r.error({"norm"}, "'norm' must be l1, l2 or linf");
            }
        }
    }
    if (s.kind == ProblemKind::Spectral && s.norm != NormKind::L2) {
        r.error({"norm"}, "spectral problems use the L2 state norm");
    }

    // nonlinearity
    if (!doc.contains("nonlinearity") || !doc["nonlinearity"].is_object()) {
        r.error({"nonlinearity"}, "'nonlinearity' object is required");
    } else {
        const json& nl = doc["nonlinearity"];
        r.allow_keys(nl, {"nonlinearity"}, {"builtin", "components", "params"});
        if (nl.contains("params")) {
            if (!nl["params"].is_object()) {
                r.error({"nonlinearity", "params"}, "'nonlinearity.params' must be an object");
            } else {
                for (const auto& [key, value] : nl["params"].items()) {
                    if (auto v = r.number(value, {"nonlinearity", "params", key})) {
                        s.nonlinearity.params[key] = *v;
                    }
                }
            }
        }
        const bool has_builtin = nl.contains("builtin");
        const bool has_components = nl.contains("components");
        if (has_builtin == has_components) {
            r.error({"nonlinearity"}, "'nonlinearity' needs exactly one of 'builtin' or 'components'");
        } else if (has_builtin) {
            if (auto b = r.string(nl["builtin"], {"nonlinearity", "builtin"})) {
                s.nonlinearity.builtin = *b;
                const auto it = builtins().find(*b);
                if (it == builtins().end()) {
                    r.error({"nonlinearity", "builtin"}, "unknown builtin '" + *b + "'");
                } else {
                    if (it->second.kind != s.kind) {
                        r.error({"nonlinearity", "builtin"},
                                "builtin '" + *b + "' is for " + std::string(to_string(it->second.kind)) + " problems");
                    }
                    for (const std::string& name : it->second.required) {
                        if (s.nonlinearity.params.count(name) == 0) {
                            r.error({"nonlinearity"}, "builtin '" + *b + "' needs parameter '" + name + "'");
                        }
                    }
                    for (const auto& [name, value] : s.nonlinearity.params) {
                        const auto& req = it->second.required;
                        const auto& opt = it->second.optional;
                        if (std::find(req.begin(), req.end(), name) == req.end() &&
                            std::find(opt.begin(), opt.end(), name) == opt.end()) {
                            r.error({"nonlinearity", "params", name},
                                    "builtin '" + *b + "' has no parameter '" + name + "'");
                        }
                    }
                    if (*b == "heat_cubic" && s.generator != "heat_dirichlet") {
                        r.error({"nonlinearity", "builtin"}, "heat_cubic needs the heat_dirichlet generator");
                    }
                    if (*b == "schrodinger_cubic" && s.generator != "schrodinger_periodic") {
                        r.error({"nonlinearity", "builtin"},
                                "schrodinger_cubic needs the schrodinger_periodic generator");
                    }
                }
            }
        } else {
            const json& comps = nl["components"];
            if (s.kind != ProblemKind::Ode) {
                r.error({"nonlinearity", "components"}, "expression components are only supported for ode problems");
            } else if (!comps.is_array()) {
                r.error({"nonlinearity", "components"}, "'nonlinearity.components' must be an array of strings");
            } else {
                if (static_cast<Eigen::Index>(comps.size()) != s.matrix.rows()) {
                    r.error({"nonlinearity", "components"},
                            "expression arity " + std::to_string(comps.size()) + " does not match dimension " +
                                std::to_string(s.matrix.rows()));
                }
                ExpressionContext context;
                context.dimension = static_cast<int>(s.matrix.rows());
                context.params = s.nonlinearity.params;
                for (std::size_t i = 0; i < comps.size(); ++i) {
                    auto e = r.string(comps[i], {"nonlinearity", "components"});
                    if (!e) {
                        continue;
                    }
                    s.nonlinearity.components.push_back(*e);
                    try {
                        Expression::parse(*e, context);
                    } catch (const ExpressionParseError& err) {
                        r.error({"nonlinearity", "components"},
                                "component " + std::to_string(i + 1) + ", column " + std::to_string(err.column()) +
                                    ": " + err.what());
                    }
                }
            }
        }
    }

    if (doc.contains("constants")) {
        const json& cs = doc["constants"];
        if (!cs.is_object()) {
            r.error({"constants"}, "'constants' must be an object");
        } else {
            r.allow_keys(cs, {"constants"}, {"L", "g1", "g2"});
            const auto read = [&](const char* key, std::optional<double>& slot) {
                if (cs.contains(key)) {
                    if (auto v = r.number(cs[key], {"constants", key}, s.nonlinearity.params)) {
                        slot = *v;
                        if (!std::isfinite(*v) || *v < 0.0) {
                            r.error({"constants", key}, std::string("'constants.") + key + "' must be nonnegative");
                        }
                    }
                }
            };
            read("L", s.constants.lipschitz);
            read("g1", s.constants.g1);
            read("g2", s.constants.g2);
        }
    }

    if (doc.contains("solver")) {
        const json& sv = doc["solver"];
        if (!sv.is_object()) {
            r.error({"solver"}, "'solver' must be an object");
        } else {
            r.allow_keys(sv, {"solver"}, {"grid", "tol", "max_iter", "method"});
            if (sv.contains("grid")) {
                if (auto v = r.integer(sv["grid"], {"solver", "grid"})) {
                    s.solver.grid = *v;
                    if (*v < 9) {
                        r.error({"solver", "grid"}, "'solver.grid' must be at least 9");
                    }
                }
            }
            if (sv.contains("tol")) {
                if (auto v = r.number(sv["tol"], {"solver", "tol"})) {
                    s.solver.tol = *v;
                    if (!(*v > 0.0)) {
                        r.error({"solver", "tol"}, "'solver.tol' must be positive");
                    }
                }
            }
            if (sv.contains("max_iter")) {
                if (auto v = r.integer(sv["max_iter"], {"solver", "max_iter"})) {
                    s.solver.max_iter = *v;
                    if (*v < 1) {
                        r.error({"solver", "max_iter"}, "'solver.max_iter' must be at least 1");
                    }
                }
            }
            if (sv.contains("method")) {
                if (auto v = r.string(sv["method"], {"solver", "method"})) {
                    if (*v == "picard") {
                        s.solver.method = SolverMethod::Picard;
                    } else if (*v == "poincare") {
                        s.solver.method = SolverMethod::Poincare;
                    } else if (*v == "both") {
                        s.solver.method = SolverMethod::Both;
                    } else {
                        r.error({"solver", "method"}, "'solver.method' must be picard, poincare or both");
                    }
                    if (s.kind == ProblemKind::Spectral && s.solver.method != SolverMethod::Picard) {
                        r.error({"solver", "method"}, "spectral problems support only the picard method");
                    }
                }
            }
        }
    }

    if (doc.contains("outputs")) {
        const json& out = doc["outputs"];
        if (!out.is_object()) {
            r.error({"outputs"}, "'outputs' must be an object");
        } else {
            r.allow_keys(out, {"outputs"}, {"certificate", "trajectory_csv", "report"});
            if (out.contains("certificate")) {
                s.outputs.certificate = r.string(out["certificate"], {"outputs", "certificate"}).value_or("");
            }
            if (out.contains("trajectory_csv")) {
                s.outputs.trajectory_csv = r.string(out["trajectory_csv"], {"outputs", "trajectory_csv"}).value_or("");
            }
            if (out.contains("report")) {
                s.outputs.report = r.string(out["report"], {"outputs", "report"}).value_or("");
            }
        }
    }

    if (doc.contains("certificates")) {
        const json& certs = doc["certificates"];
        if (!certs.is_array()) {
            r.error({"certificates"}, "'certificates' must be an array of theorem tags");
        } else {
            for (const json& tag : certs) {
                const std::string name = tag.is_string() ? tag.get<std::string>() : "";
                std::optional<Theorem> theorem;
                for (Theorem t : {Theorem::T31, Theorem::T41, Theorem::T51, Theorem::T52}) {
                    if (name == to_string(t)) {
                        theorem = t;
                    }
                }
                if (!theorem) {
                    r.error({"certificates"}, "unknown theorem tag '" + name + "' (T31, T41, T51, T52)");
                    continue;
                }
                const bool ode_theorem = *theorem == Theorem::T31 || *theorem == Theorem::T41;
                if (ode_theorem != (s.kind == ProblemKind::Ode)) {
                    r.error({"certificates"}, "theorem " + name + " does not apply to " +
                                                  std::string(to_string(s.kind)) + " problems");
                    continue;
                }
                s.certificates.push_back(*theorem);
            }
        }
    }

    if (doc.contains("m_source")) {
        if (auto v = r.string(doc["m_source"], {"m_source"})) {
            try {
                s.m_source = parse_m_source(*v);
            } catch (const std::exception&) {
                r.error({"m_source"}, "'m_source' must be exactM, Mb or Mc");
            }
        }
    }

    if (!r.diagnostics().empty()) {
        throw ScenarioError(r.diagnostics());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& s) {
    json doc = json::object();
    if (!s.name.empty()) {
        doc["name"] = s.name;
    }
    json problem = json::object();
    problem["kind"] = std::string(to_string(s.kind));
    if (s.kind == ProblemKind::Ode) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < s.matrix.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < s.matrix.cols(); ++j) {
                row.push_back(complex_json(s.matrix(i, j)));
            }
            rows.push_back(row);
        }
        problem["matrix"] = rows;
    } else {
        problem["generator"] = s.generator;
        problem["K"] = s.truncation;
    }
    doc["problem"] = problem;
    doc["omega"] = s.omega;
    doc["c"] = complex_json(s.c);
    doc["norm"] = std::string(to_string(s.norm));

    json nl = json::object();
    if (!s.nonlinearity.builtin.empty()) {
        nl["builtin"] = s.nonlinearity.builtin;
    } else {
        nl["components"] = s.nonlinearity.components;
    }
    if (!s.nonlinearity.params.empty()) {
        json params = json::object();
        for (const auto& [key, value] : s.nonlinearity.params) {
            params[key] = value;
        }
        nl["params"] = params;
    }
    doc["nonlinearity"] = nl;

    json constants = json::object();
    if (s.constants.lipschitz) {
        constants["L"] = *s.constants.lipschitz;
    }
    if (s.constants.g1) {
        constants["g1"] = *s.constants.g1;
    }
    if (s.constants.g2) {
        constants["g2"] = *s.constants.g2;
    }
    if (!constants.empty()) {
        doc["constants"] = constants;
    }
    doc["solver"] = {{"grid", s.solver.grid},
                     {"tol", s.solver.tol},
                     {"max_iter", s.solver.max_iter},
                     {"method", std::string(to_string(s.solver.method))}};
    json outputs = json::object();
    if (!s.outputs.certificate.empty()) {
        outputs["certificate"] = s.outputs.certificate;
    }
    if (!s.outputs.trajectory_csv.empty()) {
        outputs["trajectory_csv"] = s.outputs.trajectory_csv;
    }
    if (!s.outputs.report.empty()) {
        outputs["report"] = s.outputs.report;
    }
    if (!outputs.empty()) {
        doc["outputs"] = outputs;
    }
    if (!s.certificates.empty()) {
        json certs = json::array();
        for (Theorem t : s.certificates) {
            certs.push_back(std::string(to_string(t)));
        }
        doc["certificates"] = certs;
    }
    doc["m_source"] = std::string(to_string(s.m_source));
    return doc.dump(2) + "\n";
}

PeriodicitySpec periodicity(const Scenario& scenario) {
    PeriodicitySpec spec;
    spec.omega = scenario.omega;
    spec.c = scenario.c;
    spec.norm = scenario.norm;
    return spec;
}

NonlinearitySpec ode_nonlinearity(const Scenario& s) {
    if (s.kind != ProblemKind::Ode) {
        throw DomainError("ode_nonlinearity: not an ode scenario");
    }
    NonlinearitySpec g;
    const NonlinearityDesc& nl = s.nonlinearity;
    if (nl.builtin == "example_3_1") {
        g = catalog::planar_trig(param(nl, "a").value_or(0.0), s.norm);
    } else if (nl.builtin == "example_4_3") {
        g = catalog::planar_abs(param(nl, "a").value_or(0.0), s.norm);
    } else if (!nl.components.empty()) {
        ExpressionContext context;
        context.dimension = static_cast<int>(s.matrix.rows());
        context.params = nl.params;
        auto exprs = std::make_shared<std::vector<Expression>>();
        for (const std::string& text : nl.components) {
            exprs->push_back(Expression::parse(text, context));
        }
        g.dim = s.matrix.rows();
        g.evaluate = [exprs](double t, const ComplexVector& y) {
            ComplexVector out(static_cast<Eigen::Index>(exprs->size()));
            for (std::size_t i = 0; i < exprs->size(); ++i) {
                out(static_cast<Eigen::Index>(i)) = (*exprs)[i].evaluate(t, y);
            }
            return out;
        };
        g.real_valued = s.matrix.imag().isZero(0.0) && s.c.imag() == 0.0;
    } else {
        throw DomainError("ode_nonlinearity: builtin '" + nl.builtin + "' is not an ode nonlinearity");
    }
    if (s.matrix.rows() != g.dim) {
        throw DomainError("ode_nonlinearity: builtin dimension does not match the matrix");
    }
    if (s.constants.lipschitz) {
        g.lipschitz = s.constants.lipschitz;
    }
    if (s.constants.g1) {
        g.g1 = s.constants.g1;
    }
    if (s.constants.g2) {
        g.g2 = s.constants.g2;
    }
    return g;
}

DiagonalGenerator spectral_generator(const Scenario& s) {
    if (s.generator == "heat_dirichlet") {
        return DiagonalGenerator::heat_dirichlet(s.truncation);
    }
    if (s.generator == "schrodinger_periodic") {
        return DiagonalGenerator::schrodinger_periodic(s.truncation);
    }
    throw DomainError("unknown generator '" + s.generator + "'");
}

FieldNonlinearity spectral_nonlinearity(const Scenario& s) {
    const NonlinearityDesc& nl = s.nonlinearity;
    FieldNonlinearity f;
    if (nl.builtin == "heat_cubic") {
        f = catalog::heat_cubic(param(nl, "a").value_or(0.0), param(nl, "eta").value_or(0.0));
    } else if (nl.builtin == "schrodinger_cubic") {
        f = catalog::schrodinger_cubic(Complex(param(nl, "a").value_or(0.0), param(nl, "a_im").value_or(0.0)));
    } else {
        throw DomainError("spectral_nonlinearity: builtin '" + nl.builtin + "' is not a spectral nonlinearity");
    }
    if (s.constants.lipschitz) {
        f.lipschitz = s.constants.lipschitz;
    }
    if (s.constants.g1) {
        f.g1 = s.constants.g1;
    }
    if (s.constants.g2) {
        f.g2 = s.constants.g2;
    }
    return f;
}

} // namespace wcperiod::scenario
