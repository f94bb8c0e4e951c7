#include "wcperiod/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "wcperiod/errors.hpp"
#include "wcperiod/quadrature.hpp"

namespace wcperiod {

namespace {

class BallSampler {
public:
    BallSampler(Eigen::Index dim, bool real_valued, NormKind norm, std::uint64_t seed)
        : dim_(dim), real_(real_valued), norm_(norm), rng_(seed) {}

    ComplexVector point(double radius) {
        ComplexVector v(dim_);
        for (Eigen::Index i = 0; i < dim_; ++i) {
            v(i) = real_ ? Complex{normal_(rng_), 0.0} : Complex{normal_(rng_), normal_(rng_)};
        }
        const double len = vector_norm(v, norm_);
        if (len == 0.0) {
            return v;
        }
        return v * (radius * uniform_(rng_) / len);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(rng_); }

private:
    Eigen::Index dim_;
    bool real_;
    NormKind norm_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

void require_evaluable(const NonlinearitySpec& g) {
    if (!g.evaluate || g.dim <= 0) {
        throw DomainError("nonlinearity has no evaluator or non-positive dimension");
    }
}

std::string format_double(double x) {
    std::ostringstream out;
    out << std::setprecision(17) << x;
    return out.str();
}

std::string describe_spec(const PeriodicitySpec& spec) {
    std::ostringstream out;
    out << "omega=" << format_double(spec.omega) << " c=(" << format_double(spec.c.real()) << ","
        << format_double(spec.c.imag()) << ") norm=" << to_string(spec.norm);
    return out.str();
}

double m_value(const GreenKernelODE& kernel, const QuadratureSpec& quad, MSource use) {
    switch (use) {
    case MSource::ExactM:
        return compute_M(kernel, quad).value;
    case MSource::Mb:
        return bound_M_exponential(kernel);
    case MSource::Mc:
        return bound_M_integral(kernel, quad);
    }
    return bound_M_integral(kernel, quad);
}

std::string describe_kernel(const GreenKernelODE& kernel, const QuadratureSpec& quad, MSource use) {
    std::ostringstream out;
    out << "dim=" << kernel.dim() << ' ' << describe_spec(kernel.spec()) << " A=[";
    const ComplexMatrix& a = kernel.generator();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out << (i + j == 0 ? "" : " ") << '(' << format_double(a(i, j).real()) << ','
                << format_double(a(i, j).imag()) << ')';
        }
    }
    out << "] quad=" << quad.panels << 'x' << quad.nodes_per_panel << 'x' << quad.t_samples
        << " M=" << to_string(use);
    return out.str();
}

std::string describe_generator(const GeneratorConstants& gen, const PeriodicitySpec& spec) {
    std::ostringstream out;
    out << "Q=" << format_double(gen.q) << " gamma=" << format_double(gen.gamma)
        << " resolvent_norm=" << format_double(gen.resolvent_norm) << ' ' << describe_spec(spec);
    return out.str();
}

} // namespace

double verify_c1(const NonlinearitySpec& g, const PeriodicitySpec& spec, int samples,
                 std::uint64_t seed) {
    require_evaluable(g);
    spec.validate();
    BallSampler sampler(g.dim, g.real_valued, spec.norm, seed);
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = sampler.uniform(0.0, 2.0 * spec.omega);
        const ComplexVector y = sampler.point(5.0);
        const ComplexVector shifted = g.evaluate(t + spec.omega, spec.c * y);
        const ComplexVector scaled = spec.c * g.evaluate(t, y);
        worst = std::max(worst, vector_norm(shifted - scaled, spec.norm));
    }
    return worst;
}

ConstantSpotCheck spot_check_constants(const NonlinearitySpec& g, const PeriodicitySpec& spec,
                                       int samples, std::uint64_t seed) {
    require_evaluable(g);
    BallSampler sampler(g.dim, g.real_valued, spec.norm, seed);
    ConstantSpotCheck check;
    for (int k = 0; k < samples; ++k) {
        const double t = sampler.uniform(0.0, spec.omega);
        const ComplexVector y1 = sampler.point(5.0);
        // alternate far and near pairs so both global and local slopes are probed
        const ComplexVector y2 = (k % 2 == 0) ? sampler.point(5.0) : ComplexVector(y1 + sampler.point(1e-3));
        const ComplexVector g_y1 = g.evaluate(t, y1);
        if (g.lipschitz && *g.lipschitz > 0.0) {
            const double dy = vector_norm(y1 - y2, spec.norm);
            if (dy > 0.0) {
                const double quotient = vector_norm(g_y1 - g.evaluate(t, y2), spec.norm) / dy;
                check.lipschitz_ratio = std::max(check.lipschitz_ratio, quotient / *g.lipschitz);
            }
        }
        if (g.g1 && g.g2) {
            const double excess =
                vector_norm(g_y1, spec.norm) - (*g.g1 + *g.g2 * vector_norm(y1, spec.norm));
            check.growth_excess = std::max(check.growth_excess, excess);
        }
    }
    return check;
}

double zero_forcing_sup_norm(const NonlinearitySpec& g, const PeriodicitySpec& spec, int t_samples) {
    require_evaluable(g);
    spec.validate();
    if (t_samples < 2) {
        throw DomainError("zero_forcing_sup_norm: t_samples must be >= 2");
    }
    const ComplexVector zero = ComplexVector::Zero(g.dim);
    const auto norm_at = [&](double t) {
        if (g.forcing_norm) {
            return g.forcing_norm(t);
        }
        return vector_norm(g.evaluate(t, zero), spec.norm);
    };
    int k_best = 0;
    double best = -1.0;
    for (int k = 0; k < t_samples; ++k) {
        const double value = norm_at(spec.omega * k / (t_samples - 1));
        if (value > best) {
            best = value;
            k_best = k;
        }
    }
    const double lo = spec.omega * std::max(k_best - 1, 0) / (t_samples - 1);
    const double hi = spec.omega * std::min(k_best + 1, t_samples - 1) / (t_samples - 1);
    const double t_star = golden_section_max(norm_at, lo, hi, 1e-12 * spec.omega);
    return std::max(best, norm_at(t_star));
}

std::string_view to_string(Theorem theorem) {
    switch (theorem) {
    case Theorem::T31:
        return "T31";
    case Theorem::T41:
        return "T41";
    case Theorem::T51:
        return "T51";
    case Theorem::T52:
        return "T52";
    }
    return "T31";
}

std::string_view to_string(MSource source) {
    switch (source) {
    case MSource::ExactM:
        return "exactM";
    case MSource::Mb:
        return "Mb";
    case MSource::Mc:
        return "Mc";
    }
    return "Mc";
}

MSource parse_m_source(std::string_view name) {
    if (name == "exactM") {
        return MSource::ExactM;
    }
    if (name == "Mb") {
        return MSource::Mb;
    }
    if (name == "Mc") {
        return MSource::Mc;
    }
    throw DomainError("unknown M source '" + std::string(name) + "' (expected exactM, Mb or Mc)");
}

double Certificate::constant(const std::string& name) const {
    const auto it = constants.find(name);
    if (it == constants.end()) {
        throw DomainError("certificate has no constant '" + name + "'");
    }
    return it->second;
}

Verdict strict_verdict(double contraction, std::string_view condition) {
    if (!std::isfinite(contraction)) {
        return {false, std::string(condition) + " is not finite"};
    }
    if (contraction < 1.0 - kVerdictSlack) {
        return {true, {}};
    }
    if (contraction <= 1.0 + kVerdictSlack) {
        return {false, "boundary case"};
    }
    return {false, std::string(condition) + " = " + format_double(contraction) + " >= 1"};
}

Certificate certify_theorem1(const GreenKernelODE& kernel, const NonlinearitySpec& g,
                             const QuadratureSpec& quad, MSource use) {
    if (!g.lipschitz) {
        throw MissingConstantError("certify_theorem1 needs a Lipschitz constant L");
    }
    const double lip = *g.lipschitz;
    const double m = m_value(kernel, quad, use);
    const double contraction = lip * m;

    Certificate cert;
    cert.theorem = Theorem::T31;
    cert.m_source = use;
    cert.constants["L"] = lip;
    cert.constants["M"] = m;
    cert.constants["contraction"] = contraction;
    cert.verdict = strict_verdict(contraction, "L*M");
    if (cert.verdict.certified) {
        const double forcing = zero_forcing_sup_norm(g, kernel.spec(), quad.t_samples * 8);
        cert.constants["g0_norm"] = forcing;
        cert.constants["bound"] = m * forcing / (1.0 - contraction);
    }
    if (!g.c1_declared) {
        cert.notes.emplace_back("(C1) symmetry not declared for the nonlinearity");
    }
    cert.inputs_digest = "T31 " + describe_kernel(kernel, quad, use) + " L=" + format_double(lip);
    return cert;
}

Certificate certify_theorem2(const GreenKernelODE& kernel, const NonlinearitySpec& g,
                             const QuadratureSpec& quad, MSource use) {
    if (!g.g1 || !g.g2) {
        throw MissingConstantError("certify_theorem2 needs growth constants g1 and g2");
    }
    const double m = m_value(kernel, quad, use);
    const double contraction = *g.g2 * m;

    Certificate cert;
    cert.theorem = Theorem::T41;
    cert.m_source = use;
    cert.constants["g1"] = *g.g1;
    cert.constants["g2"] = *g.g2;
    cert.constants["M"] = m;
    cert.constants["contraction"] = contraction;
    cert.verdict = strict_verdict(contraction, "g2*M");
    if (cert.verdict.certified) {
        cert.constants["bound"] = m * *g.g1 / (1.0 - contraction);
    }
    cert.notes.emplace_back("finite-dimensional state space assumed (dim X = " +
                            std::to_string(kernel.dim()) + ")");
    if (!g.c1_declared) {
        cert.notes.emplace_back("(C1) symmetry not declared for the nonlinearity");
    }
    cert.inputs_digest = "T41 " + describe_kernel(kernel, quad, use) + " g1=" + format_double(*g.g1) +
                         " g2=" + format_double(*g.g2);
    return cert;
}

double mild_constant_U(const GeneratorConstants& gen, const PeriodicitySpec& spec) {
    spec.validate();
    const double scale = gen.q * gen.resolvent_norm * std::max(std::abs(spec.c), 1.0);
    if (std::abs(gen.gamma) < 1e-12) {
        return scale * spec.omega;
    }
    return scale * std::expm1(gen.gamma * spec.omega) / gen.gamma;
}

Certificate certify_theorem3(const GeneratorConstants& gen, const PeriodicitySpec& spec,
                             const NonlinearitySpec& g) {
    if (!g.lipschitz) {
        throw MissingConstantError("certify_theorem3 needs a Lipschitz constant L");
    }
    const double lip = *g.lipschitz;
    const double u = mild_constant_U(gen, spec);
    const double contraction = lip * u;

    Certificate cert;
    cert.theorem = Theorem::T51;
    cert.constants["L"] = lip;
    cert.constants["U"] = u;
    cert.constants["Q"] = gen.q;
    cert.constants["gamma"] = gen.gamma;
    cert.constants["resolvent_norm"] = gen.resolvent_norm;
    cert.constants["contraction"] = contraction;
    cert.verdict = strict_verdict(contraction, "L*U");
    if (cert.verdict.certified) {
        const double forcing = zero_forcing_sup_norm(g, spec);
        cert.constants["g0_norm"] = forcing;
        cert.constants["bound"] = u * forcing / (1.0 - contraction);
    }
    if (!g.c1_declared) {
        cert.notes.emplace_back("(C1) symmetry not declared for the nonlinearity");
    }
    cert.inputs_digest = "T51 " + describe_generator(gen, spec) + " L=" + format_double(lip);
    return cert;
}

double poincare_ball_radius(const GeneratorConstants& gen, const PeriodicitySpec& spec, double g1,
                            double g2) {
    const double omega = spec.omega;
    const double qr = gen.q * gen.resolvent_norm;
    const double growth = std::expm1(gen.q * g2 * omega);
    const double shift = std::exp(std::abs(gen.gamma) * omega);
    const double decay = std::exp(gen.gamma * omega);
    const double numerator =
        qr * (g1 * shift * omega + decay * gen.q * g1 * omega * shift * growth);
    return numerator / (1.0 - qr * decay * growth);
}

Certificate certify_theorem4(const GeneratorConstants& gen, const PeriodicitySpec& spec,
                             const NonlinearitySpec& g) {
    if (!g.g1 || !g.g2) {
        throw MissingConstantError("certify_theorem4 needs growth constants g1 and g2");
    }
    spec.validate();
    const double g1 = *g.g1;
    const double g2 = *g.g2;
    const double omega = spec.omega;
    const double lhs =
        gen.q * gen.resolvent_norm * std::exp(gen.gamma * omega) * std::expm1(gen.q * g2 * omega);

    Certificate cert;
    cert.theorem = Theorem::T52;
    cert.constants["g1"] = g1;
    cert.constants["g2"] = g2;
    cert.constants["Q"] = gen.q;
    cert.constants["gamma"] = gen.gamma;
    cert.constants["resolvent_norm"] = gen.resolvent_norm;
    cert.constants["contraction"] = lhs;
    cert.verdict = strict_verdict(lhs, "Q*||R||*exp(gamma*omega)*(exp(Q*g2*omega)-1)");
    const double q = gen.q;
    const double gamma = gen.gamma;
    cert.trajectory_bound = [q, gamma, g1, g2, omega](double y0_norm, double t) {
        return q * (y0_norm + g1 * omega * std::exp(std::abs(gamma) * omega)) *
               std::exp((q * g2 + gamma) * t);
    };
    if (cert.verdict.certified) {
        const double xi = poincare_ball_radius(gen, spec, g1, g2);
        cert.constants["Xi"] = xi;
        // the Gronwall bound is exponential in t, so its max over [0, omega] is at an endpoint
        cert.constants["bound"] =
            std::max(cert.trajectory_bound(xi, 0.0), cert.trajectory_bound(xi, omega));
    }
    cert.notes.emplace_back("compactness of S(t), t > 0, is assumed, not verified");
    if (!g.c1_declared) {
        cert.notes.emplace_back("(C1) symmetry not declared for the nonlinearity");
    }
    cert.inputs_digest = "T52 " + describe_generator(gen, spec) + " g1=" + format_double(g1) +
                         " g2=" + format_double(g2);
    return cert;
}

} // namespace wcperiod
