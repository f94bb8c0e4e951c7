#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "test_support.hpp"
#include "wcperiod/catalog.hpp"
#include "wcperiod/certificates.hpp"
#include "wcperiod/errors.hpp"
#include "wcperiod/spectral.hpp"

using namespace wcperiod;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

GreenKernelODE planar_kernel(NormKind norm) {
    return GreenKernelODE(catalog::planar_matrix(), catalog::antiperiodic_pi(norm));
}

const PeriodicitySpec kHeatSpec{kPi, Complex(-1.0, 0.0), NormKind::L2};
const GeneratorConstants kHeat{1.0, -1.0, 1.0};

NonlinearitySpec heat_coefficients(double a, double eta) {
    return coefficient_nonlinearity(DiagonalGenerator::heat_dirichlet(16), catalog::heat_cubic(a, eta));
}

NonlinearitySpec scalar_heat(double a) {
    NonlinearitySpec g;
    g.dim = 1;
    g.real_valued = true;
    g.evaluate = [a](double t, const ComplexVector& y) {
        ComplexVector out(1);
        const Complex u = y(0);
        out(0) = a * std::sin(t) - u * u * u / (2.0 * (u * u + 1.0));
        return out;
    };
    return g;
}

} // namespace

TEST_CASE("(C1) residuals") {
    CHECK(verify_c1(catalog::planar_trig(0.3, NormKind::L2), catalog::antiperiodic_pi(NormKind::L2), 2000) <= 1e-12);
    CHECK(verify_c1(catalog::planar_abs(0.3, NormKind::L1), catalog::antiperiodic_pi(NormKind::L1), 2000) <= 1e-12);
    NonlinearitySpec identity;
    identity.dim = 3;
    identity.evaluate = [](double, const ComplexVector& y) { return y; };
    CHECK(verify_c1(identity, PeriodicitySpec{0.7, Complex(0.3, 1.1), NormKind::LInf}, 500) == 0.0);
    CHECK(verify_c1(scalar_heat(1.0), kHeatSpec, 2000) <= 1e-12);
    NonlinearitySpec broken = scalar_heat(1.0);
    broken.evaluate = [](double t, const ComplexVector&) {
        ComplexVector out(1);
        out(0) = std::cos(2.0 * t);
        return out;
    };
    CHECK(verify_c1(broken, kHeatSpec, 200) > 0.1);
}

TEST_CASE("uniqueness thresholds of the planar example") {
    const NormKind norms[] = {NormKind::L1, NormKind::LInf, NormKind::L2};
    const double published[] = {0.287549, 0.335414, 0.502795};
    for (int i = 0; i < 3; ++i) {
        CAPTURE(i);
        const GreenKernelODE k = planar_kernel(norms[i]);
        const Certificate unit = certify_theorem1(k, catalog::planar_trig(1.0, norms[i]));
        const double threshold = 1.0 / unit.constant("contraction");
        CHECK(std::abs(threshold - published[i]) <= 1e-3 * published[i]);
        CHECK(certify_theorem1(k, catalog::planar_trig(published[i] * 0.999, norms[i])).verdict.certified);
        CHECK_FALSE(certify_theorem1(k, catalog::planar_trig(published[i] * 1.001, norms[i])).verdict.certified);
        CHECK(unit.m_source == MSource::Mc);
    }
}

TEST_CASE("zero nonlinearity is certified with bound 0") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    const Certificate t31 = certify_theorem1(k, catalog::planar_trig(0.0, NormKind::L2));
    CHECK(t31.verdict.certified);
    CHECK(t31.constant("bound") == 0.0);
    NonlinearitySpec g = catalog::planar_trig(0.0, NormKind::L2);
    g.g1 = 0.0;
    g.g2 = 0.0;
    const Certificate t41 = certify_theorem2(k, g);
    CHECK(t41.verdict.certified);
    CHECK(t41.constant("bound") == 0.0);
}

TEST_CASE("uniqueness bound grows with |a|") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    double previous = 0.0;
    for (double a = 0.0; a < 0.5; a += 0.05) {
        const Certificate cert = certify_theorem1(k, catalog::planar_trig(a, NormKind::L2));
        REQUIRE(cert.verdict.certified);
        CHECK(cert.constant("bound") >= previous);
        previous = cert.constant("bound");
    }
}

TEST_CASE("existence bound of the planar example in the L1 norm") {
    const GreenKernelODE k = planar_kernel(NormKind::L1);
    for (double a : {0.05, 0.5, 3.0, 40.0}) {
        NonlinearitySpec g = catalog::planar_trig(a, NormKind::L1);
        REQUIRE(*g.g1 == doctest::Approx(2.0 * a));
        REQUIRE(*g.g2 == 0.0);
        const Certificate cert = certify_theorem2(k, g);
        CHECK(cert.verdict.certified);
        CHECK(std::abs(cert.constant("bound") - 3.47767 * a) <= 1e-3 * 3.47767 * a);
    }
}

TEST_CASE("existence thresholds of the absolute-value example") {
    const NormKind norms[] = {NormKind::L1, NormKind::LInf, NormKind::L2};
    const double published[] = {0.406656, 0.335414, 0.35553};
    for (int i = 0; i < 3; ++i) {
        CAPTURE(i);
        const GreenKernelODE k = planar_kernel(norms[i]);
        const double threshold = 1.0 / certify_theorem2(k, catalog::planar_abs(1.0, norms[i])).constant("contraction");
        CHECK(std::abs(threshold - published[i]) <= 1e-3 * published[i]);
        CHECK(certify_theorem2(k, catalog::planar_abs(published[i] * 0.999, norms[i])).verdict.certified);
        CHECK_FALSE(certify_theorem2(k, catalog::planar_abs(published[i] * 1.001, norms[i])).verdict.certified);
    }
}

TEST_CASE("missing constants are reported") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    NonlinearitySpec g = catalog::planar_trig(0.1, NormKind::L2);
    g.lipschitz.reset();
    g.g2.reset();
    CHECK_THROWS_AS(certify_theorem1(k, g), MissingConstantError);
    CHECK_THROWS_AS(certify_theorem2(k, g), MissingConstantError);
    CHECK_THROWS_AS(certify_theorem3(kHeat, kHeatSpec, g), MissingConstantError);
    CHECK_THROWS_AS(certify_theorem4(kHeat, kHeatSpec, g), MissingConstantError);
}

TEST_CASE("M sources") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    const NonlinearitySpec g = catalog::planar_trig(0.2, NormKind::L2);
    const Certificate exact = certify_theorem1(k, g, {}, MSource::ExactM);
    const Certificate mb = certify_theorem1(k, g, {}, MSource::Mb);
    const Certificate mc = certify_theorem1(k, g, {}, MSource::Mc);
    CHECK(exact.constant("M") <= mc.constant("M") + 1e-6);
    CHECK(exact.constant("M") <= mb.constant("M") + 1e-6);
    CHECK(*mb.m_source == MSource::Mb);
    CHECK(parse_m_source(to_string(MSource::ExactM)) == MSource::ExactM);
    CHECK_THROWS_AS(parse_m_source("Md"), DomainError);
}

TEST_CASE("strict verdicts") {
    CHECK(strict_verdict(0.5, "x").certified);
    const Verdict boundary = strict_verdict(1.0, "x");
    CHECK_FALSE(boundary.certified);
    CHECK(boundary.reason == "boundary case");
    CHECK_FALSE(strict_verdict(1.0 - 1e-13, "x").certified);
    CHECK_FALSE(strict_verdict(2.0, "x").certified);
    CHECK_FALSE(strict_verdict(std::nan(""), "x").certified);
}

TEST_CASE("mild uniqueness for the heat example") {
    const Certificate cert = certify_theorem3(kHeat, kHeatSpec, heat_coefficients(1.0, 0.5));
    CHECK(cert.constant("U") == doctest::Approx(1.0 - std::exp(-kPi)).epsilon(1e-14));
    CHECK(std::abs(cert.constant("contraction") - 0.538192) <= 1e-5);
    CHECK(cert.constant("g0_norm") == doctest::Approx(std::sqrt(kPi)).epsilon(1e-9));
    CHECK(std::abs(cert.constant("bound") - 3.67222) <= 1e-4 * 3.67222);
    CHECK(cert.verdict.certified);
}

TEST_CASE("mild uniqueness for the Schrodinger example") {
    const DiagonalGenerator gen = DiagonalGenerator::schrodinger_periodic(16);
    const PeriodicitySpec spec = catalog::schrodinger_spec();
    const GeneratorConstants constants = generator_constants(gen, spec);
    CHECK(constants.resolvent_norm == doctest::Approx(std::sqrt(1.0 + 1.0 / std::sqrt(2.0))).epsilon(1e-12));
    const Certificate cert =
        certify_theorem3(constants, spec, coefficient_nonlinearity(gen, catalog::schrodinger_cubic(Complex(1.0, 0.0))));
    CHECK(std::abs(cert.constant("U") - 4.10469) <= 1e-5);
    CHECK(std::abs(cert.constant("contraction") - 0.923555) <= 1e-5);
    CHECK(std::abs(cert.constant("bound") - 207.421) <= 1e-3 * 207.421);
    CHECK(cert.verdict.certified);
}

TEST_CASE("L = 0 gives bound U ||g(., 0)||") {
    NonlinearitySpec g = heat_coefficients(2.0, 0.0);
    const Certificate cert = certify_theorem3(kHeat, kHeatSpec, g);
    CHECK(cert.verdict.certified);
    CHECK(cert.constant("bound") == doctest::Approx(cert.constant("U") * cert.constant("g0_norm")).epsilon(1e-15));
}

TEST_CASE("U is continuous at gamma = 0") {
    const PeriodicitySpec spec{2.0, Complex(0.5, 0.5), NormKind::L2};
    const double u0 = mild_constant_U({1.3, 0.0, 1.7}, spec);
    for (double gamma : {1e-9, -1e-9}) {
        CHECK(std::abs(mild_constant_U({1.3, gamma, 1.7}, spec) - u0) <= 1e-6 * u0);
    }
}

TEST_CASE("Poincare-map existence threshold for the heat example") {
    const double threshold = std::log1p(std::exp(kPi)) / kPi;
    CHECK(std::abs(threshold - 1.01347) <= 1e-4);
    CHECK(certify_theorem4(kHeat, kHeatSpec, heat_coefficients(1.0, threshold * (1.0 - 1e-6))).verdict.certified);
    CHECK_FALSE(certify_theorem4(kHeat, kHeatSpec, heat_coefficients(1.0, threshold * (1.0 + 1e-6))).verdict.certified);
    const Certificate zero = certify_theorem4(kHeat, kHeatSpec, heat_coefficients(1.0, 0.0));
    CHECK(zero.constant("contraction") == 0.0);
    CHECK(zero.verdict.certified);
}

TEST_CASE("Xi radius against an arbitrary-precision evaluation") {
    using boost::multiprecision::cpp_bin_float_50;
    const double eta = 0.5;
    const double g1 = std::sqrt(kPi / 2.0);
    const cpp_bin_float_50 pi = boost::math::constants::pi<cpp_bin_float_50>();
    const cpp_bin_float_50 G1 = sqrt(pi / 2);
    const cpp_bin_float_50 growth = exp(cpp_bin_float_50(eta) * pi) - 1;
    const cpp_bin_float_50 shift = exp(pi);
    const cpp_bin_float_50 decay = exp(-pi);
    const cpp_bin_float_50 xi = (G1 * shift * pi + decay * G1 * pi * shift * growth) / (1 - decay * growth);
    const double computed = poincare_ball_radius(kHeat, kHeatSpec, g1, eta);
    CHECK(std::abs(computed - xi.convert_to<double>()) <= 1e-10 * xi.convert_to<double>());
    NonlinearitySpec g = heat_coefficients(1.0, eta);
    g.g1 = g1;
    const Certificate cert = certify_theorem4(kHeat, kHeatSpec, g);
    CHECK(cert.constant("Xi") == doctest::Approx(computed).epsilon(1e-15));
}

TEST_CASE("certificates are pure") {
    const GreenKernelODE k = planar_kernel(NormKind::LInf);
    const NonlinearitySpec g = catalog::planar_abs(0.2, NormKind::LInf);
    const Certificate a = certify_theorem2(k, g);
    const Certificate b = certify_theorem2(k, g);
    CHECK(a.constants == b.constants);
    CHECK(a.inputs_digest == b.inputs_digest);
    const Certificate c = certify_theorem1(k, g);
    const Certificate d = certify_theorem1(k, g);
    CHECK(c.constants == d.constants);
}

TEST_CASE("sampled constants are consistent with the declared ones") {
    const PeriodicitySpec spec = catalog::antiperiodic_pi(NormKind::L2);
    for (NormKind norm : {NormKind::L1, NormKind::L2, NormKind::LInf}) {
        const PeriodicitySpec s = catalog::antiperiodic_pi(norm);
        for (const NonlinearitySpec& g : {catalog::planar_trig(0.7, norm), catalog::planar_abs(0.7, norm)}) {
            const ConstantSpotCheck check = spot_check_constants(g, s, 3000);
            CHECK(check.lipschitz_ratio <= 1.0 + 1e-6);
            CHECK(check.growth_excess <= 1e-9);
        }
    }
    NonlinearitySpec wrong = catalog::planar_trig(1.0, NormKind::L2);
    wrong.lipschitz = 0.1;
    CHECK(spot_check_constants(wrong, spec, 3000).lipschitz_ratio > 1.0);
}

TEST_CASE("zero forcing norm") {
    for (NormKind norm : {NormKind::L1, NormKind::L2, NormKind::LInf}) {
        const double value = zero_forcing_sup_norm(catalog::planar_trig(0.4, norm), catalog::antiperiodic_pi(norm));
        CHECK(value == doctest::Approx(0.4).epsilon(1e-12));
    }
}
