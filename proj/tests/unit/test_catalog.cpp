#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wcperiod/catalog.hpp"

using namespace wcperiod;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Lipschitz constants from the maximized derivatives") {
    CHECK(std::abs(catalog::maximize_abs(catalog::heat_reaction_derivative, -20.0, 20.0) - 9.0 / 16.0) <= 1e-6);
    CHECK(std::abs(catalog::maximize_abs(catalog::schrodinger_derivative_bound, 0.0, 20.0) - 9.0 / 40.0) <= 1e-6);
    const double h = 1e-5;
    for (double u : {-3.0, -0.4, 0.0, 0.9, 2.5}) {
        const auto f = [](double v) { return v * v * v / (2.0 * (v * v + 1.0)); };
        const double fd = (f(u + h) - f(u - h)) / (2.0 * h);
        CHECK(catalog::heat_reaction_derivative(u) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("declared constants of the planar nonlinearities") {
    const double a = -0.3;
    CHECK(*catalog::planar_trig(a, NormKind::L1).lipschitz == doctest::Approx(0.6));
    CHECK(*catalog::planar_trig(a, NormKind::LInf).lipschitz == doctest::Approx(0.6));
    CHECK(*catalog::planar_trig(a, NormKind::L2).lipschitz == doctest::Approx(std::sqrt(2.0) * 0.3));
    CHECK(*catalog::planar_trig(a, NormKind::L1).g1 == doctest::Approx(0.6));
    CHECK(*catalog::planar_trig(a, NormKind::L1).g2 == 0.0);
    CHECK(*catalog::planar_abs(a, NormKind::L1).g1 == doctest::Approx(0.3));
    CHECK(*catalog::planar_abs(a, NormKind::L1).g2 == doctest::Approx(std::sqrt(2.0) * 0.3));
    CHECK(*catalog::planar_abs(a, NormKind::LInf).g2 == doctest::Approx(0.6));
    CHECK(*catalog::planar_abs(a, NormKind::L2).g2 == doctest::Approx(0.6));
}

TEST_CASE("planar nonlinearity values") {
    const NonlinearitySpec g = catalog::planar_trig(0.2, NormKind::L2);
    ComplexVector y(2);
    y << 0.3, -1.1;
    const ComplexVector v = g.evaluate(0.7, y);
    CHECK(std::abs(v(0) - 0.2 * std::sin(0.7) * std::cos(0.3 - 1.1)) <= 1e-15);
    CHECK(std::abs(v(1) - 0.2 * std::cos(1.4) * std::sin(0.3 + 1.1)) <= 1e-15);
    const ComplexVector w = catalog::planar_abs(0.2, NormKind::L2).evaluate(0.7, y);
    CHECK(std::abs(w(0) - 0.2 * std::sin(0.7) * (std::abs(0.3 - 1.1) + 1.0)) <= 1e-15);
    CHECK(std::abs(w(1) - 0.2 * std::cos(0.7) * std::abs(0.3 + 1.1)) <= 1e-15);
}

TEST_CASE("spectral catalog constants") {
    const FieldNonlinearity heat = catalog::heat_cubic(2.0, 0.5);
    CHECK(*heat.lipschitz == doctest::Approx(9.0 / 16.0));
    CHECK(*heat.g1 == doctest::Approx(2.0 * std::sqrt(kPi)));
    CHECK(*heat.g2 == doctest::Approx(0.5));
    const FieldNonlinearity schr = catalog::schrodinger_cubic(Complex(1.0, 0.0));
    CHECK(*schr.lipschitz == doctest::Approx(9.0 / 40.0));
    CHECK(*schr.g1 == doctest::Approx(std::sqrt(19.0 * kPi) / 2.0));
    CHECK(*schr.g2 == doctest::Approx(0.2));
    const PeriodicitySpec spec = catalog::schrodinger_spec();
    CHECK(spec.omega == doctest::Approx(kPi));
    CHECK(std::abs(spec.c - std::polar(1.0, kPi / 4.0)) <= 1e-15);
    CHECK(catalog::planar_matrix()(1, 1) == Complex(-8.0, 0.0));
}

TEST_CASE("the Schrodinger forcing norm matches sqrt(19 pi)/2") {
    const DiagonalGenerator gen = DiagonalGenerator::schrodinger_periodic(8);
    const NonlinearitySpec g = coefficient_nonlinearity(gen, catalog::schrodinger_cubic(Complex(1.0, 0.0)));
    CHECK(g.forcing_norm(0.3) == doctest::Approx(std::sqrt(19.0 * kPi) / 2.0).epsilon(1e-10));
}
