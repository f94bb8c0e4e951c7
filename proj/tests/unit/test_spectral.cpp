#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"
#include "wcperiod/catalog.hpp"
#include "wcperiod/errors.hpp"
#include "wcperiod/spectral.hpp"

using namespace wcperiod;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;
const PeriodicitySpec kHeatSpec{kPi, Complex(-1.0, 0.0), NormKind::L2};

FieldState random_state(const DiagonalGenerator& gen) {
    return FieldState{random_vector(static_cast<Eigen::Index>(gen.size()), 1.0)};
}

} // namespace

TEST_CASE("generator families") {
    const DiagonalGenerator heat = DiagonalGenerator::heat_dirichlet(8);
    CHECK(heat.size() == 8);
    CHECK(heat.modes().front() == 1);
    CHECK(heat.eigenvalues()[2] == Complex(-9.0, 0.0));
    CHECK(heat.growth_gamma() == -1.0);
    CHECK_FALSE(heat.is_group());
    const DiagonalGenerator schr = DiagonalGenerator::schrodinger_periodic(4);
    CHECK(schr.size() == 9);
    CHECK(schr.modes().front() == -4);
    CHECK(schr.eigenvalues()[0] == Complex(0.0, -16.0));
    CHECK(schr.is_group());
    CHECK_THROWS_AS(DiagonalGenerator::heat_dirichlet(0), DomainError);
    CHECK_THROWS_AS(DiagonalGenerator::custom(BasisKind::DirichletSine, {1}, {Complex(1.0, 0.0)}, 1.0, 0.0),
                    DomainError);
}

TEST_CASE("semigroup action") {
    const DiagonalGenerator heat = DiagonalGenerator::heat_dirichlet(12);
    const FieldState y = random_state(heat);
    CHECK((semigroup_apply(heat, 0.0, y).coefficients - y.coefficients).norm() == 0.0);
    for (std::size_t slot = 0; slot < heat.size(); ++slot) {
        FieldState unit{ComplexVector::Zero(12)};
        unit.coefficients(static_cast<Eigen::Index>(slot)) = 1.0;
        const double k = static_cast<double>(heat.modes()[slot]);
        const double t = 0.37;
        CHECK(semigroup_apply(heat, t, unit).norm() == doctest::Approx(std::exp(-k * k * t)).epsilon(1e-14));
    }
    for (double t : {0.1, 1.0, 2.5}) {
        CHECK(semigroup_apply(heat, t, y).norm() <= std::exp(-t) * y.norm() * (1.0 + 1e-12));
    }
    CHECK_THROWS_AS(semigroup_apply(heat, -0.1, y), DomainError);

    const DiagonalGenerator schr = DiagonalGenerator::schrodinger_periodic(10);
    const FieldState z = random_state(schr);
    for (double t : {-1.3, 0.4, 7.0}) {
        CHECK(semigroup_apply(schr, t, z).norm() == doctest::Approx(z.norm()).epsilon(1e-14));
    }
}

TEST_CASE("growth bound on random states") {
    for (const DiagonalGenerator& gen :
         {DiagonalGenerator::heat_dirichlet(20), DiagonalGenerator::schrodinger_periodic(20)}) {
        for (int i = 0; i < 50; ++i) {
            const FieldState y = random_state(gen);
            const double t = uniform(0.0, 2.0 * kPi);
            CHECK(semigroup_apply(gen, t, y).norm() <=
                  gen.growth_q() * std::exp(gen.growth_gamma() * t) * y.norm() * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("resolvent norms") {
    CHECK(resolvent_norm(DiagonalGenerator::heat_dirichlet(64), kHeatSpec) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(resolvent_norm(DiagonalGenerator::heat_dirichlet(2), kHeatSpec) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(resolvent_norm(DiagonalGenerator::schrodinger_periodic(16), catalog::schrodinger_spec()) ==
          doctest::Approx(std::sqrt(1.0 + 1.0 / std::sqrt(2.0))).epsilon(1e-12));
    const DiagonalGenerator single =
        DiagonalGenerator::custom(BasisKind::PeriodicExponential, {0}, {Complex(0.0, 0.0)}, 1.0, 0.0);
    CHECK(resolvent_norm(single, PeriodicitySpec{1.0, Complex(2.0, 0.0), NormKind::L2}) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("resonant modes are identified") {
    try {
        resolvent_norm(DiagonalGenerator::schrodinger_periodic(4), PeriodicitySpec{kPi, Complex(1.0, 0.0), NormKind::L2});
        FAIL("expected ResonanceError");
    } catch (const ResonanceError& e) {
        CHECK(e.mode() % 2 == 0);
        CHECK(e.distance() <= 1e-8);
    }
    // the tail mode k = 5 resonates although the truncation K = 4 does not
    const PeriodicitySpec tail{2.0 * kPi / 50.0, Complex(-1.0, 0.0), NormKind::L2};
    const DiagonalGenerator truncated = DiagonalGenerator::custom(
        BasisKind::PeriodicExponential, {0, 1, 2, 3, 4},
        {Complex(0, 0), Complex(0, -1), Complex(0, -4), Complex(0, -9), Complex(0, -16)}, 1.0, 0.0);
    CHECK_NOTHROW(resolvent_norm(truncated, tail));
    try {
        resolvent_norm(DiagonalGenerator::schrodinger_periodic(4), tail);
        FAIL("expected ResonanceError");
    } catch (const ResonanceError& e) {
        CHECK(std::abs(e.mode()) % 5 == 0);
        CHECK(std::abs(e.mode()) >= 5);
    }
}

TEST_CASE("grid transforms") {
    for (const DiagonalGenerator& gen :
         {DiagonalGenerator::heat_dirichlet(16), DiagonalGenerator::schrodinger_periodic(16)}) {
        const GridTransform grid(gen, 4 * gen.truncation());
        const FieldState y = random_state(gen);
        const std::vector<Complex> samples = grid.forward(y);
        CHECK((grid.inverse(samples).coefficients - y.coefficients).cwiseAbs().maxCoeff() <= 1e-12);
        double energy = 0.0;
        for (const Complex& s : samples) {
            energy += grid.weight() * std::norm(s);
        }
        CHECK(energy == doctest::Approx(y.coefficients.squaredNorm()).epsilon(1e-10));
        CHECK_THROWS_AS(GridTransform(gen, 2 * gen.truncation() + 1), AliasingError);
    }
    const DiagonalGenerator heat = DiagonalGenerator::heat_dirichlet(8);
    const GridTransform grid(heat, 32);
    std::vector<Complex> samples;
    for (double x : grid.nodes()) {
        samples.emplace_back(std::sqrt(2.0 / kPi) * std::sin(3.0 * x));
    }
    const FieldState single = grid.inverse(samples);
    for (Eigen::Index i = 0; i < 8; ++i) {
        CHECK(std::abs(single.coefficients(i) - (i == 2 ? 1.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("mode kernel equals the scalar Green kernel") {
    for (int i = 0; i < 100; ++i) {
        const bool heat = i % 2 == 0;
        const long k = uniform_int(1, 6);
        const Complex lambda = heat ? Complex(-double(k * k), 0.0) : Complex(0.0, -double(k * k));
        const PeriodicitySpec spec = heat ? kHeatSpec : catalog::schrodinger_spec();
        const double t = uniform(0.0, kPi);
        const double s = uniform(0.0, kPi);
        ComplexMatrix a(1, 1);
        a(0, 0) = lambda;
        const GreenKernelODE scalar(a, spec);
        CHECK(std::abs(mode_green_kernel(lambda, spec, t, s) - scalar(t, s)(0, 0)) <= 1e-12);
    }
}

TEST_CASE("(C1) holds for the heat nonlinearity on coefficients") {
    const NonlinearitySpec g =
        coefficient_nonlinearity(DiagonalGenerator::heat_dirichlet(16), catalog::heat_cubic(1.0, 0.5));
    CHECK(verify_c1(g, kHeatSpec, 300) <= 1e-12);
}

TEST_CASE("zero forcing gives the zero trajectory") {
    const MildTrajectory y =
        mild_picard_solve(DiagonalGenerator::heat_dirichlet(16), catalog::heat_cubic(0.0, 0.5), kHeatSpec);
    CHECK(y.sup_norm() == 0.0);
}

TEST_CASE("forcing-only heat problem matches the per-mode closed form") {
    const DiagonalGenerator gen = DiagonalGenerator::heat_dirichlet(16);
    const double a = 0.8;
    const MildTrajectory y = mild_picard_solve(gen, catalog::heat_cubic(a, 0.0), kHeatSpec);
    double worst = 0.0;
    for (std::size_t i = 0; i < y.grid.size(); ++i) {
        const double t = y.grid[i];
        for (std::size_t slot = 0; slot < gen.size(); ++slot) {
            const double k = static_cast<double>(gen.modes()[slot]);
            const double lambda = -k * k;
            const double f = a * std::sqrt(2.0 / kPi) * (1.0 - std::cos(k * kPi)) / k;
            // y' = lambda y + f sin t, y(pi) = -y(0): y = alpha sin t + beta cos t
            const double beta = -f / (1.0 + lambda * lambda);
            const double alpha = lambda * beta;
            const Complex expected = alpha * std::sin(t) + beta * std::cos(t);
            worst = std::max(worst, std::abs(y.states[i].coefficients(static_cast<Eigen::Index>(slot)) - expected));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("a single forced mode does not leak into other modes") {
    const DiagonalGenerator gen = DiagonalGenerator::heat_dirichlet(12);
    FieldNonlinearity field;
    field.forcing_time = [](double t) { return Complex(std::sin(t), 0.0); };
    field.forcing_profile = [](double x) { return Complex(std::sin(3.0 * x), 0.0); };
    field.reaction = [](double, double, Complex) { return Complex(0.0, 0.0); };
    const MildTrajectory y = mild_picard_solve(gen, field, kHeatSpec);
    double leak = 0.0;
    for (const FieldState& s : y.states) {
        for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
            if (i != 2) {
                leak = std::max(leak, std::abs(s.coefficients(i)));
            }
        }
    }
    CHECK(leak <= 1e-12);
    CHECK(y.sup_norm() > 0.1);
}

TEST_CASE("heat example a = 1") {
    MildOptions options;
    const MildTrajectory y64 =
        mild_picard_solve(DiagonalGenerator::heat_dirichlet(64), catalog::heat_cubic(1.0, 0.5), kHeatSpec, options);
    const MildTrajectory y32 =
        mild_picard_solve(DiagonalGenerator::heat_dirichlet(32), catalog::heat_cubic(1.0, 0.5), kHeatSpec, options);
    CHECK(y64.sup_norm() <= 3.67222 * (1.0 + 1e-3));
    CHECK(std::abs(y64.sup_norm() - y32.sup_norm()) <= 1e-6);
    CHECK(y64.residuals.boundary <= 10 * options.tol);
    CHECK(y64.residuals.mild <= 10 * options.tol);
    for (int i = 0; i < 20; ++i) {
        const double t = uniform(0.0, 3.0 * kPi);
        CHECK((mild_extend(y64, t + kPi).coefficients + mild_extend(y64, t).coefficients).norm() <= 1e-8);
    }
    for (double t : {0.0, 0.5, 2.0}) {
        CHECK((mild_extend(y64, t).coefficients - y64.at(t).coefficients).norm() == 0.0);
    }
    CHECK((mild_extend(y64, kPi).coefficients + y64.states.front().coefficients).norm() == 0.0);
}

TEST_CASE("mild solution agrees with exponential propagation at 1.5 omega") {
    const DiagonalGenerator gen = DiagonalGenerator::heat_dirichlet(64);
    const FieldNonlinearity field = catalog::heat_cubic(1.0, 0.5);
    const MildTrajectory y = mild_picard_solve(gen, field, kHeatSpec);
    const NonlinearitySpec g = coefficient_nonlinearity(gen, field);
    const FieldState propagated = etdrk4_propagate(gen, g, y.states.front(), 0.0, 1.5 * kPi, 10000);
    CHECK((propagated.coefficients - mild_extend(y, 1.5 * kPi).coefficients).norm() <= 1e-5);
}

TEST_CASE("Schrodinger example converges") {
    MildOptions options;
    options.max_iter = 1000;
    const MildTrajectory y = mild_picard_solve(DiagonalGenerator::schrodinger_periodic(16),
                                               catalog::schrodinger_cubic(Complex(1.0, 0.0)),
                                               catalog::schrodinger_spec(), options);
    CHECK(y.residuals.boundary <= 10 * options.tol);
    CHECK(y.residuals.mild <= 10 * options.tol);
    CHECK(y.sup_norm() <= 207.421 * (1.0 + 1e-3));
}

TEST_CASE("resonant mild problems are rejected") {
    CHECK_THROWS_AS(mild_picard_solve(DiagonalGenerator::schrodinger_periodic(4),
                                      catalog::schrodinger_cubic(Complex(1.0, 0.0)),
                                      PeriodicitySpec{kPi, Complex(1.0, 0.0), NormKind::L2}),
                    ResonanceError);
}

TEST_CASE("phi functions") {
    for (Complex z : {Complex(1e-3, 0.0), Complex(-0.5, 1.0), Complex(-40.0, 0.0), Complex(3.0, -2.0)}) {
        CHECK(std::abs(phi_function(0, z) - std::exp(z)) <= 1e-14 * std::abs(std::exp(z)) + 1e-300);
        CHECK(std::abs(phi_function(1, z) - (std::exp(z) - 1.0) / z) <= 1e-12 * std::abs(phi_function(1, z)));
        const Complex phi2 = (std::exp(z) - 1.0 - z) / (z * z);
        if (std::abs(z) > 0.5) {
            CHECK(std::abs(phi_function(2, z) - phi2) <= 1e-12 * std::abs(phi2));
        }
    }
    CHECK(std::abs(phi_function(3, Complex(0.0, 0.0)) - 1.0 / 6.0) <= 1e-15);
}

TEST_CASE("exponential propagation of a linear problem") {
    const DiagonalGenerator gen = DiagonalGenerator::heat_dirichlet(4);
    NonlinearitySpec zero;
    zero.dim = 4;
    zero.evaluate = [](double, const ComplexVector& y) { return ComplexVector(ComplexVector::Zero(y.size())); };
    const FieldState y0 = random_state(gen);
    const FieldState y1 = etdrk4_propagate(gen, zero, y0, 0.0, 1.0, 10);
    CHECK((y1.coefficients - semigroup_apply(gen, 1.0, y0).coefficients).norm() <= 1e-14);
}
