#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "wcperiod/catalog.hpp"
#include "wcperiod/dopri5.hpp"
#include "wcperiod/errors.hpp"
#include "wcperiod/ode_solver.hpp"
#include "wcperiod/quadrature.hpp"

using namespace wcperiod;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

GreenKernelODE planar_kernel(NormKind norm) {
    return GreenKernelODE(catalog::planar_matrix(), catalog::antiperiodic_pi(norm));
}

ComplexVector forcing(double t) {
    ComplexVector out(2);
    out << std::sin(t), std::cos(3.0 * t);
    return out;
}

NonlinearitySpec linear_forcing() {
    NonlinearitySpec f;
    f.dim = 2;
    f.evaluate = [](double t, const ComplexVector&) { return forcing(t); };
    return f;
}

} // namespace

TEST_CASE("zero nonlinearity gives the zero trajectory") {
    const SolutionTrajectory y = picard_solve(planar_kernel(NormKind::L2), catalog::planar_trig(0.0, NormKind::L2));
    CHECK(y.sup_norm() == 0.0);
    CHECK(y.residuals.boundary == 0.0);
    CHECK(y.residuals.ode == 0.0);
    CHECK(y.residuals.periodicity == 0.0);
}

TEST_CASE("linear forcing converges in one step") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    const SolutionTrajectory y = picard_solve(k, linear_forcing());
    CHECK(y.iterations <= 2);
    REQUIRE(y.update_history.size() >= 2);
    CHECK(y.update_history[1] <= 1e-10);
    PicardOptions grid256;
    grid256.grid_size = 256;
    CHECK(picard_solve(k, linear_forcing(), grid256).residuals.ode <= 1e-6);
}

TEST_CASE("Poincare fixed point for linear forcing matches the closed form") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    const SolutionTrajectory y = poincare_solve(k, linear_forcing());
    // y0 = R int_0^pi exp(A(pi - s)) f(s) ds by composite Gauss quadrature
    const GaussRule& rule = gauss_legendre(16);
    const int panels = 64;
    const double h = kPi / panels;
    ComplexVector integral = ComplexVector::Zero(2);
    for (int p = 0; p < panels; ++p) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = (p + 0.5 * (rule.nodes[i] + 1.0)) * h;
            integral += 0.5 * h * rule.weights[i] * matrix_exponential(catalog::planar_matrix(), kPi - s) * forcing(s);
        }
    }
    const ComplexVector y0 = k.resolvent() * integral;
    CHECK((y.values.front() - y0).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("planar example with a = 0.2") {
    for (NormKind norm : {NormKind::L1, NormKind::L2, NormKind::LInf}) {
        CAPTURE(static_cast<int>(norm));
        const GreenKernelODE k = planar_kernel(norm);
        const NonlinearitySpec g = catalog::planar_trig(0.2, norm);
        PicardOptions options;
        options.grid_size = 256;
        const SolutionTrajectory y = picard_solve(k, g, options);
        CHECK(y.residuals.boundary <= 1e-8);
        CHECK(y.residuals.ode <= 1e-5);
        CHECK(y.residuals.boundary <= 10 * options.tol);
        const Certificate cert = certify_theorem1(k, g);
        REQUIRE(cert.verdict.certified);
        CHECK(y.sup_norm() <= cert.constant("bound") * (1.0 + 1e-3));
        const SolutionTrajectory z = poincare_solve(k, g);
        CHECK(sup_distance(picard_solve(k, g), z) <= 1e-6);
    }
}

TEST_CASE("Picard update ratio stays below LM + 0.05") {
    for (NormKind norm : {NormKind::L1, NormKind::L2, NormKind::LInf}) {
        for (double a : {0.1, 0.2, 0.25}) {
            const GreenKernelODE k = planar_kernel(norm);
            const NonlinearitySpec g = catalog::planar_trig(a, norm);
            const Certificate cert = certify_theorem1(k, g);
            if (!cert.verdict.certified) {
                continue;
            }
            const double q = cert.constant("contraction");
            const SolutionTrajectory y = picard_solve(k, g);
            for (std::size_t n = 1; n + 1 < y.update_history.size(); ++n) {
                if (y.update_history[n] < 1e-13) {
                    break;
                }
                CHECK(y.update_history[n + 1] <= (q + 0.05) * y.update_history[n]);
            }
        }
    }
}

TEST_CASE("doubling the grid changes the sup norm by at most 1e-6") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    const NonlinearitySpec g = catalog::planar_trig(0.2, NormKind::L2);
    PicardOptions coarse;
    coarse.grid_size = 128;
    PicardOptions fine;
    fine.grid_size = 256;
    CHECK(std::abs(picard_solve(k, g, coarse).sup_norm() - picard_solve(k, g, fine).sup_norm()) <= 1e-6);
}

TEST_CASE("oracle agreement on certified instances") {
    for (double a : {0.1, 0.2, 0.4}) {
        const GreenKernelODE k = planar_kernel(NormKind::L2);
        const NonlinearitySpec g = catalog::planar_trig(a, NormKind::L2);
        CHECK(sup_distance(picard_solve(k, g), poincare_solve(k, g)) <= 1e-6);
    }
    const GreenKernelODE k1 = planar_kernel(NormKind::L1);
    const NonlinearitySpec g = catalog::planar_abs(0.2, NormKind::L1);
    CHECK(sup_distance(picard_solve(k1, g), poincare_solve(k1, g)) <= 1e-6);
}

TEST_CASE("periodic extension") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    const SolutionTrajectory y = picard_solve(k, catalog::planar_trig(0.3, NormKind::L2));
    const Complex c = k.spec().c;
    for (double t : {0.0, 0.4, 1.7}) {
        CHECK((extend_solution(y, t) - y.at(t)).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK((extend_solution(y, kPi) - c * y.values.front()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 20; ++i) {
        const double t = uniform(-3.0 * kPi, 3.0 * kPi);
        CHECK((extend_solution(y, t + kPi) - c * extend_solution(y, t)).cwiseAbs().maxCoeff() <= 1e-9);
    }
    CHECK((extend_solution(y, -0.3 * kPi) - y.at(0.7 * kPi) / c).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(y.residuals.periodicity <= 1e-9);

    SolutionTrajectory broken = y;
    broken.residuals.boundary = 1e-3;
    CHECK_THROWS_AS(extend_solution(broken, 5.0), PreconditionError);
}

TEST_CASE("solver failures are reported") {
    const GreenKernelODE k = planar_kernel(NormKind::L2);
    PicardOptions options;
    options.max_iter = 2;
    options.tol = 1e-14;
    try {
        picard_solve(k, catalog::planar_trig(0.4, NormKind::L2), options);
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        CHECK(e.last_update() > 0.0);
        CHECK(e.iterations() == 2);
    }
    options.grid_size = 5;
    CHECK_THROWS_AS(picard_solve(k, catalog::planar_trig(0.4, NormKind::L2), options), InterpolationError);
}

TEST_CASE("Dormand-Prince hits the requested times") {
    Dopri5 solver([](double, const ComplexVector& y) { return ComplexVector(Complex(-0.5, 2.0) * y); });
    ComplexVector y0(1);
    y0(0) = 1.0;
    const std::vector<double> times = {0.0, 0.25, 1.0, 3.0};
    const std::vector<ComplexVector> out = solver.integrate(y0, times);
    REQUIRE(out.size() == times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(out[i](0) - std::exp(Complex(-0.5, 2.0) * times[i])) <= 1e-9);
    }
    CHECK(solver.steps_taken() > 0);
}
