#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"
#include "wcperiod/errors.hpp"
#include "wcperiod/linalg.hpp"

using namespace wcperiod;
using namespace testing_support;

namespace {

ComplexMatrix planar() {
    ComplexMatrix a(2, 2);
    a << 2.0, -4.0, 6.0, -8.0;
    return a;
}

// greedy matching of two eigenvalue lists, returns the largest pair distance
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (const Complex& x : a) {
        auto best = std::min_element(b.begin(), b.end(),
                                     [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*best - x));
        b.erase(best);
    }
    return worst;
}

} // namespace

TEST_CASE("matrix exponential at t = 0 is the identity") {
    for (int n = 1; n <= 6; ++n) {
        const ComplexMatrix a = random_matrix(n, 3.0);
        CHECK(max_abs(matrix_exponential(a, 0.0) - ComplexMatrix::Identity(n, n)) == 0.0);
    }
}

TEST_CASE("matrix exponential of a scalar") {
    const Complex lambda(-0.7, 2.3);
    for (double t : {-1.5, 0.3, 2.0}) {
        ComplexMatrix a(1, 1);
        a(0, 0) = lambda;
        const ComplexMatrix e = matrix_exponential(a, t);
        CHECK(std::abs(e(0, 0) - std::exp(lambda * t)) <= 1e-14 * std::abs(std::exp(lambda * t)));
    }
}

TEST_CASE("planar matrix exponential matches the hand diagonalization") {
    ComplexMatrix p(2, 2), p_inv(2, 2);
    p << 1.0, 2.0, 1.0, 3.0;
    p_inv << 3.0, -2.0, -1.0, 1.0;
    const double pi = std::numbers::pi;
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = std::exp(-2.0 * pi);
    d(1, 1) = std::exp(-4.0 * pi);
    const ComplexMatrix oracle = p * d * p_inv;
    const ComplexMatrix e = matrix_exponential(planar(), pi);
    CHECK(max_abs(e - oracle) <= 1e-15);
    std::vector<Complex> eig = spectrum(e);
    CHECK(multiset_distance(eig, {std::exp(-4.0 * pi), std::exp(-2.0 * pi)}) <= 1e-15);
}

TEST_CASE("matrix exponential overflow is reported") {
    ComplexMatrix a(1, 1);
    a(0, 0) = 1000.0;
    CHECK_THROWS_AS(matrix_exponential(a, 1.0), OverflowError);
    CHECK_THROWS_AS(matrix_exponential(ComplexMatrix(2, 3), 1.0), DomainError);
}

TEST_CASE("semigroup law on random matrices") {
    for (int trial = 0; trial < 60; ++trial) {
        const int n = uniform_int(1, 8);
        const ComplexMatrix a = random_matrix(n, 2.0 / std::sqrt(2.0));
        const double t = uniform(-2.0, 2.0);
        const double s = uniform(-2.0, 2.0);
        const ComplexMatrix lhs = matrix_exponential(a, t + s);
        const ComplexMatrix rhs = matrix_exponential(a, t) * matrix_exponential(a, s);
        CHECK(induced_norm(lhs - rhs, NormKind::L2) <= 1e-9);
    }
}

TEST_CASE("spectrum of the planar matrix") {
    const std::vector<Complex> eig = spectrum(planar());
    REQUIRE(eig.size() == 2);
    CHECK(std::abs(eig[0] - Complex(-4.0, 0.0)) <= 1e-10);
    CHECK(std::abs(eig[1] - Complex(-2.0, 0.0)) <= 1e-10);
    const std::vector<Complex> qr = spectrum_qr(planar());
    CHECK(multiset_distance(qr, eig) <= 1e-10);
}

TEST_CASE("spectrum of identity and triangular matrices") {
    for (int n = 1; n <= 6; ++n) {
        for (const Complex& z : spectrum(ComplexMatrix::Identity(n, n))) {
            CHECK(std::abs(z - 1.0) <= 1e-12);
        }
    }
    ComplexMatrix u = random_matrix(5, 2.0);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < i; ++j) {
            u(i, j) = 0.0;
        }
    }
    std::vector<Complex> diag;
    for (int i = 0; i < 5; ++i) {
        diag.push_back(u(i, i));
    }
    CHECK(multiset_distance(spectrum(u), diag) <= 1e-10);
}

TEST_CASE("spectrum is sorted by real then imaginary part") {
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<Complex> eig = spectrum(random_matrix(uniform_int(1, 6), 2.0));
        for (std::size_t i = 1; i < eig.size(); ++i) {
            const bool ordered = eig[i - 1].real() < eig[i].real() ||
                                 (eig[i - 1].real() == eig[i].real() && eig[i - 1].imag() <= eig[i].imag());
            CHECK(ordered);
        }
    }
}

TEST_CASE("closed form and QR spectra agree on 2x2") {
    for (int trial = 0; trial < 200; ++trial) {
        const ComplexMatrix a = random_matrix(uniform_int(1, 2), 3.0, trial % 2 == 0);
        CHECK(multiset_distance(spectrum_closed_form(a), spectrum_qr(a)) <= 1e-10);
    }
    CHECK_THROWS_AS(spectrum_closed_form(ComplexMatrix::Identity(3, 3)), DomainError);
}

TEST_CASE("spectrum of exp(A omega) is exp(omega spectrum(A))") {
    for (int trial = 0; trial < 40; ++trial) {
        const int n = uniform_int(1, 5);
        ComplexMatrix p = ComplexMatrix::Identity(n, n) + 0.3 * random_matrix(n, 1.0);
        ComplexMatrix d = ComplexMatrix::Zero(n, n);
        std::vector<Complex> lambdas;
        for (int i = 0; i < n; ++i) {
            d(i, i) = Complex(uniform(-2.0, 1.0), uniform(-2.0, 2.0));
            lambdas.push_back(d(i, i));
        }
        const ComplexMatrix a = p * d * p.inverse();
        const double omega = uniform(0.2, 1.5);
        std::vector<Complex> expected;
        for (const Complex& l : spectrum(a)) {
            expected.push_back(std::exp(omega * l));
        }
        CHECK(multiset_distance(spectrum(matrix_exponential(a, omega)), expected) <= 1e-8);
        CHECK(multiset_distance(spectrum(a), lambdas) <= 1e-8);
    }
}

TEST_CASE("induced norms") {
    for (NormKind k : {NormKind::L1, NormKind::L2, NormKind::LInf}) {
        CHECK(induced_norm(ComplexMatrix::Identity(3, 3), k) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(induced_norm(planar(), NormKind::L1) == 12.0);
    CHECK(induced_norm(planar(), NormKind::LInf) == 14.0);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    CHECK(induced_norm(d, NormKind::L2) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("L2 norm is bounded by the geometric mean of L1 and LINF norms") {
    for (int trial = 0; trial < 500; ++trial) {
        const ComplexMatrix a = random_matrix(2, 5.0);
        const double l2 = induced_norm(a, NormKind::L2);
        CHECK(l2 <= std::sqrt(induced_norm(a, NormKind::L1) * induced_norm(a, NormKind::LInf)) + 1e-12);
    }
}

TEST_CASE("vector norms and norm names") {
    ComplexVector v(3);
    v << Complex(3, 4), -1.0, Complex(0, -2);
    CHECK(vector_norm(v, NormKind::L1) == doctest::Approx(8.0));
    CHECK(vector_norm(v, NormKind::LInf) == doctest::Approx(5.0));
    CHECK(vector_norm(v, NormKind::L2) == doctest::Approx(std::sqrt(30.0)));
    CHECK(parse_norm_kind("L1") == NormKind::L1);
    CHECK(parse_norm_kind("linf") == NormKind::LInf);
    CHECK(parse_norm_kind(to_string(NormKind::L2)) == NormKind::L2);
    CHECK_THROWS_AS(parse_norm_kind("l3"), DomainError);
}

TEST_CASE("nonresonance resolvent of a scalar") {
    ComplexMatrix zero = ComplexMatrix::Zero(1, 1);
    const ComplexMatrix r = nonresonance_resolvent(zero, 1.0, Complex(2.0, 0.0));
    CHECK(std::abs(r(0, 0) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(nonresonance_resolvent(zero, 1.0, Complex(1.0, 0.0)), ResonanceError);
    try {
        nonresonance_resolvent(zero, 1.0, Complex(1.0, 0.0));
    } catch (const ResonanceError& e) {
        CHECK(std::abs(e.eigenvalue()) <= 1e-15);
        CHECK(e.distance() <= 1e-15);
    }
}

TEST_CASE("planar resolvent matches the closed form") {
    const double pi = std::numbers::pi;
    const double q = 2.0 * std::exp(4.0 * pi) / (1.0 + std::exp(4.0 * pi));
    const double q3 = 3.0 * std::exp(4.0 * pi) / (1.0 + std::exp(4.0 * pi));
    const double h = std::exp(pi) / std::cosh(pi);
    ComplexMatrix expected(2, 2);
    expected << q - 1.5 * h, h - q, q3 - 1.5 * h, h - q3;
    const ComplexMatrix r = nonresonance_resolvent(planar(), pi, Complex(-1.0, 0.0));
    CHECK(max_abs(r - expected) <= 1e-12);
}

TEST_CASE("commutation identity for random off-resonance instances") {
    int checked = 0;
    while (checked < 100) {
        const int n = uniform_int(1, 4);
        const ComplexMatrix a = random_matrix(n, 1.5);
        const double omega = uniform(0.1, 2.0);
        const Complex c = std::polar(uniform(0.5, 2.0), uniform(-3.1, 3.1));
        if (resonance_margin(a, omega, c).distance < 1e-3) {
            continue;
        }
        const ComplexMatrix r = nonresonance_resolvent(a, omega, c);
        const ComplexMatrix e = matrix_exponential(a, omega);
        const ComplexMatrix id = ComplexMatrix::Identity(n, n);
        CHECK(max_abs(c * r - e * r - id) <= 1e-10);
        CHECK(max_abs(c * r - r * e - id) <= 1e-10);
        ++checked;
    }
}

TEST_CASE("resonance margin") {
    const ResonanceMargin m = resonance_margin(planar(), std::numbers::pi, Complex(-1.0, 0.0));
    CHECK(m.distance == doctest::Approx(1.0 + std::exp(-4.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(std::abs(m.eigenvalue - Complex(-4.0, 0.0)) <= 1e-10);
}

TEST_CASE("integer powers of c") {
    const Complex c(-1.0, 0.0);
    CHECK(integer_power(c, 1) == c);
    CHECK(integer_power(c, -1) == c);
    CHECK(integer_power(c, 0) == Complex(1.0, 0.0));
    CHECK(integer_power(c, 7) == c);
    CHECK(integer_power(c, -4) == Complex(1.0, 0.0));
    for (int i = 0; i < 50; ++i) {
        const Complex z = std::polar(uniform(0.5, 1.5), uniform(-3.0, 3.0));
        const long k = uniform_int(-12, 12);
        CHECK(std::abs(integer_power(z, k) - std::pow(z, static_cast<double>(k))) <=
              1e-13 * std::abs(std::pow(z, static_cast<double>(k))));
    }
}
