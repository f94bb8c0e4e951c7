#include "wcperiod/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "wcperiod/errors.hpp"

namespace wcperiod {

namespace {

void sort_eigenvalues(std::vector<Complex>& values) {
    std::sort(values.begin(), values.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) {
            return x.real() < y.real();
        }
        return x.imag() < y.imag();
    });
}

bool all_finite(const ComplexMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

std::string_view to_string(NormKind kind) {
    switch (kind) {
    case NormKind::L1:
        return "l1";
    case NormKind::L2:
        return "l2";
    case NormKind::LInf:
        return "linf";
    }
    return "l2";
}

NormKind parse_norm_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "l1") {
        return NormKind::L1;
    }
    if (lower == "l2") {
        return NormKind::L2;
    }
    if (lower == "linf") {
        return NormKind::LInf;
    }
    throw DomainError("unknown norm '" + std::string(name) + "' (expected l1, l2 or linf)");
}

void require_finite_square(const ComplexMatrix& a, std::string_view what) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw DomainError(std::string(what) + " must be square and non-empty");
    }
    if (!all_finite(a)) {
        throw DomainError(std::string(what) + " has non-finite entries");
    }
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a, double t) {
    require_finite_square(a, "matrix_exponential argument");
    if (!std::isfinite(t)) {
        throw DomainError("matrix_exponential: t must be finite");
    }
    if (t == 0.0) {
        return ComplexMatrix::Identity(a.rows(), a.cols());
    }
    ComplexMatrix scaled = a * t;
    ComplexMatrix result = scaled.exp();
    if (!all_finite(result)) {
        throw OverflowError("matrix_exponential: result overflows double precision");
    }
    return result;
}

std::vector<Complex> spectrum_closed_form(const ComplexMatrix& a) {
    require_finite_square(a, "spectrum argument");
    if (a.rows() == 1) {
        return {a(0, 0)};
    }
    if (a.rows() != 2) {
        throw DomainError("closed-form spectrum only for dim <= 2");
    }
    // lambda = m +- sqrt(m^2 - det) with m = tr/2; written as m +- sqrt(((a-d)/2)^2 + bc)
    // to avoid cancellation for nearly equal diagonal entries.
    const Complex m = 0.5 * (a(0, 0) + a(1, 1));
    const Complex half_gap = 0.5 * (a(0, 0) - a(1, 1));
    const Complex root = std::sqrt(half_gap * half_gap + a(0, 1) * a(1, 0));
    std::vector<Complex> values{m + root, m - root};
    sort_eigenvalues(values);
    return values;
}

std::vector<Complex> spectrum_qr(const ComplexMatrix& a, int max_iterations_per_eigenvalue) {
    require_finite_square(a, "spectrum argument");
    Eigen::ComplexSchur<ComplexMatrix> schur(a.rows());
    schur.setMaxIterations(static_cast<Eigen::Index>(max_iterations_per_eigenvalue) * a.rows());
    schur.compute(a, /*computeU=*/false);
    if (schur.info() != Eigen::Success) {
        throw ConvergenceError("spectrum: shifted QR iteration did not converge");
    }
    const ComplexMatrix& t = schur.matrixT();
    std::vector<Complex> values(static_cast<std::size_t>(t.rows()));
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        values[static_cast<std::size_t>(i)] = t(i, i);
    }
    sort_eigenvalues(values);
    return values;
}

std::vector<Complex> spectrum(const ComplexMatrix& a) {
    if (a.rows() <= 2 && a.rows() == a.cols()) {
        return spectrum_closed_form(a);
    }
    return spectrum_qr(a);
}

double vector_norm(const ComplexVector& v, NormKind kind) {
    switch (kind) {
    case NormKind::L1: {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            sum += std::abs(v(i));
        }
        return sum;
    }
    case NormKind::L2:
        return v.norm();
    case NormKind::LInf: {
        double best = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            best = std::max(best, std::abs(v(i)));
        }
        return best;
    }
    }
    return v.norm();
}

double induced_norm(const ComplexMatrix& a, NormKind kind) {
    require_finite_square(a, "induced_norm argument");
    switch (kind) {
    case NormKind::L1:
        return a.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::LInf:
        return a.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::L2: {
        if (a.rows() == 1) {
            return std::abs(a(0, 0));
        }
        Eigen::JacobiSVD<ComplexMatrix> svd(a);
        return svd.singularValues()(0);
    }
    }
    return 0.0;
}

ResonanceMargin resonance_margin(const ComplexMatrix& a, double omega, Complex c) {
    ResonanceMargin best{std::numeric_limits<double>::infinity(), Complex{}};
    for (const Complex& lambda : spectrum(a)) {
        const double distance = std::abs(c - std::exp(omega * lambda));
        if (distance < best.distance) {
            best = {distance, lambda};
        }
    }
    return best;
}

ComplexMatrix nonresonance_resolvent(const ComplexMatrix& a, double omega, Complex c,
                                     double margin_tol) {
    require_finite_square(a, "nonresonance_resolvent argument");
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError("nonresonance_resolvent: omega must be positive and finite");
    }
    if (c == Complex{0.0, 0.0}) {
        throw DomainError("nonresonance_resolvent: c must be nonzero");
    }
    const ResonanceMargin margin = resonance_margin(a, omega, c);
    if (margin.distance < margin_tol) {
        std::ostringstream msg;
        msg << "resonance: c = " << c << " is within " << margin.distance
            << " of exp(omega * lambda) for lambda = " << margin.eigenvalue;
        throw ResonanceError(msg.str(), margin.eigenvalue, margin.distance);
    }
    const Eigen::Index n = a.rows();
    const ComplexMatrix shifted =
        c * ComplexMatrix::Identity(n, n) - matrix_exponential(a, omega);
    Eigen::FullPivLU<ComplexMatrix> lu(shifted);
    if (!lu.isInvertible()) {
        throw SingularityError("nonresonance_resolvent: cI - exp(A omega) is numerically singular");
    }
    ComplexMatrix inverse = lu.inverse();
    if (!all_finite(inverse)) {
        throw SingularityError("nonresonance_resolvent: inverse is not finite");
    }
    return inverse;
}

Complex integer_power(Complex c, long k) {
    Complex base = k < 0 ? 1.0 / c : c;
    unsigned long e = k < 0 ? 0UL - static_cast<unsigned long>(k) : static_cast<unsigned long>(k);
    Complex out(1.0, 0.0);
    while (e != 0) {
        if (e & 1UL) {
            out *= base;
        }
        base *= base;
        e >>= 1;
    }
    return out;
}

} // namespace wcperiod
