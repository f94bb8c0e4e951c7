#include "wcperiod/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "wcperiod/errors.hpp"

namespace wcperiod {

namespace {

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double derivative = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            derivative = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        derivative = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    rule.at_minus_one.resize(rule.nodes.size());
    rule.at_plus_one.resize(rule.nodes.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        double lm = 1.0;
        double lp = 1.0;
        for (std::size_t r = 0; r < rule.nodes.size(); ++r) {
            if (r != q) {
                lm *= (-1.0 - rule.nodes[r]) / (rule.nodes[q] - rule.nodes[r]);
                lp *= (1.0 - rule.nodes[r]) / (rule.nodes[q] - rule.nodes[r]);
            }
        }
        rule.at_minus_one[q] = lm;
        rule.at_plus_one[q] = lp;
    }
    return rule;
}

struct Panel {
    double integral = 0.0;
    double left = 0.0;  // interpolant of the node values extrapolated to a
    double right = 0.0; // ... and to b
};

Panel gauss_panel(const std::function<double(double)>& f, double a, double b, const GaussRule& rule) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Panel panel;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double value = f(mid + half * rule.nodes[q]);
        panel.integral += rule.weights[q] * value;
        panel.left += rule.at_minus_one[q] * value;
        panel.right += rule.at_plus_one[q] * value;
    }
    panel.integral *= half;
    return panel;
}

// A kink between an endpoint and the outermost node is invisible to both the panel
// and its halves, so the node interpolant must also reproduce the endpoint values.
bool endpoints_consistent(const Panel& panel, double fa, double fb, const AdaptiveGaussOptions& options) {
    const auto close = [&](double predicted, double actual) {
        return std::abs(predicted - actual) <= options.abs_tol + 1e-9 * std::abs(actual);
    };
    return close(panel.left, fa) && close(panel.right, fb);
}

double adaptive_panel(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                      const Panel& whole, const GaussRule& rule, const AdaptiveGaussOptions& options,
                      int depth) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    const Panel left = gauss_panel(f, a, mid, rule);
    const Panel right = gauss_panel(f, mid, b, rule);
    const double refined = left.integral + right.integral;
    const double tol = std::max(options.abs_tol * (b - a), options.rel_tol * std::abs(refined));
    const bool converged = std::abs(refined - whole.integral) <= tol &&
                           endpoints_consistent(left, fa, fm, options) &&
                           endpoints_consistent(right, fm, fb, options);
    if (converged || depth >= options.max_depth) {
        return refined;
    }
    return adaptive_panel(f, a, mid, fa, fm, left, rule, options, depth + 1) +
           adaptive_panel(f, mid, b, fm, fb, right, rule, options, depth + 1);
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) {
        throw DomainError("gauss_legendre: n must be >= 1");
    }
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_rule(n)).first;
    }
    return it->second;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           const AdaptiveGaussOptions& options) {
    if (options.panels < 1 || options.nodes_per_panel < 1) {
        throw DomainError("integrate_composite: panels and nodes_per_panel must be positive");
    }
    if (b <= a) {
        return 0.0;
    }
    const GaussRule& rule = gauss_legendre(options.nodes_per_panel);
    const double width = (b - a) / options.panels;
    double total = 0.0;
    for (int p = 0; p < options.panels; ++p) {
        const double lo = a + p * width;
        const double hi = (p + 1 == options.panels) ? b : a + (p + 1) * width;
        total += adaptive_panel(f, lo, hi, f(lo), f(hi), gauss_panel(f, lo, hi, rule), rule, options, 0);
    }
    return total;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace wcperiod
