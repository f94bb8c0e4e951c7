#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wcperiod/linalg.hpp"

namespace wcperiod::scenario {

class ExpressionParseError : public std::runtime_error {
public:
    ExpressionParseError(const std::string& what, std::size_t column)
        : std::runtime_error(what), column_(column) {}
    /// 1-based column in the expression text.
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class ExpressionEvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExpressionContext {
    int dimension = 0;                    // y1..yn, yk_re, yk_im
    std::map<std::string, double> params; // named constants (a, eta, ...)
};

/// Arithmetic over complex values: + - * / ^, unary minus, parentheses,
/// sin cos abs sqrt exp sech, literals pi and e, variables t, y1..yn, yk_re, yk_im.
/// ^ is right-associative and binds tighter than unary minus (-x^2 = -(x^2)).
class Expression {
public:
    static Expression parse(std::string_view text, const ExpressionContext& context);

    /// Throws ExpressionEvalError on division by zero.
    Complex evaluate(double t, const ComplexVector& y) const;
    /// Evaluation with no t or y (numeric scenario fields).
    Complex evaluate() const;

    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

/// Parses and evaluates a constant expression ("pi", "3*pi/4") to a real number.
double evaluate_constant(std::string_view text, const std::map<std::string, double>& params = {});

} // namespace wcperiod::scenario
