#include "scenario/expression.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace wcperiod::scenario {

enum class Op { Const, Time, Component, ComponentRe, ComponentIm, Neg, Add, Sub, Mul, Div, Pow, Func };
enum class Fn { Sin, Cos, Abs, Sqrt, Exp, Sech };

struct Expression::Node {
    Op op = Op::Const;
    Complex value{0.0, 0.0};
    int index = 0; // component, 0-based
    Fn fn = Fn::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    std::size_t column = 0;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char ch = s[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        Token tok;
        tok.column = i + 1;
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            std::size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) {
                ++j;
            }
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) {
                    ++k;
                }
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                        ++k;
                    }
                    j = k;
                }
            }
            tok.kind = Tok::Number;
            tok.text = std::string(s.substr(i, j - i));
            std::size_t used = 0;
            try {
                tok.number = std::stod(tok.text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.text.size()) {
                throw ExpressionParseError("malformed number '" + tok.text + "'", tok.column);
            }
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) {
                ++j;
            }
            tok.kind = Tok::Ident;
            tok.text = std::string(s.substr(i, j - i));
            i = j;
        } else {
            switch (ch) {
            case '+': tok.kind = Tok::Plus; break;
            case '-': tok.kind = Tok::Minus; break;
            case '*': tok.kind = Tok::Star; break;
            case '/': tok.kind = Tok::Slash; break;
            case '^': tok.kind = Tok::Caret; break;
            case '(': tok.kind = Tok::LParen; break;
            case ')': tok.kind = Tok::RParen; break;
            default:
                throw ExpressionParseError(std::string("unexpected character '") + ch + "'", tok.column);
            }
            tok.text = std::string(1, ch);
            ++i;
        }
        out.push_back(tok);
    }
    Token end;
    end.kind = Tok::End;
    end.column = s.size() + 1;
    out.push_back(end);
    return out;
}

NodePtr make_const(Complex v) {
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const ExpressionContext& context)
        : tokens_(std::move(tokens)), context_(context) {}

    NodePtr parse() {
        NodePtr root = expression(0);
        if (peek().kind != Tok::End) {
            fail_unexpected();
        }
        return root;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    [[noreturn]] void fail_unexpected() const {
        const Token& tok = peek();
        if (tok.kind == Tok::Number || tok.kind == Tok::Ident || tok.kind == Tok::LParen) {
            throw ExpressionParseError("implicit multiplication is not allowed; insert '*' before '" +
                                           tok.text + "'",
                                       tok.column);
        }
        if (tok.kind == Tok::End) {
            throw ExpressionParseError("unexpected end of expression", tok.column);
        }
        throw ExpressionParseError("unexpected '" + tok.text + "'", tok.column);
    }

    static int precedence(Tok kind) {
        switch (kind) {
        case Tok::Plus:
        case Tok::Minus: return 1;
        case Tok::Star:
        case Tok::Slash: return 2;
        case Tok::Caret: return 4;
        default: return -1;
        }
    }

    // precedence climbing; unary minus sits at level 3
    NodePtr expression(int min_prec) {
        NodePtr lhs = unary();
        for (;;) {
            const Tok kind = peek().kind;
            const int prec = precedence(kind);
            if (prec < 0 || prec < min_prec) {
                break;
            }
            next();
            const bool right_assoc = kind == Tok::Caret;
            NodePtr rhs = right_assoc ? power_operand() : expression(prec + 1);
            Op op = Op::Add;
            switch (kind) {
            case Tok::Plus: op = Op::Add; break;
            case Tok::Minus: op = Op::Sub; break;
            case Tok::Star: op = Op::Mul; break;
            case Tok::Slash: op = Op::Div; break;
            default: op = Op::Pow; break;
            }
            lhs = make_binary(op, lhs, rhs);
        }
        return lhs;
    }

    // right operand of ^: may carry its own unary minus (2^-1) and chains right
    NodePtr power_operand() {
        if (peek().kind == Tok::Minus) {
            next();
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Neg;
            n->lhs = power_operand();
            return n;
        }
        NodePtr base = primary();
        if (peek().kind == Tok::Caret) {
            next();
            return make_binary(Op::Pow, base, power_operand());
        }
        return base;
    }

    NodePtr unary() {
        if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
            const bool negate = next().kind == Tok::Minus;
            NodePtr operand = expression(3);
            if (!negate) {
                return operand;
            }
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Neg;
            n->lhs = operand;
            return n;
        }
        NodePtr base = primary();
        if (peek().kind == Tok::Caret) {
            next();
            base = make_binary(Op::Pow, base, power_operand());
        }
        return base;
    }

    NodePtr primary() {
        const Token tok = next();
        switch (tok.kind) {
        case Tok::Number:
            return make_const(Complex(tok.number, 0.0));
        case Tok::LParen: {
            NodePtr inner = expression(0);
            if (peek().kind != Tok::RParen) {
                if (peek().kind == Tok::End) {
                    throw ExpressionParseError("missing ')'", peek().column);
                }
                fail_unexpected();
            }
            next();
            return inner;
        }
        case Tok::Ident:
            return identifier(tok);
        case Tok::End:
            throw ExpressionParseError("unexpected end of expression", tok.column);
        default:
            throw ExpressionParseError("unexpected '" + tok.text + "'", tok.column);
        }
    }

    NodePtr identifier(const Token& tok) {
        static const std::map<std::string, Fn> functions = {
            {"sin", Fn::Sin}, {"cos", Fn::Cos}, {"abs", Fn::Abs},
            {"sqrt", Fn::Sqrt}, {"exp", Fn::Exp}, {"sech", Fn::Sech},
        };
        const std::string& name = tok.text;
        if (auto it = functions.find(name); it != functions.end()) {
            if (peek().kind != Tok::LParen) {
                throw ExpressionParseError("function '" + name + "' needs a parenthesized argument", peek().column);
            }
            next();
            NodePtr arg = expression(0);
            if (peek().kind != Tok::RParen) {
                if (peek().kind == Tok::End) {
                    throw ExpressionParseError("missing ')' after argument of '" + name + "'", peek().column);
                }
                fail_unexpected();
            }
            next();
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Func;
            n->fn = it->second;
            n->lhs = arg;
            return n;
        }
        if (name == "pi") {
            return make_const(Complex(std::numbers::pi, 0.0));
        }
        if (name == "e") {
            return make_const(Complex(std::numbers::e, 0.0));
        }
        if (name == "t") {
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Time;
            return n;
        }
        if (auto it = context_.params.find(name); it != context_.params.end()) {
            return make_const(Complex(it->second, 0.0));
        }
        if (name.size() >= 2 && name[0] == 'y' && std::isdigit(static_cast<unsigned char>(name[1]))) {
            std::size_t j = 1;
            while (j < name.size() && std::isdigit(static_cast<unsigned char>(name[j]))) {
                ++j;
            }
            const int index = std::stoi(name.substr(1, j - 1));
            const std::string suffix = name.substr(j);
            if (suffix.empty() || suffix == "_re" || suffix == "_im") {
                if (index < 1 || index > context_.dimension) {
                    throw ExpressionParseError("component '" + name + "' out of range for dimension " +
                                                   std::to_string(context_.dimension),
                                               tok.column);
                }
                auto n = std::make_shared<Expression::Node>();
                n->op = suffix.empty() ? Op::Component : (suffix == "_re" ? Op::ComponentRe : Op::ComponentIm);
                n->index = index - 1;
                return n;
            }
        }
        throw ExpressionParseError("unknown identifier '" + name + "'", tok.column);
    }

    std::vector<Token> tokens_;
    const ExpressionContext& context_;
    std::size_t pos_ = 0;
};

Complex eval(const Expression::Node& n, double t, const ComplexVector* y) {
    switch (n.op) {
    case Op::Const: return n.value;
    case Op::Time:
        if (std::isnan(t)) {
            throw ExpressionEvalError("t is not available in a constant expression");
        }
        return {t, 0.0};
    case Op::Component:
    case Op::ComponentRe:
    case Op::ComponentIm: {
        if (y == nullptr || n.index >= y->size()) {
            throw ExpressionEvalError("state component y" + std::to_string(n.index + 1) + " is not available");
        }
        const Complex v = (*y)(n.index);
        if (n.op == Op::ComponentRe) {
            return {v.real(), 0.0};
        }
        if (n.op == Op::ComponentIm) {
            return {v.imag(), 0.0};
        }
        return v;
    }
    case Op::Neg: return -eval(*n.lhs, t, y);
    case Op::Add: return eval(*n.lhs, t, y) + eval(*n.rhs, t, y);
    case Op::Sub: return eval(*n.lhs, t, y) - eval(*n.rhs, t, y);
    case Op::Mul: return eval(*n.lhs, t, y) * eval(*n.rhs, t, y);
    case Op::Div: {
        const Complex num = eval(*n.lhs, t, y);
        const Complex den = eval(*n.rhs, t, y);
        if (den == Complex(0.0, 0.0)) {
            throw ExpressionEvalError("division by zero");
        }
        return num / den;
    }
    case Op::Pow: {
        const Complex base = eval(*n.lhs, t, y);
        const Complex expo = eval(*n.rhs, t, y);
        if (expo.imag() == 0.0 && expo.real() == std::round(expo.real()) && std::abs(expo.real()) <= 64.0) {
            const int k = static_cast<int>(expo.real());
            if (k < 0 && base == Complex(0.0, 0.0)) {
                throw ExpressionEvalError("division by zero");
            }
            Complex result(1.0, 0.0);
            Complex factor = k < 0 ? 1.0 / base : base;
            for (int m = std::abs(k); m > 0; m >>= 1) {
                if (m & 1) {
                    result *= factor;
                }
                factor *= factor;
            }
            return result;
        }
        if (base.imag() == 0.0 && base.real() > 0.0 && expo.imag() == 0.0) {
            return {std::pow(base.real(), expo.real()), 0.0};
        }
        return std::pow(base, expo);
    }
    case Op::Func: {
        const Complex x = eval(*n.lhs, t, y);
        const bool real = x.imag() == 0.0;
        switch (n.fn) {
        case Fn::Sin: return real ? Complex(std::sin(x.real()), 0.0) : std::sin(x);
        case Fn::Cos: return real ? Complex(std::cos(x.real()), 0.0) : std::cos(x);
        case Fn::Abs: return {std::abs(x), 0.0};
        case Fn::Sqrt:
            return real && x.real() >= 0.0 ? Complex(std::sqrt(x.real()), 0.0) : std::sqrt(x);
        case Fn::Exp: return real ? Complex(std::exp(x.real()), 0.0) : std::exp(x);
        case Fn::Sech: {
            const Complex c = real ? Complex(std::cosh(x.real()), 0.0) : std::cosh(x);
            if (c == Complex(0.0, 0.0)) {
                throw ExpressionEvalError("division by zero");
            }
            return 1.0 / c;
        }
        }
        break;
    }
    }
    return {0.0, 0.0};
}

} // namespace

Expression Expression::parse(std::string_view text, const ExpressionContext& context) {
    Parser parser(tokenize(text), context);
    Expression expr;
    expr.text_ = std::string(text);
    expr.root_ = parser.parse();
    return expr;
}

Complex Expression::evaluate(double t, const ComplexVector& y) const {
    return eval(*root_, t, &y);
}

Complex Expression::evaluate() const {
    return eval(*root_, std::numeric_limits<double>::quiet_NaN(), nullptr);
}

double evaluate_constant(std::string_view text, const std::map<std::string, double>& params) {
    ExpressionContext context;
    context.params = params;
    const Expression expr = Expression::parse(text, context);
    const Complex v = expr.evaluate();
    if (v.imag() != 0.0) {
        throw ExpressionEvalError("expression '" + std::string(text) + "' is not real");
    }
    return v.real();
}

} // namespace wcperiod::scenario
