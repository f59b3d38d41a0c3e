#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "bifluid/dual.hpp"

namespace bifluid {

/// Scalar profile f(x) parsed from text such as `1 + 0.2*sin(2*pi*x)`.
///
/// Grammar: numbers, `x`, `pi`, `+ - * / ^`, parentheses and the functions
/// sin, cos, exp, log, sqrt, tanh, abs. Evaluation is templated on the scalar so a
/// dual number yields the exact derivative.
class Expression {
public:
    Expression() : Expression(0.0) {}
    explicit Expression(double constant);
    /// Throws ConfigError with the offending column on malformed input.
    static Expression parse(const std::string& text);

    template <class Scalar>
    Scalar operator()(const Scalar& x) const
    {
        return eval<Scalar>(*root_, x);
    }

    /// f'(x) by forward-mode differentiation.
    double derivative(double x) const
    {
        return (*this)(Dual<double>(x, 1.0)).eps;
    }

    bool is_constant() const;
    const std::string& source() const { return source_; }

    enum class Op { constant, variable, add, sub, mul, div, pow, neg, sin, cos, exp, log, sqrt, tanh, abs };
    struct Node {
        Op op = Op::constant;
        double value = 0.0;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

private:
    template <class Scalar>
    static Scalar eval(const Node& n, const Scalar& x)
    {
        using std::cos, std::exp, std::log, std::sin, std::sqrt, std::tanh, std::pow, std::abs;
        switch (n.op) {
        case Op::constant: return Scalar(n.value);
        case Op::variable: return x;
        case Op::add: return eval(*n.lhs, x) + eval(*n.rhs, x);
        case Op::sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
        case Op::mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
        case Op::div: return eval(*n.lhs, x) / eval(*n.rhs, x);
        case Op::pow:
            if (n.rhs->op == Op::constant) return pow(eval(*n.lhs, x), n.rhs->value);
            return pow(eval(*n.lhs, x), eval(*n.rhs, x));
        case Op::neg: return -eval(*n.lhs, x);
        case Op::sin: return sin(eval(*n.lhs, x));
        case Op::cos: return cos(eval(*n.lhs, x));
        case Op::exp: return exp(eval(*n.lhs, x));
        case Op::log: return log(eval(*n.lhs, x));
        case Op::sqrt: return sqrt(eval(*n.lhs, x));
        case Op::tanh: return tanh(eval(*n.lhs, x));
        case Op::abs: return abs(eval(*n.lhs, x));
        }
        return Scalar(0.0);
    }

    std::shared_ptr<const Node> root_;
    std::string source_;
};

} // namespace bifluid
