#include "bifluid/expression.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <functional>

#include "bifluid/errors.hpp"

namespace bifluid {

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0)
{
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->value = value;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse()
    {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Op::add, lhs, term());
            else if (accept('-')) lhs = make(Op::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term()
    {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Op::mul, lhs, unary());
            else if (accept('/')) lhs = make(Op::div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary()
    {
        if (accept('-')) return make(Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    // right associative, binds tighter than unary minus on its left
    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^')) return make(Op::pow, base, unary());
        return base;
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            return make(Op::constant, nullptr, nullptr, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return make(Op::variable);
            if (name == "pi") return make(Op::constant, nullptr, nullptr, std::numbers::pi);
            static const std::pair<const char*, Op> funcs[] = {
                {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp}, {"log", Op::log},
                {"sqrt", Op::sqrt}, {"tanh", Op::tanh}, {"abs", Op::abs}};
            for (const auto& [fname, op] : funcs) {
                if (name == fname) {
                    if (!accept('(')) fail("expected '(' after " + name);
                    NodePtr arg = expr();
                    if (!accept(')')) fail("expected ')'");
                    return make(op, arg);
                }
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

bool depends_on_x(const Expression::Node& n)
{
    if (n.op == Op::variable) return true;
    return (n.lhs && depends_on_x(*n.lhs)) || (n.rhs && depends_on_x(*n.rhs));
}

} // namespace

Expression::Expression(double constant) : root_(make(Op::constant, nullptr, nullptr, constant))
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, constant);
    source_.assign(buf, end);
}

Expression Expression::parse(const std::string& text)
{
    Expression e;
    e.root_ = Parser(text).parse();
    e.source_ = text;
    return e;
}

bool Expression::is_constant() const { return !depends_on_x(*root_); }

} // namespace bifluid
