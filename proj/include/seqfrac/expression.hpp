#pragma once

// Arithmetic expressions in x and t for user-supplied initial data and sources.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Names: x, t, alpha, beta, pi. Functions: sin, cos, exp, sqrt, abs, gamma.

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>

#include "seqfrac/errors.hpp"
#include "seqfrac/gamma.hpp"

namespace seqfrac {

struct ExprVars {
    double x = 0.0, t = 0.0, alpha = 0.0, beta = 0.0;
};

class Expression {
public:
    using Node = std::function<double(const ExprVars&)>;

    static Expression parse(const std::string& text)
    {
        Parser p{text, 0};
        Expression e;
        e.text_ = text;
        e.root_ = p.expr();
        p.skip();
        if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
        return e;
    }

    double operator()(const ExprVars& v) const { return root_(v); }
    const std::string& text() const { return text_; }

private:
    struct Parser {
        const std::string& s;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& what) const
        {
            throw DomainError("expression '" + s + "': " + what + " at position " + std::to_string(pos));
        }
        void skip()
        {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c)
        {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        Node expr()
        {
            Node lhs = term();
            for (;;) {
                if (eat('+')) lhs = [a = lhs, b = term()](const ExprVars& v) { return a(v) + b(v); };
                else if (eat('-')) lhs = [a = lhs, b = term()](const ExprVars& v) { return a(v) - b(v); };
                else return lhs;
            }
        }
        Node term()
        {
            Node lhs = unary();
            for (;;) {
                if (eat('*')) lhs = [a = lhs, b = unary()](const ExprVars& v) { return a(v) * b(v); };
                else if (eat('/')) lhs = [a = lhs, b = unary()](const ExprVars& v) { return a(v) / b(v); };
                else return lhs;
            }
        }
        Node unary()
        {
            if (eat('-')) return [a = unary()](const ExprVars& v) { return -a(v); };
            if (eat('+')) return unary();
            return power();
        }
        Node power()
        {
            Node base = primary();
            if (eat('^')) return [a = base, b = unary()](const ExprVars& v) { return std::pow(a(v), b(v)); };
            return base;
        }
        Node primary()
        {
            skip();
            if (pos >= s.size()) fail("unexpected end");
            if (eat('(')) {
                Node e = expr();
                if (!eat(')')) fail("missing ')'");
                return e;
            }
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                const double value = std::stod(s.substr(pos), &used);
                pos += used;
                return [value](const ExprVars&) { return value; };
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                const std::size_t start = pos;
                while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
                const std::string name = s.substr(start, pos - start);
                if (eat('(')) {
                    Node arg = expr();
                    if (!eat(')')) fail("missing ')'");
                    return function(name, std::move(arg));
                }
                if (name == "x") return [](const ExprVars& v) { return v.x; };
                if (name == "t") return [](const ExprVars& v) { return v.t; };
                if (name == "alpha") return [](const ExprVars& v) { return v.alpha; };
                if (name == "beta") return [](const ExprVars& v) { return v.beta; };
                if (name == "pi") return [](const ExprVars&) { return std::numbers::pi; };
                fail("unknown name '" + name + "'");
            }
            fail("unexpected '" + std::string(1, c) + "'");
        }
        Node function(const std::string& name, Node a)
        {
            using F = double (*)(double);
            static const std::map<std::string, F> table{
                {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
                {"exp", [](double v) { return std::exp(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
                {"abs", [](double v) { return std::fabs(v); }},  {"gamma", [](double v) { return gamma_fn(v); }},
            };
            const auto it = table.find(name);
            if (it == table.end()) fail("unknown function '" + name + "'");
            return [f = it->second, a = std::move(a)](const ExprVars& v) { return f(a(v)); };
        }
    };

    std::string text_;
    Node root_;
};

} // namespace seqfrac
