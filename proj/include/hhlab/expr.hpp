#pragma once

/**
 * @file expr.hpp
 * @brief A small expression language for positive functions of one variable.
 *
 * Grammar (whitespace ignored between tokens):
 *
 *     expr    := term (('+' | '-') term)*
 *     term    := unary (('*' | '/') unary)*
 *     unary   := '-' unary | power
 *     power   := primary ('^' unary)?          right associative
 *     primary := number | 'x' | func '(' expr ')' | '(' expr ')'
 *     func    := 'exp' | 'ln' | 'sqrt' | 'abs'
 *
 * Numbers are decimal with an optional exponent ("2", ".5", "1e-3").
 * Evaluation refuses anything that would leave the reals or overflow.
 */

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>

#include "hhlab/error.hpp"
#include "hhlab/numfmt.hpp"

namespace hhlab {

enum class NodeKind { Constant, Variable, Neg, Exp, Ln, Sqrt, Abs, Add, Sub, Mul, Div, Pow };

inline constexpr int arity(NodeKind k) {
    switch (k) {
        case NodeKind::Constant:
        case NodeKind::Variable: return 0;
        case NodeKind::Neg:
        case NodeKind::Exp:
        case NodeKind::Ln:
        case NodeKind::Sqrt:
        case NodeKind::Abs: return 1;
        default: return 2;
    }
}

inline const char* node_name(NodeKind k) {
    switch (k) {
        case NodeKind::Constant: return "constant";
        case NodeKind::Variable: return "x";
        case NodeKind::Neg: return "neg";
        case NodeKind::Exp: return "exp";
        case NodeKind::Ln: return "ln";
        case NodeKind::Sqrt: return "sqrt";
        case NodeKind::Abs: return "abs";
        case NodeKind::Add: return "+";
        case NodeKind::Sub: return "-";
        case NodeKind::Mul: return "*";
        case NodeKind::Div: return "/";
        case NodeKind::Pow: return "^";
    }
    return "?";
}

class ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree node. Build through the factory functions.
class ExprNode {
public:
    NodeKind kind() const { return kind_; }
    double value() const { return value_; }
    const ExprPtr& lhs() const { return lhs_; }
    const ExprPtr& rhs() const { return rhs_; }

    static ExprPtr constant(double v) {
        if (!std::isfinite(v)) throw DomainError("expression constants must be finite");
        return ExprPtr(new ExprNode(NodeKind::Constant, v, nullptr, nullptr));
    }
    static ExprPtr variable() { return ExprPtr(new ExprNode(NodeKind::Variable, 0.0, nullptr, nullptr)); }
    static ExprPtr unary(NodeKind k, ExprPtr arg) {
        if (arity(k) != 1 || !arg) throw DomainError(std::string("bad unary node ") + node_name(k));
        return ExprPtr(new ExprNode(k, 0.0, std::move(arg), nullptr));
    }
    static ExprPtr binary(NodeKind k, ExprPtr l, ExprPtr r) {
        if (arity(k) != 2 || !l || !r) throw DomainError(std::string("bad binary node ") + node_name(k));
        return ExprPtr(new ExprNode(k, 0.0, std::move(l), std::move(r)));
    }

private:
    ExprNode(NodeKind k, double v, ExprPtr l, ExprPtr r)
        : kind_(k), value_(v), lhs_(std::move(l)), rhs_(std::move(r)) {}

    NodeKind kind_;
    double value_;
    ExprPtr lhs_, rhs_;
};

/// Structural equality; constants compare by exact value.
inline bool same_structure(const ExprNode& a, const ExprNode& b) {
    if (a.kind() != b.kind()) return false;
    switch (arity(a.kind())) {
        case 0: return a.kind() != NodeKind::Constant || a.value() == b.value();
        case 1: return same_structure(*a.lhs(), *b.lhs());
        default: return same_structure(*a.lhs(), *b.lhs()) && same_structure(*a.rhs(), *b.rhs());
    }
}

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : src_(src) {}

    ExprPtr parse() {
        if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
            throw SyntaxError(0, "an expression");
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw SyntaxError(pos_, "operator or end of input");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr left = term();
        for (;;) {
            if (accept('+')) left = ExprNode::binary(NodeKind::Add, left, term());
            else if (accept('-')) left = ExprNode::binary(NodeKind::Sub, left, term());
            else return left;
        }
    }

    ExprPtr term() {
        ExprPtr left = unary();
        for (;;) {
            if (accept('*')) left = ExprNode::binary(NodeKind::Mul, left, unary());
            else if (accept('/')) left = ExprNode::binary(NodeKind::Div, left, unary());
            else return left;
        }
    }

    ExprPtr unary() {
        if (accept('-')) return ExprNode::unary(NodeKind::Neg, unary());
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (accept('^')) return ExprNode::binary(NodeKind::Pow, base, unary());
        return base;
    }

    ExprPtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError(pos_, "number, 'x', function call, '(' or '-'");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            ExprPtr inner = expr();
            if (!accept(')')) throw SyntaxError(pos_, "')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            const std::string name(src_.substr(start, pos_ - start));
            if (name == "x") return ExprNode::variable();
            NodeKind k;
            if (name == "exp") k = NodeKind::Exp;
            else if (name == "ln") k = NodeKind::Ln;
            else if (name == "sqrt") k = NodeKind::Sqrt;
            else if (name == "abs") k = NodeKind::Abs;
            else throw UnknownIdentifierError(start, name);
            if (!accept('(')) throw SyntaxError(pos_, "'(' after function name '" + name + "'");
            ExprPtr arg = expr();
            if (!accept(')')) throw SyntaxError(pos_, "')'");
            return ExprNode::unary(k, arg);
        }
        throw SyntaxError(pos_, "number, 'x', function call, '(' or '-'");
    }

    ExprPtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
            return n;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) throw SyntaxError(start, "digits");
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) throw SyntaxError(pos_, "exponent digits");
        }
        const std::string text(src_.substr(start, pos_ - start));
        const double v = std::strtod(text.c_str(), nullptr);
        if (!std::isfinite(v)) throw SyntaxError(start, "a finite numeric literal");
        return ExprNode::constant(v);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// Binding strength used by the printer; mirrors the grammar levels.
inline int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

inline void print_into(const ExprNode& n, std::string& out);

inline void print_child(const ExprNode& child, bool parens, std::string& out) {
    if (parens) out += '(';
    print_into(child, out);
    if (parens) out += ')';
}

inline void print_into(const ExprNode& n, std::string& out) {
    const int p = precedence(n.kind());
    switch (n.kind()) {
        case NodeKind::Constant: {
            // Negative constants never come out of the parser; keep them
            // printable anyway.
            const bool neg = std::signbit(n.value());
            if (neg) out += "(0-";
            out += format_real(std::abs(n.value()));
            if (neg) out += ')';
            return;
        }
        case NodeKind::Variable: out += 'x'; return;
        case NodeKind::Neg:
            out += '-';
            print_child(*n.lhs(), precedence(n.lhs()->kind()) < p, out);
            return;
        case NodeKind::Exp:
        case NodeKind::Ln:
        case NodeKind::Sqrt:
        case NodeKind::Abs:
            out += node_name(n.kind());
            print_child(*n.lhs(), true, out);
            return;
        case NodeKind::Pow:
            // base must be a primary; exponent may be any unary
            print_child(*n.lhs(), precedence(n.lhs()->kind()) < 5, out);
            out += '^';
            print_child(*n.rhs(), precedence(n.rhs()->kind()) < 3, out);
            return;
        default:
            print_child(*n.lhs(), precedence(n.lhs()->kind()) < p, out);
            out += node_name(n.kind());
            print_child(*n.rhs(), precedence(n.rhs()->kind()) <= p, out);
            return;
    }
}

}  // namespace detail

/// Parses `source` into an expression tree.
/// Throws SyntaxError (with byte offset) or UnknownIdentifierError.
inline ExprPtr parse_expr(std::string_view source) { return detail::ExprParser(source).parse(); }

/// Prints with minimal parentheses; parse_expr(print_expr(e)) rebuilds e.
inline std::string print_expr(const ExprNode& e) {
    std::string out;
    detail::print_into(e, out);
    return out;
}

namespace detail {

[[noreturn]] inline void eval_fail(EvaluationError::Kind kind, const ExprNode& n, double x, const std::string& why) {
    throw EvaluationError(kind, "cannot evaluate '" + print_expr(n) + "' at x = " + format_real(x) + ": " + why);
}

inline double eval_node(const ExprNode& n, double x) {
    using K = NodeKind;
    double v = 0.0;
    switch (n.kind()) {
        case K::Constant: return n.value();
        case K::Variable: return x;
        case K::Neg: return -eval_node(*n.lhs(), x);
        case K::Abs: return std::abs(eval_node(*n.lhs(), x));
        case K::Exp: v = std::exp(eval_node(*n.lhs(), x)); break;
        case K::Ln: {
            const double a = eval_node(*n.lhs(), x);
            if (!(a > 0.0)) eval_fail(EvaluationError::Kind::Domain, n, x, "logarithm of non-positive value");
            return std::log(a);
        }
        case K::Sqrt: {
            const double a = eval_node(*n.lhs(), x);
            if (a < 0.0) eval_fail(EvaluationError::Kind::Domain, n, x, "square root of negative value");
            return std::sqrt(a);
        }
        case K::Add: v = eval_node(*n.lhs(), x) + eval_node(*n.rhs(), x); break;
        case K::Sub: v = eval_node(*n.lhs(), x) - eval_node(*n.rhs(), x); break;
        case K::Mul: v = eval_node(*n.lhs(), x) * eval_node(*n.rhs(), x); break;
        case K::Div: {
            const double num = eval_node(*n.lhs(), x);
            const double den = eval_node(*n.rhs(), x);
            if (den == 0.0) eval_fail(EvaluationError::Kind::Domain, n, x, "division by zero");
            v = num / den;
            break;
        }
        case K::Pow: {
            const double base = eval_node(*n.lhs(), x);
            const double ex = eval_node(*n.rhs(), x);
            if (base < 0.0 && ex != std::trunc(ex))
                eval_fail(EvaluationError::Kind::Domain, n, x, "non-integer power of negative base");
            if (base == 0.0 && ex < 0.0)
                eval_fail(EvaluationError::Kind::Domain, n, x, "negative power of zero");
            v = std::pow(base, ex);
            break;
        }
    }
    if (!std::isfinite(v)) eval_fail(EvaluationError::Kind::Overflow, n, x, "result is not finite");
    return v;
}

}  // namespace detail

/// Evaluates `e` at `x`. Throws EvaluationError instead of producing NaN or
/// infinity.
inline double eval_expr(const ExprNode& e, double x) { return detail::eval_node(e, x); }

}  // namespace hhlab
