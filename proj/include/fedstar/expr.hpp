// SPDX-License-Identifier: MIT
#pragma once

#include <cerrno>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "fedstar/error.hpp"
#include "fedstar/jet.hpp"
#include "fedstar/scalar.hpp"

namespace fedstar {

// Arithmetic expressions over chart coordinates.  Literals are decimal
// integers; rationals are spelled as quotients (e.g. 3/4) and the imaginary
// unit as i.  Coordinates are x1..x{2n} in a real chart and z1..zn, zb1..zbn
// in a complex chart.  Exponents are integer literals, optionally negated.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, ImagUnit, Coord, Add, Sub, Mul, Div, Neg, Pow };

    Kind kind;
    int line = 1;
    int col = 1;

    mpz_class num;      // Number
    std::string coord;  // Coord
    long expo = 0;      // Pow
    ExprPtr a, b;
};

namespace detail {

inline std::shared_ptr<Expr> expr_node(Expr::Kind kind, int line, int col) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->line = line;
    e->col = col;
    return e;
}

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
        int line = line_;
        int col = col_;
        if (pos_ >= src_.size()) return {Token::Kind::End, "", line, col};
        char c = src_[pos_];
        if (c >= '0' && c <= '9') {
            std::string text;
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
                text.push_back(src_[pos_]);
                ++pos_;
                ++col_;
            }
            return {Token::Kind::Number, text, line, col};
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            std::string text;
            while (pos_ < src_.size() &&
                   ((src_[pos_] >= 'a' && src_[pos_] <= 'z') ||
                    (src_[pos_] >= 'A' && src_[pos_] <= 'Z') ||
                    (src_[pos_] >= '0' && src_[pos_] <= '9') || src_[pos_] == '_')) {
                text.push_back(src_[pos_]);
                ++pos_;
                ++col_;
            }
            return {Token::Kind::Ident, text, line, col};
        }
        ++pos_;
        ++col_;
        switch (c) {
            case '+': return {Token::Kind::Plus, "+", line, col};
            case '-': return {Token::Kind::Minus, "-", line, col};
            case '*': return {Token::Kind::Star, "*", line, col};
            case '/': return {Token::Kind::Slash, "/", line, col};
            case '^': return {Token::Kind::Caret, "^", line, col};
            case '(': return {Token::Kind::LParen, "(", line, col};
            case ')': return {Token::Kind::RParen, ")", line, col};
            default: break;
        }
        throw parse_error("unexpected character '" + std::string(1, c) + "'", line, col);
    }

  private:
    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
  public:
    explicit Parser(const std::string& src) : lex_(src) { advance(); }

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        if (cur_.kind != Token::Kind::End)
            throw parse_error("unexpected token '" + cur_.text + "'", cur_.line, cur_.col);
        return e;
    }

  private:
    Lexer lex_;
    Token cur_;

    void advance() { cur_ = lex_.next(); }

    ExprPtr parse_sum() {
        ExprPtr left = parse_product();
        while (cur_.kind == Token::Kind::Plus || cur_.kind == Token::Kind::Minus) {
            bool plus = cur_.kind == Token::Kind::Plus;
            int line = cur_.line;
            int col = cur_.col;
            advance();
            auto node = expr_node(plus ? Expr::Kind::Add : Expr::Kind::Sub, line, col);
            node->a = left;
            node->b = parse_product();
            left = node;
        }
        return left;
    }

    ExprPtr parse_product() {
        ExprPtr left = parse_unary();
        while (cur_.kind == Token::Kind::Star || cur_.kind == Token::Kind::Slash) {
            bool mul = cur_.kind == Token::Kind::Star;
            int line = cur_.line;
            int col = cur_.col;
            advance();
            auto node = expr_node(mul ? Expr::Kind::Mul : Expr::Kind::Div, line, col);
            node->a = left;
            node->b = parse_unary();
            left = node;
        }
        return left;
    }

    ExprPtr parse_unary() {
        if (cur_.kind == Token::Kind::Minus) {
            int line = cur_.line;
            int col = cur_.col;
            advance();
            auto node = expr_node(Expr::Kind::Neg, line, col);
            node->a = parse_unary();
            return node;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (cur_.kind != Token::Kind::Caret) return base;
        int line = cur_.line;
        int col = cur_.col;
        advance();
        auto node = expr_node(Expr::Kind::Pow, line, col);
        node->a = base;
        node->expo = parse_exponent();
        return node;
    }

    long parse_exponent() {
        bool parenthesized = false;
        if (cur_.kind == Token::Kind::LParen) {
            parenthesized = true;
            advance();
        }
        bool negative = false;
        if (cur_.kind == Token::Kind::Minus) {
            negative = true;
            advance();
        }
        if (cur_.kind != Token::Kind::Number)
            throw parse_error("exponent must be an integer literal", cur_.line, cur_.col);
        errno = 0;
        long value = std::strtol(cur_.text.c_str(), nullptr, 10);
        if (errno != 0 || value > 1000000)
            throw parse_error("exponent out of range", cur_.line, cur_.col);
        advance();
        if (parenthesized) {
            if (cur_.kind != Token::Kind::RParen)
                throw parse_error("expected ')' after exponent", cur_.line, cur_.col);
            advance();
        }
        return negative ? -value : value;
    }

    ExprPtr parse_atom() {
        switch (cur_.kind) {
            case Token::Kind::Number: {
                auto node = expr_node(Expr::Kind::Number, cur_.line, cur_.col);
                node->num = mpz_class(cur_.text);
                advance();
                return node;
            }
            case Token::Kind::Ident: {
                if (cur_.text == "i") {
                    auto node = expr_node(Expr::Kind::ImagUnit, cur_.line, cur_.col);
                    advance();
                    return node;
                }
                auto node = expr_node(Expr::Kind::Coord, cur_.line, cur_.col);
                node->coord = cur_.text;
                advance();
                return node;
            }
            case Token::Kind::LParen: {
                advance();
                ExprPtr inner = parse_sum();
                if (cur_.kind != Token::Kind::RParen)
                    throw parse_error("expected ')'", cur_.line, cur_.col);
                advance();
                return inner;
            }
            case Token::Kind::End:
                throw parse_error("unexpected end of expression", cur_.line, cur_.col);
            default:
                throw parse_error("unexpected token '" + cur_.text + "'", cur_.line, cur_.col);
        }
    }
};

}  // namespace detail

inline ExprPtr parse_expr(const std::string& src) { return detail::Parser(src).parse(); }

// Fully parenthesized form; parsing it back yields a structurally equal tree.
inline std::string print_expr(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Number: return e->num.get_str();
        case Expr::Kind::ImagUnit: return "i";
        case Expr::Kind::Coord: return e->coord;
        case Expr::Kind::Add: return "(" + print_expr(e->a) + "+" + print_expr(e->b) + ")";
        case Expr::Kind::Sub: return "(" + print_expr(e->a) + "-" + print_expr(e->b) + ")";
        case Expr::Kind::Mul: return "(" + print_expr(e->a) + "*" + print_expr(e->b) + ")";
        case Expr::Kind::Div: return "(" + print_expr(e->a) + "/" + print_expr(e->b) + ")";
        case Expr::Kind::Neg: return "(-" + print_expr(e->a) + ")";
        case Expr::Kind::Pow:
            return "(" + print_expr(e->a) + "^" + std::to_string(e->expo) + ")";
    }
    throw structural_error("unknown expression node");
}

inline bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case Expr::Kind::Number: return x->num == y->num;
        case Expr::Kind::ImagUnit: return true;
        case Expr::Kind::Coord: return x->coord == y->coord;
        case Expr::Kind::Neg: return expr_equal(x->a, y->a);
        case Expr::Kind::Pow: return x->expo == y->expo && expr_equal(x->a, y->a);
        default: return expr_equal(x->a, y->a) && expr_equal(x->b, y->b);
    }
}

namespace detail {

// Resolves a coordinate name to a variable index for the given chart frame.
inline int coord_index(const std::string& name, Frame frame, int n, int line, int col) {
    auto bad = [&]() -> parse_error {
        std::string chart = frame == Frame::Real
                                ? "real chart with coordinates x1..x" + std::to_string(2 * n)
                                : "complex chart with coordinates z1..z" + std::to_string(n) +
                                      ", zb1..zb" + std::to_string(n);
        return parse_error("unknown coordinate '" + name + "' in " + chart, line, col);
    };
    auto parse_index = [&](std::size_t from, int lo, int hi) {
        if (from >= name.size()) throw bad();
        long v = 0;
        for (std::size_t k = from; k < name.size(); ++k) {
            char c = name[k];
            if (c < '0' || c > '9') throw bad();
            v = v * 10 + (c - '0');
            if (v > hi) throw bad();
        }
        if (v < lo || v > hi) throw bad();
        return static_cast<int>(v);
    };
    if (frame == Frame::Real) {
        if (name.size() < 2 || name[0] != 'x') throw bad();
        return parse_index(1, 1, 2 * n) - 1;
    }
    if (name.size() >= 3 && name[0] == 'z' && name[1] == 'b') return n + parse_index(2, 1, n) - 1;
    if (name.size() >= 2 && name[0] == 'z') return parse_index(1, 1, n) - 1;
    throw bad();
}

}  // namespace detail

// Lowers an expression to its Taylor jet at the chart base point.
inline Jet lower_expr(const ExprPtr& e, Frame frame, int n, const std::vector<Scalar>& base,
                      int order) {
    int dim = 2 * n;
    if (static_cast<int>(base.size()) != dim)
        throw structural_error("base point has " + std::to_string(base.size()) +
                               " components, chart needs " + std::to_string(dim));
    switch (e->kind) {
        case Expr::Kind::Number:
            return jet_const(dim, order, Scalar(Rat(e->num)));
        case Expr::Kind::ImagUnit:
            return jet_const(dim, order, Scalar::imag_unit());
        case Expr::Kind::Coord: {
            int v = detail::coord_index(e->coord, frame, n, e->line, e->col);
            return jet_coord(dim, order, v, base[static_cast<std::size_t>(v)]);
        }
        case Expr::Kind::Add:
            return jet_add(lower_expr(e->a, frame, n, base, order),
                           lower_expr(e->b, frame, n, base, order));
        case Expr::Kind::Sub:
            return jet_sub(lower_expr(e->a, frame, n, base, order),
                           lower_expr(e->b, frame, n, base, order));
        case Expr::Kind::Mul:
            return jet_mul(lower_expr(e->a, frame, n, base, order),
                           lower_expr(e->b, frame, n, base, order));
        case Expr::Kind::Div: {
            Jet denom = lower_expr(e->b, frame, n, base, order);
            if (jet_eval0(denom).is_zero())
                throw singularity_error("division by expression " + print_expr(e->b) +
                                        " vanishing at the base point");
            return jet_mul(lower_expr(e->a, frame, n, base, order), jet_invert(denom));
        }
        case Expr::Kind::Neg:
            return jet_neg(lower_expr(e->a, frame, n, base, order));
        case Expr::Kind::Pow: {
            Jet baseJet = lower_expr(e->a, frame, n, base, order);
            if (e->expo >= 0) return jet_pow(baseJet, e->expo);
            if (jet_eval0(baseJet).is_zero())
                throw singularity_error("negative power of expression " + print_expr(e->a) +
                                        " vanishing at the base point");
            return jet_pow(jet_invert(baseJet), -e->expo);
        }
    }
    throw structural_error("unknown expression node");
}

inline Jet lower_expr(const std::string& src, Frame frame, int n,
                      const std::vector<Scalar>& base, int order) {
    return lower_expr(parse_expr(src), frame, n, base, order);
}

namespace detail {

inline Scalar eval_scalar(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Number: return Scalar(Rat(e->num));
        case Expr::Kind::ImagUnit: return Scalar::imag_unit();
        case Expr::Kind::Coord:
            throw parse_error("coordinate '" + e->coord + "' not allowed in a constant expression",
                              e->line, e->col);
        case Expr::Kind::Add: return eval_scalar(e->a) + eval_scalar(e->b);
        case Expr::Kind::Sub: return eval_scalar(e->a) - eval_scalar(e->b);
        case Expr::Kind::Mul: return eval_scalar(e->a) * eval_scalar(e->b);
        case Expr::Kind::Div: {
            Scalar d = eval_scalar(e->b);
            if (d.is_zero())
                throw singularity_error("division by zero in constant expression " +
                                        print_expr(e->b));
            return eval_scalar(e->a) * d.inv();
        }
        case Expr::Kind::Neg: return -eval_scalar(e->a);
        case Expr::Kind::Pow: {
            Scalar b = eval_scalar(e->a);
            if (e->expo < 0 && b.is_zero())
                throw singularity_error("negative power of zero in constant expression " +
                                        print_expr(e->a));
            return b.pow_int(e->expo);
        }
    }
    throw structural_error("unknown expression node");
}

}  // namespace detail

// Evaluates a coordinate-free expression to an exact complex scalar.
inline Scalar eval_scalar_expr(const std::string& src) {
    return detail::eval_scalar(parse_expr(src));
}

}  // namespace fedstar
