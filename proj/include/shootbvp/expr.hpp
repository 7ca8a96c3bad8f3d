#pragma once

// Scalar expressions in the variables t, u, up (the first derivative of u).
// Problems define their right-hand side f(t, u, u') as one of these strings,
// so new ODEs need no recompilation.
//
// Grammar: standard infix with precedence ^ > unary minus > * / > + -,
// left-associative except ^ (right-associative). Functions: exp, ln, sin,
// cos, tan, sinh, cosh, tanh, sqrt, abs, pow(x, y). Constants: pi, e.
// pow(x, y) is an alias for x^y and parses to the same tree.
//
// Parsed expressions are immutable and may be evaluated concurrently.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shootbvp/detail/format.hpp"

namespace shootbvp::expr {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

enum class Variable { T, U, Up };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Exp, Ln, Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt, Abs };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Literal {
    double value;
};
struct VarRef {
    Variable var;
};
struct Negate {
    NodePtr operand;
};
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct Call {
    Func func;
    NodePtr arg;
};

struct Node {
    std::variant<Literal, VarRef, Negate, Binary, Call> kind;
};

class Expression {
public:
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    const Node& root() const { return *root_; }

    double operator()(double t, double u, double up) const;

private:
    NodePtr root_;
};

namespace parser_detail {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Kind kind;
    std::size_t offset;
    double number = 0.0;
    std::string_view text{};
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t at = pos_;
        if (pos_ >= src_.size()) return {Token::Kind::End, at};
        const char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return {Token::Kind::Plus, at};
            case '-': ++pos_; return {Token::Kind::Minus, at};
            case '*': ++pos_; return {Token::Kind::Star, at};
            case '/': ++pos_; return {Token::Kind::Slash, at};
            case '^': ++pos_; return {Token::Kind::Caret, at};
            case '(': ++pos_; return {Token::Kind::LParen, at};
            case ')': ++pos_; return {Token::Kind::RParen, at};
            case ',': ++pos_; return {Token::Kind::Comma, at};
            default: break;
        }
        if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1])))
            return lex_number(at);
        if (is_ident_start(c)) {
            std::size_t end = pos_;
            while (end < src_.size() && is_ident_char(src_[end])) ++end;
            Token tok{Token::Kind::Ident, at, 0.0, src_.substr(pos_, end - pos_)};
            pos_ = end;
            return tok;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", at);
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

    Token lex_number(std::size_t at) {
        std::size_t end = pos_;
        while (end < src_.size() && is_digit(src_[end])) ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && is_digit(src_[end])) ++end;
        }
        // exponent only when followed by digits (so "2*e" keeps the constant e)
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp_end = end + 1;
            if (exp_end < src_.size() && (src_[exp_end] == '+' || src_[exp_end] == '-')) ++exp_end;
            if (exp_end < src_.size() && is_digit(src_[exp_end])) {
                ++exp_end;
                while (exp_end < src_.size() && is_digit(src_[exp_end])) ++exp_end;
                end = exp_end;
            }
        }
        const std::string_view span = src_.substr(pos_, end - pos_);
        auto value = shootbvp::detail::parse_double(span);
        if (!value) throw ParseError("invalid number '" + std::string(span) + "'", at);
        pos_ = end;
        return {Token::Kind::Number, at, *value};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

inline const std::map<std::string_view, Func, std::less<>>& function_table() {
    static const std::map<std::string_view, Func, std::less<>> table = {
        {"exp", Func::Exp},   {"ln", Func::Ln},     {"sin", Func::Sin},  {"cos", Func::Cos},
        {"tan", Func::Tan},   {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
        {"tanh", Func::Tanh}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
    };
    return table;
}

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src), look_(lexer_.next()) {}

    NodePtr run() {
        NodePtr root = expression();
        if (look_.kind != Token::Kind::End)
            throw ParseError("unexpected trailing input", look_.offset);
        return root;
    }

private:
    template <class K>
    static NodePtr make_node(K&& k) {
        return std::make_shared<const Node>(Node{std::forward<K>(k)});
    }

    void advance() { look_ = lexer_.next(); }

    bool accept(Token::Kind k) {
        if (look_.kind != k) return false;
        advance();
        return true;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        while (look_.kind == Token::Kind::Plus || look_.kind == Token::Kind::Minus) {
            const BinaryOp op = look_.kind == Token::Kind::Plus ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            lhs = make_node(Binary{op, std::move(lhs), term()});
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (look_.kind == Token::Kind::Star || look_.kind == Token::Kind::Slash) {
            const BinaryOp op = look_.kind == Token::Kind::Star ? BinaryOp::Mul : BinaryOp::Div;
            advance();
            lhs = make_node(Binary{op, std::move(lhs), factor()});
        }
        return lhs;
    }

    NodePtr factor() {
        if (accept(Token::Kind::Minus)) return make_node(Negate{factor()});
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept(Token::Kind::Caret))
            return make_node(Binary{BinaryOp::Pow, std::move(base), factor()});
        return base;
    }

    NodePtr primary() {
        if (look_.kind == Token::Kind::Number) {
            const double value = look_.number;
            advance();
            return make_node(Literal{value});
        }
        if (accept(Token::Kind::LParen)) {
            NodePtr inner = expression();
            if (!accept(Token::Kind::RParen))
                throw ParseError("expected ')'", look_.offset);
            return inner;
        }
        if (look_.kind == Token::Kind::Ident) return identifier();
        throw ParseError("expected expression", look_.offset);
    }

    NodePtr identifier() {
        const std::string_view name = look_.text;
        const std::size_t at = look_.offset;
        advance();
        if (name == "t") return make_node(VarRef{Variable::T});
        if (name == "u") return make_node(VarRef{Variable::U});
        if (name == "up") return make_node(VarRef{Variable::Up});
        if (name == "pi") return make_node(Literal{std::numbers::pi});
        if (name == "e") return make_node(Literal{std::numbers::e});

        const bool is_pow = name == "pow";
        const auto& funcs = function_table();
        const auto it = funcs.find(name);
        if (!is_pow && it == funcs.end())
            throw ParseError("unknown identifier '" + std::string(name) + "'", at);
        if (!accept(Token::Kind::LParen))
            throw ParseError("expected '(' after function '" + std::string(name) + "'",
                             look_.offset);
        std::vector<NodePtr> args;
        args.push_back(expression());
        while (accept(Token::Kind::Comma)) args.push_back(expression());
        if (!accept(Token::Kind::RParen))
            throw ParseError("expected ')'", look_.offset);

        const std::size_t arity = is_pow ? 2 : 1;
        if (args.size() != arity)
            throw ParseError("function '" + std::string(name) + "' expects " +
                                 std::to_string(arity) + " argument" + (arity == 1 ? "" : "s") +
                                 ", got " + std::to_string(args.size()),
                             at);
        if (is_pow)
            return make_node(Binary{BinaryOp::Pow, std::move(args[0]), std::move(args[1])});
        return make_node(Call{it->second, std::move(args[0])});
    }

    Lexer lexer_;
    Token look_;
};

}  // namespace parser_detail

inline Expression parse(std::string_view source) {
    return Expression(parser_detail::Parser(source).run());
}

namespace eval_detail {

inline double eval(const Node& node, double t, double u, double up) {
    using shootbvp::detail::overloaded;
    return std::visit(
        overloaded{
            [](const Literal& lit) { return lit.value; },
            [&](const VarRef& ref) {
                switch (ref.var) {
                    case Variable::T: return t;
                    case Variable::U: return u;
                    default: return up;
                }
            },
            [&](const Negate& neg) { return -eval(*neg.operand, t, u, up); },
            [&](const Binary& bin) {
                const double lhs = eval(*bin.lhs, t, u, up);
                const double rhs = eval(*bin.rhs, t, u, up);
                switch (bin.op) {
                    case BinaryOp::Add: return lhs + rhs;
                    case BinaryOp::Sub: return lhs - rhs;
                    case BinaryOp::Mul: return lhs * rhs;
                    case BinaryOp::Div: return lhs / rhs;
                    default: return std::pow(lhs, rhs);
                }
            },
            [&](const Call& call) {
                const double x = eval(*call.arg, t, u, up);
                switch (call.func) {
                    case Func::Exp: return std::exp(x);
                    case Func::Ln: return std::log(x);
                    case Func::Sin: return std::sin(x);
                    case Func::Cos: return std::cos(x);
                    case Func::Tan: return std::tan(x);
                    case Func::Sinh: return std::sinh(x);
                    case Func::Cosh: return std::cosh(x);
                    case Func::Tanh: return std::tanh(x);
                    case Func::Sqrt: return std::sqrt(x);
                    default: return std::fabs(x);
                }
            },
        },
        node.kind);
}

}  // namespace eval_detail

// IEEE semantics throughout: domain violations and overflow yield non-finite
// values rather than errors, so callers detect divergence uniformly.
inline double evaluate(const Expression& e, double t, double u, double up) {
    return eval_detail::eval(e.root(), t, u, up);
}

inline double Expression::operator()(double t, double u, double up) const {
    return eval_detail::eval(*root_, t, u, up);
}

namespace print_detail {

inline int precedence(const Node& node) {
    using shootbvp::detail::overloaded;
    return std::visit(overloaded{
                          [](const Literal&) { return 5; },
                          [](const VarRef&) { return 5; },
                          [](const Call&) { return 5; },
                          [](const Binary& b) {
                              switch (b.op) {
                                  case BinaryOp::Pow: return 4;
                                  case BinaryOp::Mul:
                                  case BinaryOp::Div: return 2;
                                  default: return 1;
                              }
                          },
                          [](const Negate&) { return 3; },
                      },
                      node.kind);
}

inline const char* func_name(Func f) {
    switch (f) {
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Sinh: return "sinh";
        case Func::Cosh: return "cosh";
        case Func::Tanh: return "tanh";
        case Func::Sqrt: return "sqrt";
        default: return "abs";
    }
}

inline void print(const Node& node, std::string& out);

inline void print_child(const Node& child, bool parens, std::string& out) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
}

inline void print(const Node& node, std::string& out) {
    using shootbvp::detail::overloaded;
    std::visit(
        overloaded{
            [&](const Literal& lit) { out += shootbvp::detail::format_double(lit.value); },
            [&](const VarRef& ref) {
                switch (ref.var) {
                    case Variable::T: out += 't'; break;
                    case Variable::U: out += 'u'; break;
                    default: out += "up"; break;
                }
            },
            [&](const Negate& neg) {
                out += '-';
                const bool parens = precedence(*neg.operand) < 3 ||
                                    std::holds_alternative<Negate>(neg.operand->kind);
                print_child(*neg.operand, parens, out);
            },
            [&](const Binary& bin) {
                const int prec = precedence(node);
                const char* op = "";
                switch (bin.op) {
                    case BinaryOp::Add: op = "+"; break;
                    case BinaryOp::Sub: op = "-"; break;
                    case BinaryOp::Mul: op = "*"; break;
                    case BinaryOp::Div: op = "/"; break;
                    case BinaryOp::Pow: op = "^"; break;
                }
                if (bin.op == BinaryOp::Pow) {
                    // right-associative: parenthesize structural lhs chains
                    print_child(*bin.lhs, precedence(*bin.lhs) <= prec, out);
                    out += op;
                    print_child(*bin.rhs, precedence(*bin.rhs) < prec, out);
                } else {
                    print_child(*bin.lhs, precedence(*bin.lhs) < prec, out);
                    out += op;
                    print_child(*bin.rhs, precedence(*bin.rhs) <= prec, out);
                }
            },
            [&](const Call& call) {
                out += func_name(call.func);
                out += '(';
                print(*call.arg, out);
                out += ')';
            },
        },
        node.kind);
}

}  // namespace print_detail

// Minimal-parenthesis rendering; reparsing yields a structurally identical tree.
inline std::string to_string(const Expression& e) {
    std::string out;
    print_detail::print(e.root(), out);
    return out;
}

inline bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind.index() != b.kind.index()) return false;
    using shootbvp::detail::overloaded;
    return std::visit(
        overloaded{
            [&](const Literal& la) { return la.value == std::get<Literal>(b.kind).value; },
            [&](const VarRef& va) { return va.var == std::get<VarRef>(b.kind).var; },
            [&](const Negate& na) {
                return structurally_equal(*na.operand, *std::get<Negate>(b.kind).operand);
            },
            [&](const Binary& ba) {
                const auto& bb = std::get<Binary>(b.kind);
                return ba.op == bb.op && structurally_equal(*ba.lhs, *bb.lhs) &&
                       structurally_equal(*ba.rhs, *bb.rhs);
            },
            [&](const Call& ca) {
                const auto& cb = std::get<Call>(b.kind);
                return ca.func == cb.func && structurally_equal(*ca.arg, *cb.arg);
            },
        },
        a.kind);
}

inline bool structurally_equal(const Expression& a, const Expression& b) {
    return structurally_equal(a.root(), b.root());
}

}  // namespace shootbvp::expr
