#include "subgeom/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace subgeom::dsl {

int arity(Op op) noexcept {
    switch (op) {
        case Op::Const:
        case Op::Var: return 0;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow: return 2;
        default: return 1;
    }
}

const char* function_name(Op op) noexcept {
    switch (op) {
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        default: return nullptr;
    }
}

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

NodePtr make_var() {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    return n;
}

NodePtr make_unary(Op op, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(arg);
    return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool structurally_equal(const Node& a, const Node& b) noexcept {
    if (a.op != b.op) return false;
    switch (arity(a.op)) {
        case 0: return a.op != Op::Const || a.value == b.value;
        case 1: return structurally_equal(*a.lhs, *b.lhs);
        default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
}

double Expr::operator()(double x) const { return evaluate(*this, x); }

namespace {

class Parser {
public:
    Parser(std::string_view src, std::string_view variable) : src_(src), variable_(variable) {}

    Expr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        NodePtr root = expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return Expr(std::move(root), std::string(variable_));
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            lhs = make_binary(c == '+' ? Op::Add : Op::Sub, std::move(lhs), term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (char c = peek(); c == '*' || c == '/'; c = peek()) {
            ++pos_;
            lhs = make_binary(c == '*' ? Op::Mul : Op::Div, std::move(lhs), unary());
        }
        return lhs;
    }

    NodePtr unary() {
        if (peek() == '-') {
            ++pos_;
            return make_unary(Op::Neg, unary());
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (peek() == '^') {
            ++pos_;
            return make_binary(Op::Pow, std::move(base), unary());
        }
        return base;
    }

    NodePtr primary() {
        const char c = peek();
        const std::size_t start = pos_;
        if (c == '\0') throw ParseError("unexpected end of input", pos_);
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
            const std::string_view name = src_.substr(pos_, end - pos_);
            pos_ = end;
            if (const Op fn = lookup_function(name); fn != Op::Const) {
                if (peek() != '(') throw ParseError("expected '(' after function name", pos_);
                ++pos_;
                NodePtr arg = expr();
                if (peek() != ')') throw ParseError("expected ')'", pos_);
                ++pos_;
                return make_unary(fn, std::move(arg));
            }
            if (name == "pi") return make_const(3.14159265358979323846);
            if (variable_.empty()) variable_ = name;
            if (name != variable_) throw UnknownIdentifierError(std::string(name), start);
            return make_var();
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        double v = 0.0;
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr == first) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(ptr - first);
        return make_const(v);
    }

    static Op lookup_function(std::string_view name) {
        if (name == "sin") return Op::Sin;
        if (name == "cos") return Op::Cos;
        if (name == "exp") return Op::Exp;
        if (name == "log") return Op::Log;
        if (name == "sqrt") return Op::Sqrt;
        return Op::Const;
    }

    std::string_view src_;
    std::string_view variable_;
    std::size_t pos_ = 0;
};

// Binding strength used by the printer: higher binds tighter.
int precedence(Op op) {
    switch (op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    // inf/nan never come out of the parser
    return s;
}

void print_node(const Node& n, std::string_view var, std::string& out) {
    auto wrap = [&](const Node& child, bool paren) {
        if (paren) out += '(';
        print_node(child, var, out);
        if (paren) out += ')';
    };
    switch (n.op) {
        case Op::Const:
            if (n.value < 0.0 || std::signbit(n.value)) {
                out += "(-" + format_number(-n.value) + ")";
            } else {
                out += format_number(n.value);
            }
            return;
        case Op::Var: out += var; return;
        case Op::Neg:
            out += '-';
            // "--x" is fine; a Neg operand only needs parens below unary precedence
            wrap(*n.lhs, precedence(n.lhs->op) < precedence(Op::Neg));
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            const int p = precedence(n.op);
            wrap(*n.lhs, precedence(n.lhs->op) < p);
            out += n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
            // left associative: equal precedence on the right needs parens
            wrap(*n.rhs, precedence(n.rhs->op) <= p);
            return;
        }
        case Op::Pow:
            wrap(*n.lhs, precedence(n.lhs->op) <= precedence(Op::Pow));
            out += '^';
            // exponent is parsed as a unary expression
            wrap(*n.rhs, precedence(n.rhs->op) < precedence(Op::Neg));
            return;
        default:
            out += function_name(n.op);
            wrap(*n.lhs, true);
            return;
    }
}

}  // namespace

Expr parse(std::string_view source, std::string_view variable) {
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (static_cast<unsigned char>(source[i]) > 127) throw ParseError("non-ASCII character", i);
    }
    return Parser(source, variable).run();
}

std::string print(const Expr& e, std::string_view variable) {
    std::string out;
    const std::string_view var = !variable.empty() ? variable : (!e.variable().empty() ? std::string_view(e.variable()) : "x");
    print_node(e.root(), var, out);
    return out;
}

Jet2Scalar eval_jet2(const Expr& e, double x) {
    const Jet2Scalar r = evaluate(e, Jet2Scalar::variable(x));
    if (!std::isfinite(r.value) || !std::isfinite(r.d1) || !std::isfinite(r.d2)) {
        throw DomainError("expression is not finite at the requested point");
    }
    return r;
}

}  // namespace subgeom::dsl
