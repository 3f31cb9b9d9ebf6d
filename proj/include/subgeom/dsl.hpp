#pragma once

// A minimal single-variable calculator language used for profile curves and curve
// components:
//
//     expr    := term (('+' | '-') term)*
//     term    := unary (('*' | '/') unary)*
//     unary   := '-' unary | power
//     power   := primary ('^' unary)?            right associative
//     primary := number | name | func '(' expr ')' | '(' expr ')'
//
// Functions: sin cos exp log sqrt. Named constant: pi. The first other identifier
// becomes the variable; any second distinct identifier is rejected.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "subgeom/error.hpp"
#include "subgeom/jet.hpp"

namespace subgeom::dsl {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Const;
    double value = 0.0;  // Const only
    NodePtr lhs;         // unary operand or left operand
    NodePtr rhs;         // right operand of binary ops
};

int arity(Op op) noexcept;
const char* function_name(Op op) noexcept;

NodePtr make_const(double v);
NodePtr make_var();
NodePtr make_unary(Op op, NodePtr arg);
NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs);

bool structurally_equal(const Node& a, const Node& b) noexcept;

/// Immutable parsed expression. Copies share the tree.
class Expr {
public:
    Expr() = default;
    Expr(NodePtr root, std::string variable) : root_(std::move(root)), variable_(std::move(variable)) {}

    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }
    /// Name of the variable symbol; empty for constant expressions.
    const std::string& variable() const noexcept { return variable_; }
    bool empty() const noexcept { return !root_; }

    double operator()(double x) const;

    friend bool operator==(const Expr& a, const Expr& b) noexcept {
        return a.root_ && b.root_ && structurally_equal(*a.root_, *b.root_);
    }

private:
    NodePtr root_;
    std::string variable_;
};

/// Parse `source`. When `variable` is nonempty only that identifier is accepted as
/// the variable, otherwise the first free identifier becomes the variable.
Expr parse(std::string_view source, std::string_view variable = {});

/// Render with minimal parentheses; parse(print(e)) is structurally equal to e.
std::string print(const Expr& e, std::string_view variable = {});

template <class T>
T eval_node(const Node& node, const T& x) {
    switch (node.op) {
        case Op::Const: return constant_like(x, node.value);
        case Op::Var: return x;
        case Op::Add: return eval_node(*node.lhs, x) + eval_node(*node.rhs, x);
        case Op::Sub: return eval_node(*node.lhs, x) - eval_node(*node.rhs, x);
        case Op::Mul: return eval_node(*node.lhs, x) * eval_node(*node.rhs, x);
        case Op::Div: {
            const T den = eval_node(*node.rhs, x);
            if (primal(den) == 0.0) throw DomainError("division by zero");
            return eval_node(*node.lhs, x) / den;
        }
        case Op::Pow:
            if (node.rhs->op == Op::Const) return pow_const(eval_node(*node.lhs, x), node.rhs->value);
            return pow(eval_node(*node.lhs, x), eval_node(*node.rhs, x));
        case Op::Neg: return -eval_node(*node.lhs, x);
        case Op::Sin: return sin(eval_node(*node.lhs, x));
        case Op::Cos: return cos(eval_node(*node.lhs, x));
        case Op::Exp: return exp(eval_node(*node.lhs, x));
        case Op::Log: return log(eval_node(*node.lhs, x));
        case Op::Sqrt: return sqrt(eval_node(*node.lhs, x));
    }
    throw DomainError("corrupt expression node");
}

/// Evaluate with any scalar type (double, Jet2Scalar, JetN) substituted for the variable.
template <class T>
T evaluate(const Expr& e, const T& x) {
    return eval_node(e.root(), x);
}

/// (u(x), u'(x), u''(x)).
Jet2Scalar eval_jet2(const Expr& e, double x);

}  // namespace subgeom::dsl
