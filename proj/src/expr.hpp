#pragma once

#include "errors.hpp"
#include "jet.hpp"

#include <memory>
#include <string>
#include <vector>

namespace finsler {

// Expression AST for metric ingredients. Variables are z1..zn and eta1..etan;
// `i` is the imaginary unit. Powers are integer-only; |x|^2 is the abs2 node.
enum class NodeKind {
    Literal,
    VarZ,
    VarEta,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Conj,
    Abs2,
    Sqrt,
    Exp,
    Log,
};

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    cplx literal{};       // Literal
    int var_index = 0;    // VarZ/VarEta, 0-based
    long exponent = 0;    // Pow
    Expr a, b;            // children
};

Expr make_literal(cplx value);
Expr make_var_z(int index);
Expr make_var_eta(int index);
Expr make_unary(NodeKind kind, Expr a);
Expr make_binary(NodeKind kind, Expr a, Expr b);
Expr make_pow(Expr a, long exponent);

// Parses the expression grammar: precedence ^ > unary- > {*,/} > {+,-},
// left-associative except ^ (right). Throws SyntaxError / unknown_identifier /
// arity_error.
Expr parse(const std::string& text);

// Prints with minimal parentheses; print(parse(t)) reparses equivalently.
std::string print(const Expr& expr);

// Largest variable index referenced, per group (0 when absent); used to check
// expressions against a declared dimension.
int max_z_index(const Expr& expr);
int max_eta_index(const Expr& expr);

// Substitutes variables by expressions (index-based; nullptr keeps the
// variable). Used for linear holomorphic coordinate changes.
Expr substitute(const Expr& expr, const std::vector<Expr>& z_repl, const std::vector<Expr>& eta_repl);

// ---- evaluation over jets -------------------------------------------------

// env: slots [0..n) hold z variables, [n..2n) hold eta variables.
template <class S>
struct EvalEnv {
    const S* z = nullptr;
    const S* eta = nullptr;
    int n = 0;
};

template <class S>
S eval(const Expr& e, const EvalEnv<S>& env) {
    switch (e->kind) {
        case NodeKind::Literal: return S::constant(e->literal);
        case NodeKind::VarZ:
            if (e->var_index >= env.n)
                throw Error(ErrorKind::UnboundVariable,
                            "variable z" + std::to_string(e->var_index + 1) + " exceeds dimension " +
                                std::to_string(env.n));
            return env.z[e->var_index];
        case NodeKind::VarEta:
            if (e->var_index >= env.n)
                throw Error(ErrorKind::UnboundVariable,
                            "variable eta" + std::to_string(e->var_index + 1) + " exceeds dimension " +
                                std::to_string(env.n));
            return env.eta[e->var_index];
        case NodeKind::Add: return eval(e->a, env) + eval(e->b, env);
        case NodeKind::Sub: return eval(e->a, env) - eval(e->b, env);
        case NodeKind::Mul: return eval(e->a, env) * eval(e->b, env);
        case NodeKind::Div: return eval(e->a, env) / eval(e->b, env);
        case NodeKind::Neg: return -eval(e->a, env);
        case NodeKind::Pow: return ipow(eval(e->a, env), e->exponent);
        case NodeKind::Conj: return conj(eval(e->a, env));
        case NodeKind::Abs2: {
            S x = eval(e->a, env);
            return x * conj(x);
        }
        case NodeKind::Sqrt: return sqrt(eval(e->a, env));
        case NodeKind::Exp: return exp(eval(e->a, env));
        case NodeKind::Log: return log(eval(e->a, env));
    }
    throw Error(ErrorKind::BadArgument, "corrupt expression node");
}

// Plain complex evaluation.
cplx eval_value(const Expr& e, const std::vector<cplx>& z, const std::vector<cplx>& eta);

} // namespace finsler
