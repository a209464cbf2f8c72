#include "expr.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace finsler {

Expr make_literal(cplx value) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Literal;
    n->literal = value;
    return n;
}

Expr make_var_z(int index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::VarZ;
    n->var_index = index;
    return n;
}

Expr make_var_eta(int index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::VarEta;
    n->var_index = index;
    return n;
}

Expr make_unary(NodeKind kind, Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->a = std::move(a);
    return n;
}

Expr make_binary(NodeKind kind, Expr a, Expr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Expr make_pow(Expr a, long exponent) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Pow;
    n->a = std::move(a);
    n->exponent = exponent;
    return n;
}

namespace {

struct Token {
    enum Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End } type;
    std::string text;
    double number = 0.0;
    bool is_integer = false;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        Token t;
        t.offset = pos_;
        if (pos_ >= s_.size()) {
            t.type = Token::End;
            return t;
        }
        char c = s_[pos_];
        switch (c) {
            case '+': ++pos_; t.type = Token::Plus; return t;
            case '-': ++pos_; t.type = Token::Minus; return t;
            case '*': ++pos_; t.type = Token::Star; return t;
            case '/': ++pos_; t.type = Token::Slash; return t;
            case '^': ++pos_; t.type = Token::Caret; return t;
            case '(': ++pos_; t.type = Token::LParen; return t;
            case ')': ++pos_; t.type = Token::RParen; return t;
            case ',': ++pos_; t.type = Token::Comma; return t;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            bool has_dot = false;
            if (pos_ < s_.size() && s_[pos_] == '.') {
                has_dot = true;
                ++pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
            if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
                std::size_t mark = pos_;
                ++pos_;
                if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
                if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                } else {
                    pos_ = mark;
                }
            }
            t.type = Token::Number;
            t.text = s_.substr(start, pos_ - start);
            t.number = std::strtod(t.text.c_str(), nullptr);
            t.is_integer = !has_dot && t.text.find_first_of("eE") == std::string::npos;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            t.type = Token::Ident;
            t.text = s_.substr(start, pos_ - start);
            return t;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_, "");
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& s) : lexer_(s) { advance(); }

    Expr parse_all() {
        Expr e = parse_sum();
        if (cur_.type != Token::End)
            throw SyntaxError("trailing input", cur_.offset, "end of expression");
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    Expr parse_sum() {
        Expr lhs = parse_product();
        for (;;) {
            if (cur_.type == Token::Plus) {
                advance();
                lhs = make_binary(NodeKind::Add, lhs, parse_product());
            } else if (cur_.type == Token::Minus) {
                advance();
                lhs = make_binary(NodeKind::Sub, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_product() {
        Expr lhs = parse_unary();
        for (;;) {
            if (cur_.type == Token::Star) {
                advance();
                lhs = make_binary(NodeKind::Mul, lhs, parse_unary());
            } else if (cur_.type == Token::Slash) {
                advance();
                lhs = make_binary(NodeKind::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (cur_.type == Token::Minus) {
            advance();
            return make_unary(NodeKind::Neg, parse_unary());
        }
        if (cur_.type == Token::Plus) {
            advance();
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (cur_.type != Token::Caret) return base;
        advance();
        long e = parse_integer_exponent();
        return make_pow(base, e);
    }

    long parse_integer_exponent() {
        bool negative = false;
        if (cur_.type == Token::Minus) {
            negative = true;
            advance();
        }
        if (cur_.type != Token::Number || !cur_.is_integer)
            throw SyntaxError("exponent must be an integer literal", cur_.offset, "integer");
        long e = static_cast<long>(cur_.number);
        advance();
        return negative ? -e : e;
    }

    Expr parse_primary() {
        switch (cur_.type) {
            case Token::Number: {
                Expr e = make_literal(cplx(cur_.number, 0.0));
                advance();
                return e;
            }
            case Token::LParen: {
                advance();
                Expr e = parse_sum();
                expect(Token::RParen, ")");
                return e;
            }
            case Token::Ident: return parse_ident();
            default:
                throw SyntaxError("unexpected token", cur_.offset, "number, identifier or (");
        }
    }

    Expr parse_ident() {
        std::string name = cur_.text;
        std::size_t off = cur_.offset;
        advance();
        if (name == "i") return make_literal(cplx(0.0, 1.0));
        if (auto idx = variable_index(name, "z")) return make_var_z(*idx);
        if (auto idx = variable_index(name, "eta")) return make_var_eta(*idx);

        NodeKind fn;
        if (name == "conj") fn = NodeKind::Conj;
        else if (name == "abs2") fn = NodeKind::Abs2;
        else if (name == "sqrt") fn = NodeKind::Sqrt;
        else if (name == "exp") fn = NodeKind::Exp;
        else if (name == "log") fn = NodeKind::Log;
        else throw unknown_identifier(name);

        if (cur_.type != Token::LParen)
            throw SyntaxError("function '" + name + "' requires parenthesized argument", off, "(");
        advance();
        std::vector<Expr> args;
        args.push_back(parse_sum());
        while (cur_.type == Token::Comma) {
            advance();
            args.push_back(parse_sum());
        }
        expect(Token::RParen, ")");
        if (args.size() != 1) throw arity_error(name, 1, static_cast<int>(args.size()));
        return make_unary(fn, args[0]);
    }

    // Returns the 0-based index for names like z1/eta3; nullopt if the prefix
    // does not match or the suffix is not a positive integer.
    std::optional<int> variable_index(const std::string& name, const std::string& prefix) {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
            return std::nullopt;
        int idx = 0;
        for (std::size_t k = prefix.size(); k < name.size(); ++k) {
            if (!std::isdigit(static_cast<unsigned char>(name[k]))) return std::nullopt;
            idx = idx * 10 + (name[k] - '0');
        }
        if (idx < 1) return std::nullopt;
        return idx - 1;
    }

    void expect(Token::Type type, const std::string& what) {
        if (cur_.type != type) throw SyntaxError("unexpected token", cur_.offset, what);
        advance();
    }

    Lexer lexer_;
    Token cur_;
};

int precedence(NodeKind k) {
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

void print_rec(const Expr& e, std::ostream& os, int parent_prec) {
    int prec = precedence(e->kind);
    bool parens = prec < parent_prec;
    if (parens) os << '(';
    switch (e->kind) {
        case NodeKind::Literal: {
            double re = e->literal.real(), im = e->literal.imag();
            if (im == 0.0) {
                std::ostringstream tmp;
                tmp.precision(17);
                tmp << re;
                os << tmp.str();
            } else if (re == 0.0 && im == 1.0) {
                os << 'i';
            } else {
                std::ostringstream tmp;
                tmp.precision(17);
                tmp << '(' << re << "+i*" << im << ')';
                os << tmp.str();
            }
            break;
        }
        case NodeKind::VarZ: os << 'z' << (e->var_index + 1); break;
        case NodeKind::VarEta: os << "eta" << (e->var_index + 1); break;
        case NodeKind::Add:
            print_rec(e->a, os, 1);
            os << '+';
            print_rec(e->b, os, 2);
            break;
        case NodeKind::Sub:
            print_rec(e->a, os, 1);
            os << '-';
            print_rec(e->b, os, 2);
            break;
        case NodeKind::Mul:
            print_rec(e->a, os, 2);
            os << '*';
            print_rec(e->b, os, 3);
            break;
        case NodeKind::Div:
            print_rec(e->a, os, 2);
            os << '/';
            print_rec(e->b, os, 3);
            break;
        case NodeKind::Neg:
            os << '-';
            print_rec(e->a, os, 3);
            break;
        case NodeKind::Pow:
            print_rec(e->a, os, 5);
            os << '^' << e->exponent;
            break;
        case NodeKind::Conj:
        case NodeKind::Abs2:
        case NodeKind::Sqrt:
        case NodeKind::Exp:
        case NodeKind::Log: {
            const char* fn = e->kind == NodeKind::Conj   ? "conj"
                             : e->kind == NodeKind::Abs2 ? "abs2"
                             : e->kind == NodeKind::Sqrt ? "sqrt"
                             : e->kind == NodeKind::Exp  ? "exp"
                                                         : "log";
            os << fn << '(';
            print_rec(e->a, os, 0);
            os << ')';
            break;
        }
    }
    if (parens) os << ')';
}

} // namespace

Expr parse(const std::string& text) {
    if (text.empty()) throw SyntaxError("empty expression", 0, "expression");
    Parser p(text);
    return p.parse_all();
}

std::string print(const Expr& expr) {
    std::ostringstream os;
    print_rec(expr, os, 0);
    return os.str();
}

namespace {
void max_indices(const Expr& e, int& z, int& eta) {
    if (!e) return;
    if (e->kind == NodeKind::VarZ) z = std::max(z, e->var_index + 1);
    if (e->kind == NodeKind::VarEta) eta = std::max(eta, e->var_index + 1);
    max_indices(e->a, z, eta);
    max_indices(e->b, z, eta);
}
} // namespace

int max_z_index(const Expr& expr) {
    int z = 0, eta = 0;
    max_indices(expr, z, eta);
    return z;
}

int max_eta_index(const Expr& expr) {
    int z = 0, eta = 0;
    max_indices(expr, z, eta);
    return eta;
}

Expr substitute(const Expr& expr, const std::vector<Expr>& z_repl, const std::vector<Expr>& eta_repl) {
    switch (expr->kind) {
        case NodeKind::Literal: return expr;
        case NodeKind::VarZ:
            if (expr->var_index < static_cast<int>(z_repl.size()) && z_repl[expr->var_index])
                return z_repl[expr->var_index];
            return expr;
        case NodeKind::VarEta:
            if (expr->var_index < static_cast<int>(eta_repl.size()) && eta_repl[expr->var_index])
                return eta_repl[expr->var_index];
            return expr;
        case NodeKind::Pow:
            return make_pow(substitute(expr->a, z_repl, eta_repl), expr->exponent);
        default: {
            auto n = std::make_shared<ExprNode>(*expr);
            if (expr->a) n->a = substitute(expr->a, z_repl, eta_repl);
            if (expr->b) n->b = substitute(expr->b, z_repl, eta_repl);
            return n;
        }
    }
}

cplx eval_value(const Expr& e, const std::vector<cplx>& z, const std::vector<cplx>& eta) {
    if (z.size() != eta.size()) throw Error(ErrorKind::Shape, "z/eta dimension mismatch");
    std::vector<Jet<0>> zs(z.size()), es(eta.size());
    for (std::size_t k = 0; k < z.size(); ++k) zs[k] = Jet<0>(z[k]);
    for (std::size_t k = 0; k < eta.size(); ++k) es[k] = Jet<0>(eta[k]);
    EvalEnv<Jet<0>> env{zs.data(), es.data(), static_cast<int>(z.size())};
    return eval(e, env).v;
}

} // namespace finsler
