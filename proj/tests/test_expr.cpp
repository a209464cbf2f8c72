#include "expr.hpp"
#include "metric.hpp"

#include <doctest.h>

using namespace finsler;

namespace {

cplx ev(const Expr& e, std::vector<cplx> z, std::vector<cplx> eta) {
    return eval_value(e, std::move(z), std::move(eta));
}

} // namespace

TEST_CASE("parse builds the expected node structure") {
    Expr e = parse("z1*conj(z1)");
    REQUIRE(e->kind == NodeKind::Mul);
    CHECK(e->a->kind == NodeKind::VarZ);
    CHECK(e->a->var_index == 0);
    CHECK(e->b->kind == NodeKind::Conj);
    CHECK(e->b->a->kind == NodeKind::VarZ);

    CHECK_NOTHROW(parse("exp(2*(z1*conj(z1)+z2*conj(z2))/2)"));
}

TEST_CASE("precedence and associativity") {
    CHECK(ev(parse("2+3*4"), {cplx(0)}, {cplx(1)}) == cplx(14.0));
    CHECK(ev(parse("2*3+4"), {cplx(0)}, {cplx(1)}) == cplx(10.0));
    CHECK(ev(parse("2^3"), {cplx(0)}, {cplx(1)}) == cplx(8.0));
    CHECK(ev(parse("-2^2"), {cplx(0)}, {cplx(1)}) == cplx(-4.0)); // ^ binds tighter than unary -
    CHECK(ev(parse("8/4/2"), {cplx(0)}, {cplx(1)}) == cplx(1.0)); // left associative
    CHECK(ev(parse("2^-1"), {cplx(0)}, {cplx(1)}) == cplx(0.5));
    CHECK(ev(parse("i*i"), {cplx(0)}, {cplx(1)}) == cplx(-1.0));
    CHECK(ev(parse("abs2(3+4*i)"), {cplx(0)}, {cplx(1)}) == cplx(25.0));
}

TEST_CASE("fractional powers are rejected") {
    CHECK_THROWS_AS(parse("eta1^(1/2)"), SyntaxError);
    CHECK_THROWS_AS(parse("eta1^0.5"), SyntaxError);
}

TEST_CASE("syntax errors carry offsets and expectations") {
    try {
        parse("z1+*z2");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 3);
        CHECK(!e.expected.empty());
    }
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("(z1+z2"), SyntaxError);
    CHECK_THROWS_AS(parse("z1 z2"), SyntaxError);
}

TEST_CASE("unknown identifiers and arity") {
    try {
        parse("q1+z1");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownIdentifier);
    }
    try {
        parse("conj(z1,z2)");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Arity);
    }
    CHECK_THROWS_AS(parse("sqrt"), SyntaxError);
}

TEST_CASE("print/parse round trip evaluates identically") {
    const std::vector<std::string> sources = {
        "z1*conj(z1)+eta1*conj(eta2)",
        "exp((z1+z2)/2)-sqrt(abs2(eta1)+1)",
        "-z1^3*i+log(2+abs2(z2))",
        "(1+z2*conj(z2))/(1+z1*conj(z1)+z2*conj(z2))^2",
        "sqrt(abs2(eta1)^2+abs2(eta2)^2)",
    };
    Rng rng(7);
    for (const auto& src : sources) {
        Expr e = parse(src);
        Expr r = parse(print(e));
        for (int t = 0; t < 10; ++t) {
            std::vector<cplx> z = {rng.disc(0.8), rng.disc(0.8)};
            std::vector<cplx> eta = {rng.annulus(0.25, 1.0), rng.annulus(0.25, 1.0)};
            cplx a = ev(e, z, eta), b = ev(r, z, eta);
            CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("substitute rewrites variables") {
    Expr e = parse("z1*eta1+z2");
    std::vector<Expr> zr = {parse("z2"), parse("z1+1")};
    std::vector<Expr> er = {parse("2*eta2"), nullptr};
    Expr s = substitute(e, zr, er);
    // z1 -> z2, z2 -> z1+1, eta1 -> 2 eta2
    cplx v = ev(s, {cplx(3), cplx(5)}, {cplx(7), cplx(11)});
    CHECK(v == cplx(5.0 * 2.0 * 11.0 + 3.0 + 1.0));
}

TEST_CASE("unbound variables surface at evaluation") {
    Expr e = parse("z3");
    CHECK(max_z_index(e) == 3);
    try {
        ev(e, {cplx(0), cplx(0)}, {cplx(1), cplx(1)});
        FAIL("expected error");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::UnboundVariable);
    }
}
