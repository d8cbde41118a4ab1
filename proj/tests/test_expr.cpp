// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "fedstar/expr.hpp"

using namespace fedstar;

TEST_CASE("print then parse is the identity") {
    for (const char* s : {"x1^2*x2 - 3/4", "-(z1+i*zb1)^3", "1/(1+z1*zb1)", "2^-2", "x1^(-3)",
                          "((x1))", "-x1^2", "1 + 2*3^2"}) {
        auto e = parse_expr(s);
        auto p = print_expr(e);
        auto e2 = parse_expr(p);
        CHECK(expr_equal(e, e2));
        CHECK(print_expr(e2) == p);
    }
}

TEST_CASE("precedence") {
    SECTION("unary minus binds looser than the power") {
        auto e = parse_expr("-x1^2");
        REQUIRE(e->kind == Expr::Kind::Neg);
        CHECK(e->a->kind == Expr::Kind::Pow);
    }
    SECTION("products bind tighter than sums") {
        CHECK(eval_scalar_expr("1+2*3").re == rat(7));
        CHECK(eval_scalar_expr("1+2*3^2").re == rat(19));
    }
    SECTION("left associativity of subtraction and division") {
        CHECK(eval_scalar_expr("10-3-2").re == rat(5));
        CHECK(eval_scalar_expr("12/3/2").re == rat(2));
    }
}

TEST_CASE("constant evaluation over gaussian rationals") {
    CHECK(eval_scalar_expr("(1+2*i)/5") == Scalar(rat(1, 5), rat(2, 5)));
    CHECK(eval_scalar_expr("2^-2").re == rat(1, 4));
    CHECK(eval_scalar_expr("-3/4").re == rat(-3, 4));
    CHECK(eval_scalar_expr("i*i").re == rat(-1));
    CHECK(eval_scalar_expr("(1+i)^4").re == rat(-4));
}

TEST_CASE("lowering to jets at a base point") {
    SECTION("real chart") {
        std::vector<Scalar> base{Scalar(rat(3)), Scalar(rat(5))};
        Jet j = lower_expr("x1^2*x2", Frame::Real, 1, base, 3);
        CHECK(jet_eval0(j) == Scalar(rat(45)));
        CHECK(jet_eval0(jet_partial(j, 0)) == Scalar(rat(30)));
        CHECK(jet_eval0(jet_partial(j, 1)) == Scalar(rat(9)));
    }
    SECTION("complex chart with a rational function") {
        std::vector<Scalar> base{Scalar(rat(1, 2)), Scalar(rat(1, 2))};
        Jet j = lower_expr("1/(1+z1*zb1)", Frame::Complex, 1, base, 4);
        CHECK(jet_eval0(j) == Scalar(rat(4, 5)));
        // d/dz of 1/(1+z zbar) = -zbar/(1+z zbar)^2
        CHECK(jet_eval0(jet_partial(j, 0)) == Scalar(rat(-8, 25)));
    }
    SECTION("negative powers go through the jet inverse") {
        std::vector<Scalar> base{Scalar(rat(2)), Scalar::zero()};
        Jet j = lower_expr("x1^-2", Frame::Real, 1, base, 3);
        CHECK(jet_eval0(j) == Scalar(rat(1, 4)));
    }
}

TEST_CASE("parse errors carry one-based positions") {
    try {
        parse_expr("x1 +");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 1);
        CHECK(e.column == 5);
    }
    try {
        parse_expr("1 +\n 2 *");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 5);
    }
    CHECK_THROWS_AS(parse_expr("x1 ^ x2"), parse_error);
    CHECK_THROWS_AS(parse_expr("(x1"), parse_error);
    CHECK_THROWS_AS(parse_expr("x1 $ x2"), parse_error);
}

TEST_CASE("semantic errors") {
    std::vector<Scalar> base{Scalar::zero(), Scalar::zero()};
    CHECK_THROWS_AS(lower_expr("1/x1", Frame::Real, 1, base, 2), singularity_error);
    CHECK_THROWS_AS(lower_expr("x1^-1", Frame::Real, 1, base, 2), singularity_error);
    CHECK_THROWS_AS(lower_expr("y1", Frame::Real, 1, base, 2), parse_error);
    CHECK_THROWS_AS(lower_expr("x3", Frame::Real, 1, base, 2), parse_error);
    CHECK_THROWS_AS(lower_expr("x1", Frame::Complex, 1, base, 2), parse_error);
    CHECK_THROWS_AS(lower_expr("zb2", Frame::Complex, 1, base, 2), parse_error);
    CHECK_THROWS_AS(lower_expr("z0", Frame::Complex, 1, base, 2), parse_error);
    CHECK_THROWS_AS(eval_scalar_expr("x1+1"), parse_error);
    CHECK_THROWS_AS(eval_scalar_expr("1/0"), singularity_error);
}
