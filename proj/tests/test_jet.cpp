// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "fedstar/jet.hpp"
#include "oracles.hpp"

using namespace fedstar;
using oracles::Poly;

TEST_CASE("monomial packing round trips") {
    Mono m = 3 * mono_unit(0) + 7 * mono_unit(2) + 1 * mono_unit(5);
    CHECK(mono_exp(m, 0) == 3);
    CHECK(mono_exp(m, 1) == 0);
    CHECK(mono_exp(m, 2) == 7);
    CHECK(mono_exp(m, 5) == 1);
    CHECK(mono_degree(m) == 11);
    Mono out = 0;
    CHECK(mono_sub(m, mono_unit(2), out));
    CHECK(out == 3 * mono_unit(0) + 6 * mono_unit(2) + mono_unit(5));
    CHECK(!mono_sub(m, 2 * mono_unit(5), out));
}

TEST_CASE("binomial table matches factorial ratio") {
    auto fact = [](unsigned k) {
        Rat f(1);
        for (unsigned j = 2; j <= k; ++j) f *= j;
        return f;
    };
    for (unsigned n = 0; n <= 12; ++n)
        for (unsigned k = 0; k <= n; ++k)
            CHECK(Rat(long(binom_u64(n, k))) == fact(n) / (fact(k) * fact(n - k)));
}

TEST_CASE("inverse of 1+u has raw coefficients (-1)^k k!") {
    Jet a = jet_add(jet_const(2, 5, Scalar::one()), jet_coord(2, 5, 0, Scalar::zero()));
    Jet b = jet_invert(a);
    CHECK(jet_mul(a, b) == jet_const(2, 5, Scalar::one()));
    Rat f(1);
    for (long k = 1; k <= 5; ++k) {
        f *= k;
        Scalar want = Scalar(k % 2 ? Rat(-f) : f);
        CHECK(b.c.at(Mono(k) * mono_unit(0)) == want);
    }
}

TEST_CASE("product and partial match polynomial calculus") {
    oracles::Rng rng(42);
    for (int trial = 0; trial < 8; ++trial) {
        int dim = 2 + (trial % 2);
        Poly p = oracles::random_poly(dim, 3, rng);
        Poly q = oracles::random_poly(dim, 3, rng);
        std::vector<Scalar> base(static_cast<std::size_t>(dim));
        for (auto& s : base) s = oracles::random_rational(rng);
        int order = 5;
        Jet jp = oracles::to_jet(p, order, base);
        Jet jq = oracles::to_jet(q, order, base);
        CHECK(jet_mul(jp, jq) == oracles::to_jet(p * q, order, base));
        CHECK(jet_add(jp, jq) == oracles::to_jet(p + q, order, base));
        for (int v = 0; v < dim; ++v)
            CHECK(jet_partial(jp, unsigned(v)) == oracles::to_jet(oracles::partial(p, v), order - 1, base));
        CHECK(jet_eval0(jp) == oracles::eval(p, base));
    }
}

TEST_CASE("inverse is the exact reciprocal under the verified product") {
    oracles::Rng rng(7);
    int ran = 0;
    for (int trial = 0; trial < 6; ++trial) {
        Poly p = oracles::random_poly(2, 3, rng) + Poly::constant(2, Scalar(rat(17)));
        std::vector<Scalar> base{oracles::random_rational(rng), oracles::random_rational(rng)};
        if (oracles::eval(p, base).is_zero()) continue;
        ++ran;
        Jet jp = oracles::to_jet(p, 6, base);
        Jet inv = jet_invert(jp);
        CHECK(jet_mul(jp, inv) == jet_const(2, 6, Scalar::one()));
        CHECK(jet_invert(inv) == jp);
    }
    CHECK(ran >= 4);
}

TEST_CASE("integer powers") {
    Jet a = jet_add(jet_const(2, 6, Scalar(rat(2))), jet_coord(2, 6, 1, Scalar::zero()));
    Jet cube = jet_pow(a, 3);
    CHECK(cube == jet_mul(a, jet_mul(a, a)));
    CHECK(jet_pow(a, 0) == jet_const(2, 6, Scalar::one()));
}

TEST_CASE("conjugation") {
    SECTION("real frame conjugates coefficients in place") {
        Jet a = jet_scale(jet_coord(2, 3, 0, Scalar(rat(2))), Scalar::imag_unit());
        Jet c = jet_conjugate(a, Frame::Real);
        CHECK(c.c.at(mono_unit(0)) == Scalar(Rat(0), Rat(-1)));
        CHECK(jet_conjugate(c, Frame::Real) == a);
    }
    SECTION("complex frame swaps holomorphic and antiholomorphic variables") {
        Scalar z0(Rat(1), Rat(2));
        Jet z = jet_coord(2, 3, 0, z0);
        Jet zb = jet_conjugate(z, Frame::Complex);
        CHECK(jet_eval0(zb) == z0.conj());
        CHECK(zb.c.count(mono_unit(1)) == 1);
        CHECK(jet_conjugate(zb, Frame::Complex) == z);
    }
    SECTION("multiplicative") {
        oracles::Rng rng(11);
        Poly p = oracles::random_poly(2, 3, rng);
        Poly q = oracles::random_poly(2, 3, rng);
        std::vector<Scalar> base{Scalar(rat(1, 3), rat(1, 5)), Scalar(rat(1, 3), rat(-1, 5))};
        Jet jp = oracles::to_jet(p, 4, base);
        Jet jq = oracles::to_jet(q, 4, base);
        for (Frame fr : {Frame::Real, Frame::Complex})
            CHECK(jet_conjugate(jet_mul(jp, jq), fr) ==
                  jet_mul(jet_conjugate(jp, fr), jet_conjugate(jq, fr)));
    }
}

TEST_CASE("truncation and order bookkeeping") {
    Jet a = jet_coord(2, 4, 0, Scalar::one());
    Jet t = jet_truncate(a, 2);
    CHECK(t.order == 2);
    CHECK(jet_truncate(a, 4).order == 4);
    CHECK_THROWS_AS(jet_truncate(a, 9), structural_error);  // never raises the reliable order
    Jet d = jet_partial(a, 0);
    CHECK(d.order == 3);
    CHECK(jet_eval0(d) == Scalar::one());
}

TEST_CASE("strict operand matching and budgets") {
    CHECK_THROWS_AS(jet_add(jet_const(2, 3, Scalar::one()), jet_const(2, 4, Scalar::one())),
                    structural_error);
    CHECK_THROWS_AS(jet_add(jet_const(2, 3, Scalar::one()), jet_const(4, 3, Scalar::one())),
                    structural_error);
    CHECK_THROWS_AS(jet_partial(jet_const(2, 0, Scalar::one()), 0), budget_error);
    CHECK_THROWS_AS(jet_invert(jet_coord(2, 3, 0, Scalar::zero())), singularity_error);
}
