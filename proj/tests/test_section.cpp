// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "fedstar/section.hpp"
#include "oracles.hpp"

using namespace fedstar;

namespace {

const SectionCaps kCaps{8, 4};

Section y_term(unsigned v, int order = 4) {
    Section s = section_zero(2, Frame::Real, kCaps);
    s.jetOrder = order;
    s.terms.emplace(TermKey{0, mono_unit(v), 0}, jet_const(2, order, Scalar::one()));
    return s;
}

PairingTensor flat_poisson(int order = 4) {
    std::vector<Jet> ent(4, jet_zero(2, order));
    ent[1] = jet_const(2, order, Scalar::one());
    ent[2] = jet_const(2, order, Scalar(Rat(-1)));
    return make_pairing(2, PairingTensor::Shape::Antisymmetric, ent);
}

Section random_section(oracles::Rng& rng, int order) {
    Section s = section_zero(2, Frame::Real, kCaps);
    s.jetOrder = order;
    std::vector<Scalar> base{Scalar(rat(1, 3)), Scalar(rat(-1, 2))};
    for (int t = 0; t < 3; ++t) {
        unsigned h = unsigned(rng.pick(0, 1));
        Mono sym = 0;
        for (long d = rng.pick(0, 2); d > 0; --d) sym += mono_unit(unsigned(rng.pick(0, 1)));
        std::uint32_t asym = std::uint32_t(rng.pick(0, 3));
        Jet j = oracles::to_jet(oracles::random_poly(2, 2, rng), order, base);
        if (j.c.empty()) continue;
        TermKey key{h, sym, asym};
        auto it = s.terms.find(key);
        if (it == s.terms.end())
            s.terms.emplace(key, j);
        else
            it->second = jet_add(it->second, j);
    }
    detail::section_normalize(s);
    return s;
}

}  // namespace

TEST_CASE("wedge sign conventions") {
    CHECK(wedge_merge_sign(1u, 2u) == 1);   // dx1 ^ dx2
    CHECK(wedge_merge_sign(2u, 1u) == -1);  // dx2 ^ dx1
    CHECK(wedge_merge_sign(1u, 1u) == 0);   // dx1 ^ dx1
    CHECK(wedge_insert_sign(1u, 1) == -1);  // inserting dx2 after dx1 from the left
    CHECK(wedge_insert_sign(2u, 0) == 1);
    CHECK(wedge_remove_sign(3u, 1) == -1);
    CHECK(wedge_remove_sign(3u, 0) == 1);
    CHECK(wedge_remove_sign(2u, 0) == 0);
}

TEST_CASE("fibre product ground values") {
    PairingTensor P = flat_poisson();
    Section y1 = y_term(0), y2 = y_term(1);

    Section p12 = fiber_star(y1, y2, P);
    REQUIRE(p12.terms.size() == 2);
    CHECK(p12.terms.at(TermKey{0, mono_unit(0) + mono_unit(1), 0}).c.at(0) == Scalar::one());
    CHECK(p12.terms.at(TermKey{1, 0, 0}).c.at(0) == Scalar(Rat(0), Rat(1, 2)));

    Section comm = graded_comm(y1, y2, P);
    REQUIRE(comm.terms.size() == 1);
    CHECK(comm.terms.at(TermKey{1, 0, 0}).c.at(0) == Scalar::imag_unit());
}

TEST_CASE("fibre product is associative") {
    PairingTensor P = flat_poisson();
    SECTION("monomial sections") {
        Section y1 = y_term(0), y2 = y_term(1);
        Section y1s = fiber_star(y1, y1, P);
        Section m = fiber_star(y1, y2, P);
        Section lhs = fiber_star(fiber_star(y1s, y2, P), m, P);
        Section rhs = fiber_star(y1s, fiber_star(y2, m, P), P);
        CHECK(section_equal(lhs, rhs));
    }
    SECTION("random sections, including jet-valued coefficients") {
        oracles::Rng rng(99);
        for (int trial = 0; trial < 5; ++trial) {
            Section a = random_section(rng, 3);
            Section b = random_section(rng, 3);
            Section c = random_section(rng, 3);
            PairingTensor P3 = flat_poisson(3);
            CHECK(section_equal(fiber_star(fiber_star(a, b, P3), c, P3),
                                fiber_star(a, fiber_star(b, c, P3), P3)));
        }
    }
}

TEST_CASE("total degree is additive under the fibre product") {
    PairingTensor P = flat_poisson();
    oracles::Rng rng(5);
    Section a = deg_part(random_section(rng, 3), 2);
    Section b = deg_part(random_section(rng, 3), 3);
    if (!a.is_zero() && !b.is_zero()) {
        Section p = fiber_star(a, b, flat_poisson(3));
        CHECK(section_equal(p, deg_part(p, 5)));
    }
}

TEST_CASE("delta complex") {
    Section a = section_zero(2, Frame::Real, kCaps);
    a.jetOrder = 4;
    a.terms.emplace(TermKey{0, 2 * mono_unit(0) + mono_unit(1), 2u},
                    jet_coord(2, 4, 0, Scalar(Rat(3))));

    SECTION("homotopy identity away from the scalar part") {
        Section hom = section_add(delta(delta_inv(a)), delta_inv(delta(a)));
        CHECK(section_equal(hom, a));
    }
    SECTION("scalar terms are annihilated by both sides") {
        Section s = section_zero(2, Frame::Real, kCaps);
        s.jetOrder = 4;
        s.terms.emplace(TermKey{1, 0, 0}, jet_const(2, 4, Scalar(rat(5))));
        CHECK(delta(s).is_zero());
        CHECK(delta_inv(s).is_zero());
    }
    SECTION("nilpotency") {
        CHECK(delta(delta(a)).is_zero());
        CHECK(delta_inv(delta_inv(a)).is_zero());
    }
}

TEST_CASE("selectors slice by degree, hbar power and fibre type") {
    oracles::Rng rng(17);
    Section a = random_section(rng, 3);
    Section sum = section_zero(2, Frame::Real, kCaps);
    sum.jetOrder = a.jetOrder;
    for (unsigned k = 0; k <= kCaps.maxDeg; ++k) sum = section_add(sum, deg_part(a, k));
    CHECK(section_equal(sum, a));

    Section hsum = section_zero(2, Frame::Real, kCaps);
    hsum.jetOrder = a.jetOrder;
    for (unsigned h = 0; h <= kCaps.maxH; ++h) hsum = section_add(hsum, h_part(a, h));
    CHECK(section_equal(hsum, a));

    // complex chart: a y1^2 y2 term has type (2,1)
    Section c = section_zero(2, Frame::Complex, kCaps);
    c.jetOrder = 3;
    c.terms.emplace(TermKey{0, 2 * mono_unit(0) + mono_unit(1), 0},
                    jet_const(2, 3, Scalar::one()));
    CHECK(section_equal(sym_type_part(c, 2, 1), c));
    CHECK(sym_type_part(c, 1, 2).is_zero());
}

TEST_CASE("hbar division and parity") {
    Section y1 = y_term(0);
    CHECK_THROWS_AS(div_h(y1), divisibility_error);
    Section sh = shift_h(y1, 2);
    CHECK(section_equal(div_h(div_h(sh)), y1));
    Section flip = hbar_parity(section_add(y1, sh));
    // hbar^2 keeps sign, hbar^0 keeps sign; parity acts as (-1)^h
    CHECK(section_equal(flip, section_add(y1, sh)));
    Section odd = shift_h(y1, 1);
    CHECK(section_equal(hbar_parity(odd), section_neg(odd)));
}

TEST_CASE("conjugation in a complex frame") {
    Section c = section_zero(2, Frame::Complex, kCaps);
    c.jetOrder = 4;
    c.terms.emplace(TermKey{0, mono_unit(0), 1u}, jet_const(2, 4, Scalar::imag_unit()));
    Section cc = conj_section(c);
    REQUIRE(cc.terms.size() == 1);
    CHECK(cc.terms.at(TermKey{0, mono_unit(1), 2u}).c.at(0) == Scalar(Rat(0), Rat(-1)));
    CHECK(section_equal(conj_section(cc), c));
}

TEST_CASE("caps are enforced on insertion") {
    Section s = section_zero(2, Frame::Real, SectionCaps{2, 1});
    s.jetOrder = 3;
    Jet one = jet_const(2, 3, Scalar::one());
    CHECK_THROWS_AS(detail::section_insert_add(s, TermKey{2, 0, 0}, one), structural_error);
    CHECK_THROWS_AS(detail::section_insert_add(s, TermKey{0, 3 * mono_unit(0), 0}, one),
                    structural_error);
    CHECK_NOTHROW(detail::section_insert_add(s, TermKey{1, 0, 0}, one));
}

TEST_CASE("pairing shapes are validated") {
    std::vector<Jet> ent(4, jet_zero(2, 3));
    ent[1] = jet_const(2, 3, Scalar::one());
    ent[2] = jet_const(2, 3, Scalar::one());  // symmetric, not antisymmetric
    CHECK_THROWS_AS(make_pairing(2, PairingTensor::Shape::Antisymmetric, ent), structural_error);
    ent[0] = jet_const(2, 3, Scalar::one());  // diagonal entry in hol-to-antihol shape
    CHECK_THROWS_AS(make_pairing(2, PairingTensor::Shape::HolToAntihol, ent), structural_error);
}

TEST_CASE("scalar extraction") {
    Section s = section_zero(2, Frame::Real, kCaps);
    s.jetOrder = 4;
    s.terms.emplace(TermKey{1, 0, 0}, jet_const(2, 4, Scalar(rat(7))));
    s.terms.emplace(TermKey{0, mono_unit(0), 0}, jet_const(2, 4, Scalar::one()));
    CHECK(scalar_coefficient(s, 1, 4) == jet_const(2, 4, Scalar(rat(7))));
    CHECK(scalar_coefficient(s, 2, 4).is_zero());
    Section sp = scalar_part(s);
    CHECK(sp.terms.size() == 1);
    CHECK(sp.terms.count(TermKey{1, 0, 0}) == 1);
}
