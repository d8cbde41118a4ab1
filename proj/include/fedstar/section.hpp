// SPDX-License-Identifier: MIT

/**
 * \file
 * \brief Formal sections of the Weyl-algebra bundle over a single chart.
 *
 * An element is a finite sum of terms
 *
 *     jet(x) * hbar^h * y^{sym} * dx^{asym}
 *
 * where `sym` is a monomial in the fibre variables y^1..y^d (a symmetric
 * covariant tensor in disguise), `asym` is a strictly increasing wedge of
 * differentials encoded as a bit set, and the coefficient is a Jet of the
 * base-manifold function at the chart's expansion point.
 *
 * The total degree Deg = 2 h + |sym| filters everything: all constructions
 * here are Deg-graded or Deg-filtered, so a hard cap `maxDeg` makes the
 * infinite recursions of the deformation quantization finite and exact below
 * the cap.
 *
 * The fibrewise product is parametrized by a PairingTensor P so the same code
 * path serves both the symmetric (Moyal/Weyl) and the normally ordered (Wick)
 * multiplication:
 *
 *     a o b = sum_r (i/2)^r hbar^r / r! *
 *             P^{i1 j1}(x) ... P^{ir jr}(x) *
 *             (is_{i1} ... is_{ir} a) (is_{j1} ... is_{jr} b)
 *
 * with is_i the fibre derivative d/dy^i and the remaining y / dx parts
 * multiplied by symmetric product and wedge respectively.
 */

#ifndef FEDSTAR_SECTION_HPP
#define FEDSTAR_SECTION_HPP

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fedstar/error.hpp"
#include "fedstar/jet.hpp"
#include "fedstar/scalar.hpp"

namespace fedstar {

/// Sentinel jet order for the zero section: the zero germ is exact at all
/// orders, so the empty section carries infinite reliability.
constexpr int kOrderInf = 1 << 20;

struct SectionCaps {
    unsigned maxDeg = 0;
    unsigned maxH = 0;
    friend bool operator==(const SectionCaps&, const SectionCaps&) = default;
};

struct TermKey {
    unsigned h = 0;
    Mono sym = 0;
    std::uint32_t asym = 0;
    auto operator<=>(const TermKey&) const = default;
};

inline unsigned term_deg(const TermKey& k) { return 2 * k.h + mono_degree(k.sym); }

inline std::string term_key_to_string(const TermKey& k, unsigned dim) {
    std::string s = "h^" + std::to_string(k.h);
    for (unsigned v = 0; v < dim; ++v) {
        unsigned e = mono_exp(k.sym, v);
        if (e == 0) continue;
        s += " y" + std::to_string(v + 1);
        if (e > 1) s += "^" + std::to_string(e);
    }
    for (unsigned v = 0; v < dim; ++v)
        if (k.asym & (1u << v)) s += " dx" + std::to_string(v + 1);
    return s;
}

// ---------------------------------------------------------------------------
// Wedge bookkeeping on bit sets.  Factors are kept sorted by index; signs are
// transposition counts.
// ---------------------------------------------------------------------------

/// Sign of dx^i ^ (sorted product `mask`), or 0 if i already occurs.
inline int wedge_insert_sign(std::uint32_t mask, unsigned i) {
    std::uint32_t bit = 1u << i;
    if (mask & bit) return 0;
    unsigned below = unsigned(std::popcount(mask & (bit - 1)));
    return (below % 2 == 0) ? 1 : -1;
}

/// Sign picked up when the antiderivation removes factor i, or 0 if absent.
inline int wedge_remove_sign(std::uint32_t mask, unsigned i) {
    std::uint32_t bit = 1u << i;
    if (!(mask & bit)) return 0;
    unsigned below = unsigned(std::popcount(mask & (bit - 1)));
    return (below % 2 == 0) ? 1 : -1;
}

/// Sign of (sorted a) ^ (sorted b) relative to the sorted union, or 0 on
/// overlap.
inline int wedge_merge_sign(std::uint32_t a, std::uint32_t b) {
    if (a & b) return 0;
    unsigned inv = 0;
    std::uint32_t bb = b;
    while (bb != 0) {
        unsigned j = unsigned(std::countr_zero(bb));
        bb &= bb - 1;
        inv += unsigned(std::popcount(a >> (j + 1)));
    }
    return (inv % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Section type
// ---------------------------------------------------------------------------

struct Section {
    unsigned dim = 0;
    Frame frame = Frame::Real;
    SectionCaps caps;
    int jetOrder = kOrderInf; // shared by all stored jets
    std::map<TermKey, Jet> terms;

    bool is_zero() const { return terms.empty(); }
};

inline Section section_zero(unsigned dim, Frame frame, SectionCaps caps) {
    if (dim == 0 || dim > kMaxVars) throw structural_error("section dimension out of range");
    return Section{dim, frame, caps, kOrderInf, {}};
}

namespace detail {
inline void section_check_compat(const Section& a, const Section& b, const char* op) {
    if (a.dim != b.dim || a.frame != b.frame) throw structural_error(std::string(op) + ": section chart mismatch");
    if (!(a.caps == b.caps)) throw structural_error(std::string(op) + ": section cap mismatch");
}
inline void section_insert_add(Section& s, const TermKey& k, const Jet& j) {
    if (j.is_zero()) return;
    if (term_deg(k) > s.caps.maxDeg || k.h > s.caps.maxH)
        throw structural_error("section term exceeds caps: " + term_key_to_string(k, s.dim));
    auto it = s.terms.find(k);
    if (it == s.terms.end()) {
        s.terms.emplace(k, j);
    } else {
        it->second = jet_add(it->second, j);
        if (it->second.is_zero()) s.terms.erase(it);
    }
}
inline void section_normalize(Section& s) {
    for (auto it = s.terms.begin(); it != s.terms.end();)
        it = it->second.is_zero() ? s.terms.erase(it) : std::next(it);
    if (s.terms.empty()) s.jetOrder = kOrderInf;
}
} // namespace detail

/// Lower the shared jet order (no-op if already at or below the target).
inline Section section_truncate_order(const Section& a, int t) {
    if (t >= a.jetOrder) return a;
    if (t < 0) throw structural_error("section_truncate_order: negative target");
    Section r = a;
    r.jetOrder = t;
    for (auto& [k, j] : r.terms) j = jet_truncate(j, t);
    detail::section_normalize(r);
    return r;
}

/// Single scalar term (no fibre variables, no form part).
inline Section section_scalar(const Jet& j, Frame frame, SectionCaps caps) {
    Section s = section_zero(j.dim, frame, caps);
    if (j.is_zero()) return s;
    s.jetOrder = j.order;
    s.terms.emplace(TermKey{}, j);
    return s;
}

inline Section section_one(unsigned dim, Frame frame, SectionCaps caps, int order) {
    return section_scalar(jet_const(dim, order, Scalar::one()), frame, caps);
}

inline Section section_add(const Section& a, const Section& b) {
    detail::section_check_compat(a, b, "section_add");
    int t = std::min(a.jetOrder, b.jetOrder);
    Section r = section_truncate_order(a, t);
    Section bt = section_truncate_order(b, t);
    r.jetOrder = std::min(r.jetOrder, bt.jetOrder);
    for (const auto& [k, j] : bt.terms) detail::section_insert_add(r, k, j);
    detail::section_normalize(r);
    return r;
}

inline Section section_scale(const Section& a, const Scalar& c) {
    Section r = a;
    if (c.is_zero()) {
        r.terms.clear();
        r.jetOrder = kOrderInf;
        return r;
    }
    for (auto& [k, j] : r.terms) j = jet_scale(j, c);
    return r;
}

inline Section section_neg(const Section& a) { return section_scale(a, Scalar(Rat(-1))); }

inline Section section_sub(const Section& a, const Section& b) { return section_add(a, section_neg(b)); }

inline bool section_equal(const Section& a, const Section& b) { return section_sub(a, b).is_zero(); }

// ---------------------------------------------------------------------------
// Grading selectors
// ---------------------------------------------------------------------------

/// Component of total degree Deg = 2h + |sym| equal to k.
inline Section deg_part(const Section& a, unsigned k) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms)
        if (term_deg(key) == k) r.terms.emplace(key, j);
    detail::section_normalize(r);
    return r;
}

/// Component with Deg == k and symmetric degree |sym| == s.
inline Section deg_sym_part(const Section& a, unsigned k, unsigned s) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms)
        if (term_deg(key) == k && mono_degree(key.sym) == s) r.terms.emplace(key, j);
    detail::section_normalize(r);
    return r;
}

/// Component with hbar exponent == h.
inline Section h_part(const Section& a, unsigned h) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms)
        if (key.h == h) r.terms.emplace(key, j);
    detail::section_normalize(r);
    return r;
}

/// Component whose antisymmetric degree has the given parity (0 or 1).
inline Section asym_parity_part(const Section& a, unsigned parity) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms)
        if (unsigned(std::popcount(key.asym)) % 2 == parity) r.terms.emplace(key, j);
    detail::section_normalize(r);
    return r;
}

/// Component with form degree == l.
inline Section asym_deg_part(const Section& a, unsigned l) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms)
        if (unsigned(std::popcount(key.asym)) == l) r.terms.emplace(key, j);
    detail::section_normalize(r);
    return r;
}

/// Complex frames only: terms whose fibre monomial has holomorphic degree p
/// (variables y^1..y^n) and antiholomorphic degree q (y^{n+1}..y^{2n}).
inline Section sym_type_part(const Section& a, unsigned p, unsigned q) {
    if (a.frame != Frame::Complex) throw structural_error("sym_type_part: complex frame required");
    const unsigned n = a.dim / 2;
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms) {
        unsigned dh = 0, da = 0;
        for (unsigned v = 0; v < n; ++v) dh += mono_exp(key.sym, v);
        for (unsigned v = n; v < 2 * n; ++v) da += mono_exp(key.sym, v);
        if (dh == p && da == q) r.terms.emplace(key, j);
    }
    detail::section_normalize(r);
    return r;
}

// ---------------------------------------------------------------------------
// hbar bookkeeping
// ---------------------------------------------------------------------------

/// Multiply by hbar^s (s >= 0).
inline Section shift_h(const Section& a, unsigned s) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms)
        detail::section_insert_add(r, TermKey{key.h + s, key.sym, key.asym}, j);
    detail::section_normalize(r);
    return r;
}

/// Exact division by hbar; every term must carry h >= 1.
inline Section div_h(const Section& a) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms) {
        if (key.h == 0)
            throw divisibility_error("div_h: term without hbar factor: " + term_key_to_string(key, a.dim));
        r.terms.emplace(TermKey{key.h - 1, key.sym, key.asym}, j);
    }
    detail::section_normalize(r);
    return r;
}

/// a with hbar -> -hbar.
inline Section hbar_parity(const Section& a) {
    Section r = a;
    for (auto& [key, j] : r.terms)
        if (key.h % 2 == 1) j = jet_neg(j);
    detail::section_normalize(r);
    return r;
}

// ---------------------------------------------------------------------------
// Conjugation
// ---------------------------------------------------------------------------

namespace detail {
/// Conjugation permutes wedge factors k <-> n+k; returns the re-sorting sign.
inline int conj_asym_mask(std::uint32_t mask, unsigned n, std::uint32_t& out) {
    std::vector<unsigned> mapped;
    for (unsigned v = 0; v < 2 * n; ++v)
        if (mask & (1u << v)) mapped.push_back(v < n ? v + n : v - n);
    unsigned inv = 0;
    for (size_t i = 0; i < mapped.size(); ++i)
        for (size_t j = i + 1; j < mapped.size(); ++j)
            if (mapped[i] > mapped[j]) ++inv;
    out = 0;
    for (unsigned v : mapped) out |= 1u << v;
    return (inv % 2 == 0) ? 1 : -1;
}
} // namespace detail

/// Complex conjugate of a section.  Coefficient jets are conjugated; in a
/// complex frame the fibre variables and wedge factors swap k <-> n+k as well.
inline Section conj_section(const Section& a) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    if (a.frame == Frame::Real) {
        for (const auto& [key, j] : a.terms) r.terms.emplace(key, jet_conjugate(j, Frame::Real));
        return r;
    }
    const unsigned n = a.dim / 2;
    for (const auto& [key, j] : a.terms) {
        Mono sym = 0;
        for (unsigned k = 0; k < n; ++k) {
            sym |= Mono(mono_exp(key.sym, k)) << (8 * (k + n));
            sym |= Mono(mono_exp(key.sym, k + n)) << (8 * k);
        }
        std::uint32_t asym = 0;
        int sgn = detail::conj_asym_mask(key.asym, n, asym);
        Jet cj = jet_conjugate(j, Frame::Complex);
        if (sgn < 0) cj = jet_neg(cj);
        detail::section_insert_add(r, TermKey{key.h, sym, asym}, cj);
    }
    detail::section_normalize(r);
    return r;
}

// ---------------------------------------------------------------------------
// Fibre pairing tensors
// ---------------------------------------------------------------------------

struct PairingTensor {
    enum class Shape { Antisymmetric, HolToAntihol };
    unsigned dim = 0;
    Shape shape = Shape::Antisymmetric;
    int order = 0;
    std::vector<Jet> e; // row-major dim x dim

    const Jet& at(unsigned i, unsigned j) const { return e[i * dim + j]; }
};

inline PairingTensor make_pairing(unsigned dim, PairingTensor::Shape shape, std::vector<Jet> entries) {
    if (entries.size() != size_t(dim) * dim) throw structural_error("make_pairing: wrong entry count");
    int order = -1;
    for (const auto& j : entries) {
        if (j.dim != dim) throw structural_error("make_pairing: entry dimension mismatch");
        if (order < 0) order = j.order;
        if (j.order != order) throw structural_error("make_pairing: entries with mixed jet orders");
    }
    PairingTensor p{dim, shape, order < 0 ? 0 : order, std::move(entries)};
    if (shape == PairingTensor::Shape::Antisymmetric) {
        for (unsigned i = 0; i < dim; ++i)
            for (unsigned j = 0; j < dim; ++j)
                if (!jet_add(p.at(i, j), p.at(j, i)).is_zero())
                    throw structural_error("make_pairing: antisymmetric shape violated");
    } else {
        if (dim % 2 != 0) throw structural_error("make_pairing: paired shape needs even dimension");
        unsigned n = dim / 2;
        for (unsigned i = 0; i < dim; ++i)
            for (unsigned j = 0; j < dim; ++j)
                if (!(i < n && j >= n) && !p.at(i, j).is_zero())
                    throw structural_error("make_pairing: pairing must map holomorphic to antiholomorphic slots");
    }
    return p;
}

// ---------------------------------------------------------------------------
// Fibrewise products
// ---------------------------------------------------------------------------

namespace detail {
/// (i/2)^r / r! as an exact Gaussian rational.
inline Scalar half_i_pow_over_factorial(unsigned r) {
    mpz_class den = 1;
    for (unsigned k = 1; k <= r; ++k) den *= k;
    den <<= r;
    Rat mag(mpz_class(1), den);
    Scalar c{mag, Rat(0)};
    switch (r % 4) {
        case 0: return c;
        case 1: return Scalar(Rat(0), mag);
        case 2: return Scalar(-mag, Rat(0));
        default: return Scalar(Rat(0), -mag);
    }
}

struct PairKey {
    unsigned h = 0;
    Mono symA = 0, symB = 0;
    std::uint32_t asym = 0;
    auto operator<=>(const PairKey&) const = default;
};
} // namespace detail

/// Plain fibrewise product (no contractions): symmetric product on y, wedge on
/// dx, Leibniz on jets, hbar exponents add.
inline Section fiber_mul(const Section& a, const Section& b) {
    detail::section_check_compat(a, b, "fiber_mul");
    Section r = section_zero(a.dim, a.frame, a.caps);
    if (a.is_zero() || b.is_zero()) return r;
    int t = std::min(a.jetOrder, b.jetOrder);
    Section at = section_truncate_order(a, t);
    Section bt = section_truncate_order(b, t);
    r.jetOrder = t;
    for (const auto& [ka, ja] : at.terms)
        for (const auto& [kb, jb] : bt.terms) {
            if (term_deg(ka) + term_deg(kb) > r.caps.maxDeg) continue;
            if (ka.h + kb.h > r.caps.maxH) continue;
            int sgn = wedge_merge_sign(ka.asym, kb.asym);
            if (sgn == 0) continue;
            Jet j = jet_mul(ja, jb);
            if (sgn < 0) j = jet_neg(j);
            detail::section_insert_add(r, TermKey{ka.h + kb.h, ka.sym + kb.sym, ka.asym | kb.asym}, j);
        }
    detail::section_normalize(r);
    return r;
}

/**
 * Full fibrewise product with contractions against the pairing P.
 *
 * Implementation: pairs of terms sharing (h, symA, symB, asym) are merged into
 * one accumulator entry; each contraction round applies
 * sum_{i,j} P^{ij} d/dy^i (x) d/dy^j to every entry, and round r is emitted
 * with the prefactor (i/2)^r hbar^r / r! (the sum over ordered index tuples
 * supplies the r! multiplicity).
 */
inline Section fiber_star(const Section& a, const Section& b, const PairingTensor& P) {
    detail::section_check_compat(a, b, "fiber_star");
    if (P.dim != a.dim) throw structural_error("fiber_star: pairing dimension mismatch");
    Section r = section_zero(a.dim, a.frame, a.caps);
    if (a.is_zero() || b.is_zero()) return r;
    int t = std::min({a.jetOrder, b.jetOrder, P.order});
    Section at = section_truncate_order(a, t);
    Section bt = section_truncate_order(b, t);
    if (at.is_zero() || bt.is_zero()) return r;
    r.jetOrder = t;

    // nonzero pairing entries, truncated to the common jet order
    struct PEntry { unsigned i, j; Jet jet; };
    std::vector<PEntry> pent;
    for (unsigned i = 0; i < P.dim; ++i)
        for (unsigned j = 0; j < P.dim; ++j)
            if (!P.at(i, j).is_zero()) pent.push_back({i, j, jet_truncate(P.at(i, j), t)});

    std::map<detail::PairKey, Jet> acc;
    for (const auto& [ka, ja] : at.terms)
        for (const auto& [kb, jb] : bt.terms) {
            if (term_deg(ka) + term_deg(kb) > r.caps.maxDeg) continue;
            int sgn = wedge_merge_sign(ka.asym, kb.asym);
            if (sgn == 0) continue;
            Jet j = jet_mul(ja, jb);
            if (sgn < 0) j = jet_neg(j);
            if (j.is_zero()) continue;
            detail::PairKey q{ka.h + kb.h, ka.sym, kb.sym, ka.asym | kb.asym};
            auto it = acc.find(q);
            if (it == acc.end()) acc.emplace(q, std::move(j));
            else {
                it->second = jet_add(it->second, j);
                if (it->second.is_zero()) acc.erase(it);
            }
        }

    for (unsigned round = 0; !acc.empty(); ++round) {
        Scalar pref = detail::half_i_pow_over_factorial(round);
        for (const auto& [q, j] : acc) {
            TermKey k{q.h + round, q.symA + q.symB, q.asym};
            if (term_deg(k) > r.caps.maxDeg || k.h > r.caps.maxH) continue;
            detail::section_insert_add(r, k, jet_scale(j, pref));
        }
        std::map<detail::PairKey, Jet> next;
        for (const auto& [q, j] : acc)
            for (const auto& pe : pent) {
                unsigned ma = mono_exp(q.symA, pe.i);
                if (ma == 0) continue;
                unsigned mb = mono_exp(q.symB, pe.j);
                if (mb == 0) continue;
                detail::PairKey q2{q.h, q.symA - mono_unit(pe.i), q.symB - mono_unit(pe.j), q.asym};
                Jet contrib = jet_mul(j, pe.jet);
                unsigned long mult = static_cast<unsigned long>(ma) * mb;
                if (mult != 1) contrib = jet_scale(contrib, Scalar(Rat(mult)));
                if (contrib.is_zero()) continue;
                auto it = next.find(q2);
                if (it == next.end()) next.emplace(q2, std::move(contrib));
                else {
                    it->second = jet_add(it->second, contrib);
                    if (it->second.is_zero()) next.erase(it);
                }
            }
        acc = std::move(next);
    }
    detail::section_normalize(r);
    return r;
}

/// Graded commutator [a,b] = a o b - (-1)^{|a||b|} b o a with |.| the form
/// degree.
inline Section graded_comm(const Section& a, const Section& b, const PairingTensor& P) {
    Section r = section_sub(fiber_star(a, b, P), fiber_star(b, a, P));
    Section ao = asym_parity_part(a, 1);
    Section bo = asym_parity_part(b, 1);
    if (!ao.is_zero() && !bo.is_zero())
        r = section_add(r, section_scale(fiber_star(bo, ao, P), Scalar(Rat(2))));
    return r;
}

// ---------------------------------------------------------------------------
// The two fibre differentials
// ---------------------------------------------------------------------------

/// delta a = dx^i ^ (d/dy^i a), wedge factor on the left.  Lowers Deg by one,
/// leaves jets untouched.
inline Section delta(const Section& a) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms)
        for (unsigned i = 0; i < a.dim; ++i) {
            unsigned e = mono_exp(key.sym, i);
            if (e == 0) continue;
            int sgn = wedge_insert_sign(key.asym, i);
            if (sgn == 0) continue;
            long coef = long(e) * sgn;
            detail::section_insert_add(r, TermKey{key.h, key.sym - mono_unit(i), key.asym | (1u << i)},
                                       jet_scale(j, Scalar(Rat(coef))));
        }
    detail::section_normalize(r);
    return r;
}

/// delta^{-1} a = y^j i(d/dx^j) a / (k + l) on terms with fibre degree k and
/// form degree l, zero on k = l = 0.  Raises Deg by one.
inline Section delta_inv(const Section& a) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms) {
        unsigned k = mono_degree(key.sym);
        unsigned l = unsigned(std::popcount(key.asym));
        if (k + l == 0) continue;
        if (term_deg(key) + 1 > a.caps.maxDeg) continue; // quotient by Deg > maxDeg
        Rat w(1, long(k + l));
        for (unsigned i = 0; i < a.dim; ++i) {
            int sgn = wedge_remove_sign(key.asym, i);
            if (sgn == 0) continue;
            detail::section_insert_add(r, TermKey{key.h, key.sym + mono_unit(i), key.asym & ~(1u << i)},
                                       jet_scale(j, Scalar(sgn < 0 ? -w : w)));
        }
    }
    detail::section_normalize(r);
    return r;
}

/// Coefficient jet of hbar^h in the scalar part (no fibre variables, no form
/// part) of a section; the symbol map read off one hbar power at a time.
inline Jet scalar_coefficient(const Section& a, unsigned h, int fallbackOrder) {
    auto it = a.terms.find(TermKey{h, 0, 0});
    if (it != a.terms.end()) return it->second;
    return jet_zero(a.dim, a.is_zero() ? fallbackOrder : a.jetOrder);
}

/// Projection onto the scalar part (sym = asym = 0, all hbar powers).
inline Section scalar_part(const Section& a) {
    Section r = section_zero(a.dim, a.frame, a.caps);
    r.jetOrder = a.jetOrder;
    for (const auto& [key, j] : a.terms)
        if (key.sym == 0 && key.asym == 0) r.terms.emplace(key, j);
    detail::section_normalize(r);
    return r;
}

inline std::string section_to_string(const Section& a) {
    if (a.is_zero()) return "0";
    std::string s;
    for (const auto& [key, j] : a.terms) {
        if (!s.empty()) s += "\n";
        s += "[" + term_key_to_string(key, a.dim) + "] " + jet_to_string(j);
    }
    return s;
}

} // namespace fedstar

#endif
