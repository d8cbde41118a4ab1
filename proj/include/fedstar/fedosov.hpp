// SPDX-License-Identifier: MIT

/**
 * \file
 * \brief The flat-connection construction of star products, truncated at a
 * configurable order N in hbar.
 *
 * Everything is organized around the total degree Deg = 2 deg_hbar + deg_y.
 * With K = 2N + 1 and Kr = K + 2, the section caps are {Kr + 2, (Kr+2)/2};
 * all recursions below are exact in the quotient by Deg > maxDeg.
 *
 * The connection one-form r solves
 *
 *     delta r = R + nabla r + (i/hbar) r o r ,     delta^{-1} r = 0,
 *
 * degree by degree: r_3 = delta^{-1} R and for m >= 4
 *
 *     r_m = delta^{-1}( nabla r_{m-1}
 *                       + (i/hbar) sum_{a+b=m+1, a,b>=3} r_a o r_b ).
 *
 * This makes D = -delta + nabla + (i/hbar) ad(r) square to zero below the
 * truncation window, because D^2 = (i/hbar) ad(R + nabla r + (i/hbar) r o r
 * - delta r) and the parenthesis is the recursion defect.
 *
 * A function f lifts to the D-flat section tau(f) with scalar part f:
 *
 *     tau_0 = f,   tau_{s+1} = delta^{-1}( nabla tau_s
 *                    + (i/hbar) sum_{t=1}^{s-1} [ r_{t+2}, tau_{s-t} ] ).
 *
 * The star product is f * g = sigma(tau(f) o tau(g)) = sum_t hbar^t c_t, and
 * M_t = c_t / (i/2)^t normalizes to f * g = sum_t (i hbar / 2)^t M_t(f, g).
 */

#ifndef FEDSTAR_FEDOSOV_HPP
#define FEDSTAR_FEDOSOV_HPP

#include <map>
#include <string>
#include <vector>

#include "fedstar/error.hpp"
#include "fedstar/geometry.hpp"
#include "fedstar/jet.hpp"
#include "fedstar/report.hpp"
#include "fedstar/scalar.hpp"
#include "fedstar/section.hpp"

namespace fedstar {

enum class StarKind { Weyl, Wick };

inline const char* star_kind_name(StarKind k) { return k == StarKind::Weyl ? "weyl" : "wick"; }

struct StarContext {
    ChartModel model;
    StarKind kind = StarKind::Weyl;
    unsigned N = 0;  // truncation order in hbar
    unsigned K = 0;  // 2N+1, highest lift component
    unsigned Kr = 0; // K+2, highest connection component
    SectionCaps caps;
    std::map<unsigned, Section> rComp; // Deg-homogeneous components, 3..Kr
    Section r;

    const PairingTensor& pairing() const {
        return kind == StarKind::Weyl ? model.poisson : *model.wick;
    }
};

namespace detail {
/// (i/hbar) x as a section operation: divide by hbar, multiply by i.
inline Section i_over_h(const Section& x) {
    return section_scale(div_h(x), Scalar::imag_unit());
}
} // namespace detail

inline StarContext make_star_context(ChartModel model, StarKind kind, unsigned N) {
    if (kind == StarKind::Wick) {
        if (model.frame != Frame::Complex)
            throw structural_error("normally ordered star product needs a complex chart");
        if (model.connection != Connection::Kaehler)
            throw structural_error("normally ordered star product needs the canonical Kaehler connection");
        if (!model.wick.has_value())
            throw structural_error("normally ordered star product: model lacks the pairing tensor");
    }
    StarContext ctx;
    ctx.kind = kind;
    ctx.N = N;
    ctx.K = 2 * N + 1;
    ctx.Kr = ctx.K + 2;
    ctx.caps = SectionCaps{ctx.Kr + 2, (ctx.Kr + 2) / 2};
    if (model.order < int(ctx.Kr) - 1)
        throw structural_error("make_star_context: model jet order too small for the requested truncation");
    ctx.model = std::move(model);

    const PairingTensor& P = ctx.pairing();
    Section rsec = curvature_section(ctx.model, ctx.caps);
    ctx.rComp[3] = delta_inv(rsec);
    for (unsigned m = 4; m <= ctx.Kr; ++m) {
        Section rhs = nabla(ctx.rComp.at(m - 1), ctx.model);
        Section quad = section_zero(ctx.model.dim, ctx.model.frame, ctx.caps);
        for (unsigned a = 3; a + 3 <= m + 1; ++a) {
            unsigned b = m + 1 - a;
            if (!ctx.rComp.count(a) || !ctx.rComp.count(b)) continue;
            quad = section_add(quad, fiber_star(ctx.rComp.at(a), ctx.rComp.at(b), P));
        }
        if (!quad.is_zero()) rhs = section_add(rhs, detail::i_over_h(quad));
        ctx.rComp[m] = delta_inv(rhs);
    }
    ctx.r = section_zero(ctx.model.dim, ctx.model.frame, ctx.caps);
    for (const auto& [m, c] : ctx.rComp) ctx.r = section_add(ctx.r, c);
    return ctx;
}

// ---------------------------------------------------------------------------
// Lifts
// ---------------------------------------------------------------------------

struct Lift {
    std::map<unsigned, Section> comp; // Deg-homogeneous components 0..K
    Section total;
};

/// D-flat lift of a function germ, solved degree by degree.
inline Lift lift(const StarContext& ctx, const Jet& f) {
    if (f.dim != ctx.model.dim) throw structural_error("lift: jet dimension mismatch");
    const PairingTensor& P = ctx.pairing();
    Lift L;
    L.comp[0] = section_scalar(f, ctx.model.frame, ctx.caps);
    for (unsigned s = 0; s < ctx.K; ++s) {
        Section rhs = nabla(L.comp.at(s), ctx.model);
        for (unsigned t = 1; t + 1 <= s; ++t) {
            const Section& tc = L.comp.at(s - t);
            if (tc.is_zero()) continue;
            Section c = graded_comm(ctx.rComp.at(t + 2), tc, P);
            if (!c.is_zero()) rhs = section_add(rhs, detail::i_over_h(c));
        }
        L.comp[s + 1] = delta_inv(rhs);
    }
    L.total = section_zero(ctx.model.dim, ctx.model.frame, ctx.caps);
    for (const auto& [s, c] : L.comp) L.total = section_add(L.total, c);
    return L;
}

// ---------------------------------------------------------------------------
// Symbol of the product of two lifts
// ---------------------------------------------------------------------------

namespace detail {
inline bool mono_pure_range(Mono m, unsigned lo, unsigned hi) {
    for (unsigned v = 0; v < kMaxVars; ++v)
        if (mono_exp(m, v) != 0 && (v < lo || v >= hi)) return false;
    return true;
}
} // namespace detail

/**
 * hbar-coefficient jets c_0..c_N of sigma(A o B) for 0-form sections A, B.
 * Only fully contracted pairs survive the symbol map, so pairs are kept only
 * when both fibre degrees match and h_A + h_B + deg_y fits the truncation.
 */
inline std::vector<Jet> sigma_star_coeffs(const StarContext& ctx, const Section& A, const Section& B) {
    const PairingTensor& P = ctx.pairing();
    int t = std::min({A.jetOrder, B.jetOrder, P.order});
    if (t >= kOrderInf) t = P.order;
    std::vector<Jet> coeff(ctx.N + 1, jet_zero(ctx.model.dim, t));
    if (A.is_zero() || B.is_zero()) return coeff;
    Section at = section_truncate_order(A, t);
    Section bt = section_truncate_order(B, t);
    const unsigned n = ctx.model.n;

    struct PEntry { unsigned i, j; Jet jet; };
    std::vector<PEntry> pent;
    for (unsigned i = 0; i < P.dim; ++i)
        for (unsigned j = 0; j < P.dim; ++j)
            if (!P.at(i, j).is_zero()) pent.push_back({i, j, jet_truncate(P.at(i, j), t)});

    std::map<detail::PairKey, Jet> acc;
    for (const auto& [ka, ja] : at.terms) {
        if (ka.asym != 0) throw structural_error("sigma_star_coeffs: section is not a 0-form");
        unsigned sa = mono_degree(ka.sym);
        for (const auto& [kb, jb] : bt.terms) {
            if (kb.asym != 0) throw structural_error("sigma_star_coeffs: section is not a 0-form");
            if (mono_degree(kb.sym) != sa) continue;
            if (ka.h + kb.h + sa > ctx.N) continue;
            if (ctx.kind == StarKind::Wick &&
                (!detail::mono_pure_range(ka.sym, 0, n) || !detail::mono_pure_range(kb.sym, n, 2 * n)))
                continue;
            Jet j = jet_mul(ja, jb);
            if (j.is_zero()) continue;
            detail::PairKey q{ka.h + kb.h, ka.sym, kb.sym, 0};
            auto it = acc.find(q);
            if (it == acc.end()) acc.emplace(q, std::move(j));
            else {
                it->second = jet_add(it->second, j);
                if (it->second.is_zero()) acc.erase(it);
            }
        }
    }

    for (unsigned round = 0; !acc.empty(); ++round) {
        Scalar pref = detail::half_i_pow_over_factorial(round);
        std::map<detail::PairKey, Jet> next;
        for (const auto& [q, j] : acc) {
            if (q.symA == 0 && q.symB == 0) {
                coeff[q.h + round] = jet_add(coeff[q.h + round], jet_scale(j, pref));
                continue;
            }
            for (const auto& pe : pent) {
                unsigned ma = mono_exp(q.symA, pe.i);
                if (ma == 0) continue;
                unsigned mb = mono_exp(q.symB, pe.j);
                if (mb == 0) continue;
                detail::PairKey q2{q.h, q.symA - mono_unit(pe.i), q.symB - mono_unit(pe.j), 0};
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
        }
        acc = std::move(next);
    }
    return coeff;
}

// ---------------------------------------------------------------------------
// The star product
// ---------------------------------------------------------------------------

struct StarProduct {
    unsigned N = 0;
    std::vector<Jet> coeff;        // f * g = sum_t hbar^t coeff[t], jets at x0
    std::vector<Scalar> coeffVal;  // coeff[t](x0)
    std::vector<Scalar> mVal;      // M_t(f,g)(x0), with coeff[t] = (i/2)^t M_t
};

/// M_t jet from the hbar-coefficient jet: M_t = (2/i)^t c_t = (-2i)^t c_t.
inline Jet star_m_jet(const StarProduct& sp, unsigned t) {
    return jet_scale(sp.coeff[t], Scalar(Rat(0), Rat(-2)).pow_int(long(t)));
}

inline StarProduct star(const StarContext& ctx, const Jet& f, const Jet& g) {
    Lift lf = lift(ctx, f);
    Lift lg = lift(ctx, g);
    StarProduct sp;
    sp.N = ctx.N;
    sp.coeff = sigma_star_coeffs(ctx, lf.total, lg.total);
    for (unsigned t = 0; t <= ctx.N; ++t) {
        sp.coeffVal.push_back(jet_eval0(sp.coeff[t]));
        sp.mVal.push_back(sp.coeffVal[t] * Scalar(Rat(0), Rat(-2)).pow_int(long(t)));
    }
    return sp;
}

/**
 * Bilinear extension of the star product to polynomials in hbar:
 * (sum_u hbar^u A_u) * (sum_v hbar^v B_v), returning coefficient jets up to
 * hbar^N.  Used to check associativity, where the inner product is itself an
 * hbar-series.
 */
inline std::vector<Jet> star_jets_bilinear(const StarContext& ctx, const std::vector<Jet>& A,
                                           const std::vector<Jet>& B) {
    int t = kOrderInf;
    for (const auto& j : A) t = std::min(t, j.order);
    for (const auto& j : B) t = std::min(t, j.order);
    std::vector<Jet> out(ctx.N + 1, jet_zero(ctx.model.dim, std::max(0, t - int(ctx.K))));
    std::vector<Lift> LA, LB;
    for (const auto& j : A) LA.push_back(lift(ctx, jet_truncate(j, t)));
    for (const auto& j : B) LB.push_back(lift(ctx, jet_truncate(j, t)));
    for (unsigned u = 0; u < A.size() && u <= ctx.N; ++u) {
        if (A[u].is_zero()) continue;
        for (unsigned v = 0; v < B.size() && u + v <= ctx.N; ++v) {
            if (B[v].is_zero()) continue;
            std::vector<Jet> c = sigma_star_coeffs(ctx, LA[u].total, LB[v].total);
            for (unsigned w = 0; u + v + w <= ctx.N; ++w) {
                if (c[w].is_zero()) continue;
                Jet cw = jet_truncate(c[w], out[u + v + w].order);
                out[u + v + w] = jet_add(out[u + v + w], cw);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form coefficients from lift components
// ---------------------------------------------------------------------------

namespace detail {
/// (1/p!) times the p-fold contraction of the fibre parts of two 0-form
/// sections against P, as a single jet.  Both sections must be concentrated
/// in fibre degree p.
inline Jet full_contraction(const Section& a, const Section& b, const PairingTensor& P, unsigned p,
                            int t) {
    Jet out = jet_zero(P.dim, t);
    if (a.is_zero() || b.is_zero()) return out;
    Section at = section_truncate_order(a, t);
    Section bt = section_truncate_order(b, t);

    struct PEntry { unsigned i, j; Jet jet; };
    std::vector<PEntry> pent;
    for (unsigned i = 0; i < P.dim; ++i)
        for (unsigned j = 0; j < P.dim; ++j)
            if (!P.at(i, j).is_zero()) pent.push_back({i, j, jet_truncate(P.at(i, j), t)});

    std::map<std::pair<Mono, Mono>, Jet> acc;
    for (const auto& [ka, ja] : at.terms)
        for (const auto& [kb, jb] : bt.terms) {
            if (mono_degree(ka.sym) != p || mono_degree(kb.sym) != p)
                throw structural_error("full_contraction: section not concentrated in fibre degree p");
            Jet j = jet_mul(ja, jb);
            if (j.is_zero()) continue;
            auto key = std::make_pair(ka.sym, kb.sym);
            auto it = acc.find(key);
            if (it == acc.end()) acc.emplace(key, std::move(j));
            else it->second = jet_add(it->second, j);
        }
    for (unsigned round = 0; round < p && !acc.empty(); ++round) {
        std::map<std::pair<Mono, Mono>, Jet> next;
        for (const auto& [q, j] : acc)
            for (const auto& pe : pent) {
                unsigned ma = mono_exp(q.first, pe.i);
                if (ma == 0) continue;
                unsigned mb = mono_exp(q.second, pe.j);
                if (mb == 0) continue;
                auto q2 = std::make_pair(q.first - mono_unit(pe.i), q.second - mono_unit(pe.j));
                Jet contrib = jet_mul(j, pe.jet);
                unsigned long mult = static_cast<unsigned long>(ma) * mb;
                if (mult != 1) contrib = jet_scale(contrib, Scalar(Rat(mult)));
                if (contrib.is_zero()) continue;
                auto it = next.find(q2);
                if (it == next.end()) next.emplace(q2, std::move(contrib));
                else it->second = jet_add(it->second, contrib);
            }
        acc = std::move(next);
    }
    auto it = acc.find(std::make_pair(Mono(0), Mono(0)));
    if (it != acc.end()) {
        mpz_class fact = 1;
        for (unsigned k = 2; k <= p; ++k) fact *= k;
        Rat w(mpz_class(1), fact);
        w.canonicalize();
        out = jet_scale(it->second, Scalar(w));
    }
    return out;
}

/// Fibre-degree-p part of a Deg-homogeneous lift component, or nothing.
inline Section lift_part(const Lift& L, unsigned deg, unsigned p, const StarContext& ctx) {
    auto it = L.comp.find(deg);
    if (it == L.comp.end()) return section_zero(ctx.model.dim, ctx.model.frame, ctx.caps);
    return deg_sym_part(it->second, deg, p);
}
} // namespace detail

/**
 * M_s(f,g) as a jet, assembled directly from lift components:
 *
 *   symmetric kind:  M_s = sum_{k=0}^{[(s-1)/2]} sum_{l=0}^{k} (-4)^k
 *        C_{s-2k}( tau_f^{(s-2k+4l)}, tau_g^{(s+2k-4l)} )
 *   normally ordered kind:  M_s = sum_{k=0}^{s} sum_{l=0}^{k} (-2i)^k
 *        C_{s-k}( tau_f^{(s-k+2l)}, tau_g^{(s+k-2l)} )
 *
 * where C_p is the p-fold fibre contraction of the fibre-degree-p parts and
 * the superscript is the Deg of the component.  Must agree with the pipeline
 * coefficient extraction; the comparison is a structural self-test of the
 * whole construction.
 */
inline Jet m_from_components(const StarContext& ctx, const Lift& lf, const Lift& lg, unsigned s) {
    const PairingTensor& P = ctx.pairing();
    int t = std::min({lf.total.jetOrder, lg.total.jetOrder, P.order});
    Jet out = jet_zero(ctx.model.dim, t);
    int kmax = ctx.kind == StarKind::Weyl ? (int(s) - 1) / 2 : int(s);
    for (int k = 0; k <= kmax; ++k) {
        unsigned p = ctx.kind == StarKind::Weyl ? s - 2 * unsigned(k) : s - unsigned(k);
        unsigned stepl = ctx.kind == StarKind::Weyl ? 4 : 2;
        Scalar w = ctx.kind == StarKind::Weyl ? Scalar(Rat(-4)).pow_int(k)
                                              : Scalar(Rat(0), Rat(-2)).pow_int(k);
        for (int l = 0; l <= k; ++l) {
            unsigned a = p + stepl * unsigned(l);
            unsigned b = 2 * s - a;
            Section fa = detail::lift_part(lf, a, p, ctx);
            Section gb = detail::lift_part(lg, b, p, ctx);
            if (fa.is_zero() || gb.is_zero()) continue;
            Jet c = detail::full_contraction(fa, gb, P, p, t);
            out = jet_add(out, jet_scale(c, w));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// The flat connection D and its checks
// ---------------------------------------------------------------------------

/// D a = -delta a + nabla a + (i/hbar)[r, a].
inline Section flat_connection(const StarContext& ctx, const Section& a) {
    Section out = section_sub(nabla(a, ctx.model), delta(a));
    Section c = graded_comm(ctx.r, a, ctx.pairing());
    if (!c.is_zero()) out = section_add(out, detail::i_over_h(c));
    return out;
}

/**
 * Structural flatness checks:
 *  - the connection form starts at Deg 3 and is delta^{-1}-normalized,
 *  - the recursion defect delta r - R - nabla r - (i/hbar) r o r vanishes in
 *    every Deg component below Kr,
 *  - D^2 vanishes on probe sections in every Deg component up to Kr - 3.
 */
inline Report check_flatness(const StarContext& ctx) {
    Report rep;
    const PairingTensor& P = ctx.pairing();

    {
        bool ok = true;
        std::string why;
        for (unsigned d = 0; d <= 2 && ok; ++d)
            if (!deg_part(ctx.r, d).is_zero()) {
                ok = false;
                why = "component at Deg " + std::to_string(d);
            }
        rep.add("r-starts-at-deg-3", ok, why);
    }
    rep.add("r-normalization", delta_inv(ctx.r).is_zero(),
            delta_inv(ctx.r).is_zero() ? "" : "delta^{-1} r != 0");
    {
        Section defect = delta(ctx.r);
        defect = section_sub(defect, curvature_section(ctx.model, ctx.caps));
        defect = section_sub(defect, nabla(ctx.r, ctx.model));
        Section quad = fiber_star(ctx.r, ctx.r, P);
        if (!quad.is_zero()) defect = section_sub(defect, detail::i_over_h(quad));
        bool ok = true;
        std::string why;
        for (unsigned d = 0; d + 1 <= ctx.Kr && ok; ++d)
            if (!deg_part(defect, d).is_zero()) {
                ok = false;
                why = "defect at Deg " + std::to_string(d) + ": " +
                      section_to_string(deg_part(defect, d));
            }
        rep.add("r-equation-window", ok, why);
    }
    {
        // probes covering scalar, fibre, form, and hbar content
        std::vector<Section> probes;
        const unsigned dim = ctx.model.dim;
        Frame fr = ctx.model.frame;
        int ord = ctx.model.order;
        probes.push_back(section_one(dim, fr, ctx.caps, ord));
        {
            Section p = section_zero(dim, fr, ctx.caps);
            p.jetOrder = ord;
            p.terms.emplace(TermKey{0, mono_unit(0), 0u}, jet_coord(dim, ord, dim - 1, ctx.model.base[dim - 1]));
            probes.push_back(p);
        }
        {
            Section p = section_zero(dim, fr, ctx.caps);
            p.jetOrder = ord;
            p.terms.emplace(TermKey{0, mono_unit(0) + mono_unit(dim - 1), 0u}, jet_const(dim, ord, Scalar::one()));
            p.terms.emplace(TermKey{1, 0, 1u}, jet_coord(dim, ord, 0, ctx.model.base[0]));
            probes.push_back(p);
        }
        bool ok = true;
        std::string why;
        for (size_t pi = 0; pi < probes.size() && ok; ++pi) {
            Section dd = flat_connection(ctx, flat_connection(ctx, probes[pi]));
            for (unsigned d = 0; d + 3 <= ctx.Kr && ok; ++d)
                if (!deg_part(dd, d).is_zero()) {
                    ok = false;
                    why = "D^2 on probe " + std::to_string(pi + 1) + " at Deg " + std::to_string(d);
                }
        }
        rep.add("flatness-window", ok, why);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Axiom verification
// ---------------------------------------------------------------------------

/**
 * Order-by-order axioms of the truncated star product on concrete germs
 * f, g, h:
 *  - hbar^0 coefficient is the pointwise product,
 *  - M_1(f,g) - M_1(g,f) = 2 {f,g} (the commutator normalization carries an
 *    explicit factor 2 relative to the Poisson bracket),
 *  - 1 is a two-sided unit at every order,
 *  - associativity holds coefficient-wise through hbar^N,
 *  - conj(M_t(f,g)) = (-1)^t M_t(conj g, conj f),
 *  - symmetric kind only: M_t(f,g) = (-1)^t M_t(g,f), and M_t of real germs
 *    is a real jet.
 */
inline Report verify_axioms(const StarContext& ctx, const Jet& f, const Jet& g, const Jet& h) {
    Report rep;
    if (f.order < int(4 * ctx.N + 2))
        throw structural_error("verify_axioms: jet order must be at least 4N+2 for nested products");
    StarProduct fg = star(ctx, f, g);
    StarProduct gf = star(ctx, g, f);

    {
        Jet expect = jet_truncate(jet_mul(f, g), fg.coeff[0].order);
        bool ok = jet_sub(fg.coeff[0], expect).is_zero();
        rep.add("order-0-pointwise", ok, ok ? "" : jet_to_string(jet_sub(fg.coeff[0], expect)));
    }
    if (ctx.N >= 1) {
        Jet anti = jet_sub(star_m_jet(fg, 1), star_m_jet(gf, 1));
        Jet pb = poisson_bracket(f, g, ctx.model);
        Jet expect = jet_scale(jet_truncate(pb, anti.order), Scalar(Rat(2)));
        bool ok = jet_sub(anti, jet_truncate(expect, anti.order)).is_zero();
        rep.add("order-1-bracket", ok,
                ok ? "M1(f,g) - M1(g,f) = 2 {f,g}" : jet_to_string(jet_sub(anti, expect)));
    }
    {
        Jet one = jet_const(f.dim, f.order, Scalar::one());
        StarProduct lf = star(ctx, one, f);
        StarProduct rf = star(ctx, f, one);
        bool ok = true;
        std::string why;
        for (unsigned t = 0; t <= ctx.N && ok; ++t) {
            Jet ids = jet_truncate(f, lf.coeff[t].order);
            Jet expect = t == 0 ? ids : jet_zero(f.dim, lf.coeff[t].order);
            if (!jet_sub(lf.coeff[t], expect).is_zero()) { ok = false; why = "left unit at hbar^" + std::to_string(t); }
            else if (!jet_sub(rf.coeff[t], expect).is_zero()) { ok = false; why = "right unit at hbar^" + std::to_string(t); }
        }
        rep.add("unit", ok, why);
    }
    {
        StarProduct gh = star(ctx, g, h);
        std::vector<Jet> lhs = star_jets_bilinear(ctx, fg.coeff, {h});
        std::vector<Jet> rhs = star_jets_bilinear(ctx, {f}, gh.coeff);
        bool ok = true;
        std::string why;
        for (unsigned s = 0; s <= ctx.N && ok; ++s) {
            int to = std::min(lhs[s].order, rhs[s].order);
            Jet d = jet_sub(jet_truncate(lhs[s], to), jet_truncate(rhs[s], to));
            if (!d.is_zero()) {
                ok = false;
                why = "defect at hbar^" + std::to_string(s) + ": " + jet_to_string(d);
            }
        }
        rep.add("associativity", ok, why);
    }
    {
        StarProduct cc = star(ctx, jet_conjugate(g, ctx.model.frame), jet_conjugate(f, ctx.model.frame));
        bool ok = true;
        std::string why;
        for (unsigned s = 0; s <= ctx.N && ok; ++s) {
            Jet lhs = jet_conjugate(star_m_jet(fg, s), ctx.model.frame);
            Jet rhs = star_m_jet(cc, s);
            if (s % 2 == 1) rhs = jet_neg(rhs);
            if (!jet_sub(lhs, rhs).is_zero()) {
                ok = false;
                why = "defect at hbar^" + std::to_string(s);
            }
        }
        rep.add("conjugation-parity", ok, why);
    }
    if (ctx.kind == StarKind::Weyl) {
        bool ok = true;
        std::string why;
        for (unsigned s = 0; s <= ctx.N && ok; ++s) {
            Jet rhs = star_m_jet(gf, s);
            if (s % 2 == 1) rhs = jet_neg(rhs);
            if (!jet_sub(star_m_jet(fg, s), rhs).is_zero()) {
                ok = false;
                why = "defect at hbar^" + std::to_string(s);
            }
        }
        rep.add("symmetry", ok, why);

        Jet fr = jet_add(f, jet_conjugate(f, ctx.model.frame));
        Jet gr = jet_add(g, jet_conjugate(g, ctx.model.frame));
        StarProduct rr = star(ctx, fr, gr);
        ok = true;
        for (unsigned s = 0; s <= ctx.N && ok; ++s) {
            Jet m = star_m_jet(rr, s);
            if (!jet_sub(m, jet_conjugate(m, ctx.model.frame)).is_zero()) {
                ok = false;
                why = "M_" + std::to_string(s) + " of real germs is not real";
            }
        }
        rep.add("reality", ok, why);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Type pattern of the normally ordered product
// ---------------------------------------------------------------------------

namespace detail {
/// True when every monomial of the jet has at least one variable inside
/// [lo, hi); i.e. nothing purely supported outside that slot range.
inline bool jet_monomials_touch(const Jet& j, unsigned lo, unsigned hi) {
    for (const auto& [m, v] : j.c) {
        (void)v;
        bool touch = false;
        for (unsigned w = lo; w < hi && !touch; ++w)
            if (mono_exp(m, w) != 0) touch = true;
        if (!touch) return false;
    }
    return true;
}
} // namespace detail

/**
 * Differentiation pattern of the normally ordered product: the left factor is
 * differentiated only holomorphically, the right factor only
 * antiholomorphically.  Verified through
 *  - the connection form having no pure-type fibre components,
 *  - lifts of (anti)holomorphic germs having no purely opposite-type fibre
 *    components,
 *  - exact absorption: h * f = h f for holomorphic f, g * h = g h for
 *    antiholomorphic g, as jets at every order,
 *  - star coefficients at the base point being invariant under perturbations
 *    of the left factor with no purely holomorphic monomials (mirrored on the
 *    right).
 */
inline Report verify_wick_type(const StarContext& ctx, const Jet& hGerm, const Jet& fHol,
                               const Jet& gAnti, const std::vector<Jet>& leftPerts,
                               const std::vector<Jet>& rightPerts) {
    if (ctx.kind != StarKind::Wick)
        throw structural_error("verify_wick_type: context is not normally ordered");
    Report rep;
    const unsigned n = ctx.model.n;

    {
        bool ok = true;
        std::string why;
        for (unsigned p = 0; p <= ctx.caps.maxDeg && ok; ++p) {
            if (!sym_type_part(ctx.r, p, 0).is_zero()) {
                ok = false;
                why = "purely holomorphic fibre part at degree " + std::to_string(p);
            } else if (!sym_type_part(ctx.r, 0, p).is_zero()) {
                ok = false;
                why = "purely antiholomorphic fibre part at degree " + std::to_string(p);
            }
        }
        rep.add("r-no-pure-type-parts", ok, why);
    }
    {
        Lift L = lift(ctx, fHol);
        bool ok = true;
        std::string why;
        for (unsigned q = 1; q <= ctx.caps.maxDeg && ok; ++q)
            if (!sym_type_part(L.total, 0, q).is_zero()) {
                ok = false;
                why = "lift of holomorphic germ has pure-antiholomorphic fibre degree " + std::to_string(q);
            }
        rep.add("holomorphic-lift-type", ok, why);
        Lift M = lift(ctx, gAnti);
        ok = true;
        for (unsigned q = 1; q <= ctx.caps.maxDeg && ok; ++q)
            if (!sym_type_part(M.total, q, 0).is_zero()) {
                ok = false;
                why = "lift of antiholomorphic germ has pure-holomorphic fibre degree " + std::to_string(q);
            }
        rep.add("antiholomorphic-lift-type", ok, why);
    }
    {
        StarProduct sp = star(ctx, hGerm, fHol);
        bool ok = true;
        std::string why;
        Jet expect = jet_truncate(jet_mul(hGerm, fHol), sp.coeff[0].order);
        if (!jet_sub(sp.coeff[0], expect).is_zero()) { ok = false; why = "order 0 differs from pointwise product"; }
        for (unsigned t = 1; t <= ctx.N && ok; ++t)
            if (!sp.coeff[t].is_zero()) {
                ok = false;
                why = "nonzero coefficient at hbar^" + std::to_string(t) + ": " + jet_to_string(sp.coeff[t]);
            }
        rep.add("holomorphic-absorption-right", ok, why);
    }
    {
        StarProduct sp = star(ctx, gAnti, hGerm);
        bool ok = true;
        std::string why;
        Jet expect = jet_truncate(jet_mul(gAnti, hGerm), sp.coeff[0].order);
        if (!jet_sub(sp.coeff[0], expect).is_zero()) { ok = false; why = "order 0 differs from pointwise product"; }
        for (unsigned t = 1; t <= ctx.N && ok; ++t)
            if (!sp.coeff[t].is_zero()) {
                ok = false;
                why = "nonzero coefficient at hbar^" + std::to_string(t) + ": " + jet_to_string(sp.coeff[t]);
            }
        rep.add("antiholomorphic-absorption-left", ok, why);
    }
    {
        StarProduct base = star(ctx, hGerm, fHol);
        StarProduct base2 = star(ctx, gAnti, hGerm);
        bool ok = true;
        std::string why;
        for (const auto& pert : leftPerts) {
            if (!detail::jet_monomials_touch(pert, n, 2 * n))
                throw structural_error("verify_wick_type: left perturbation has a purely holomorphic monomial");
            StarProduct sp = star(ctx, jet_add(hGerm, pert), fHol);
            for (unsigned t = 0; t <= ctx.N && ok; ++t)
                if (sp.mVal[t] != base.mVal[t]) {
                    ok = false;
                    why = "left perturbation changed M_" + std::to_string(t) + " at the base point";
                }
        }
        for (const auto& pert : rightPerts) {
            if (!detail::jet_monomials_touch(pert, 0, n))
                throw structural_error("verify_wick_type: right perturbation has a purely antiholomorphic monomial");
            StarProduct sp = star(ctx, gAnti, jet_add(hGerm, pert));
            for (unsigned t = 0; t <= ctx.N && ok; ++t)
                if (sp.mVal[t] != base2.mVal[t]) {
                    ok = false;
                    why = "right perturbation changed M_" + std::to_string(t) + " at the base point";
                }
        }
        rep.add("perturbation-invariance", ok, why);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Differentiation-order pattern
// ---------------------------------------------------------------------------

namespace detail {
/// Zero constant term in every term jet of the difference of two sections.
inline bool eval0_equal(const Section& a, const Section& b) {
    Section d = section_sub(a, b);
    for (const auto& [k, j] : d.terms) {
        (void)k;
        if (!jet_eval0(j).is_zero()) return false;
    }
    return true;
}

/// Deterministic jet supported on all monomials of exact total degree d.
inline Jet degree_probe(unsigned dim, int order, unsigned d) {
    Jet j = jet_zero(dim, order);
    if (int(d) > order) return j;
    auto degs = monos_by_degree(dim, d);
    long c = 1;
    for (Mono m : degs[d]) {
        j.c.emplace(m, Scalar(Rat(c, 7)));
        c += 3;
    }
    return j;
}
} // namespace detail

/**
 * Order pattern of the coefficients: M_s at the base point uses derivatives
 * of each argument up to order s only, and the lift component of Deg k and
 * fibre degree p uses derivatives up to order (k+p)/2.  Tested by perturbing
 * the germ with monomials of exact degree d and checking nothing below the
 * bound moves at the base point.
 */
inline Report verify_order(const StarContext& ctx, const Jet& f, const Jet& g, unsigned smax) {
    Report rep;
    {
        StarProduct base = star(ctx, f, g);
        bool ok = true;
        std::string why;
        for (unsigned s = 0; s <= smax && s <= ctx.N && ok; ++s) {
            Jet pert = detail::degree_probe(f.dim, f.order, s + 1);
            StarProduct left = star(ctx, jet_add(f, pert), g);
            StarProduct right = star(ctx, f, jet_add(g, pert));
            for (unsigned t = 0; t <= s && ok; ++t) {
                if (left.mVal[t] != base.mVal[t]) {
                    ok = false;
                    why = "M_" + std::to_string(t) + " moved under degree-" + std::to_string(s + 1) +
                          " perturbation of the left argument";
                }
                if (ok && right.mVal[t] != base.mVal[t]) {
                    ok = false;
                    why = "M_" + std::to_string(t) + " moved under degree-" + std::to_string(s + 1) +
                          " perturbation of the right argument";
                }
            }
        }
        rep.add("m-order-bound", ok, why);
    }
    {
        Lift L0 = lift(ctx, f);
        bool ok = true;
        std::string why;
        for (unsigned d = 1; d <= smax + 1 && ok; ++d) {
            Jet pert = detail::degree_probe(f.dim, f.order, d);
            if (pert.is_zero()) continue;
            Lift L1 = lift(ctx, jet_add(f, pert));
            for (unsigned k = 0; k <= ctx.K && ok; ++k) {
                for (unsigned p = 0; p <= k && ok; ++p) {
                    if ((k + p) % 2 != 0) continue;
                    if ((k + p) / 2 >= d) continue; // bound not claimed below d
                    Section a = detail::lift_part(L0, k, p, ctx);
                    Section b = detail::lift_part(L1, k, p, ctx);
                    if (!detail::eval0_equal(a, b)) {
                        ok = false;
                        why = "lift component Deg " + std::to_string(k) + " fibre degree " + std::to_string(p) +
                              " moved at the base point under a degree-" + std::to_string(d) + " perturbation";
                    }
                }
            }
        }
        rep.add("lift-order-bound", ok, why);
    }
    return rep;
}

} // namespace fedstar

#endif
