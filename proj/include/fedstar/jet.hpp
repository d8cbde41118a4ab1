// SPDX-License-Identifier: MIT

/**
 * \file
 * \brief Truncated Taylor expansions (jets) with exact coefficients.
 *
 * A Jet of order J in d variables stores the derivatives of a function germ at
 * a fixed expansion point: coefficients are keyed by multi-index alpha with
 * |alpha| <= J and hold c_alpha = (d^alpha f)(x0), so that formally
 *
 *     f(x0 + u) = sum_alpha c_alpha u^alpha / alpha! .
 *
 * Storing raw derivatives instead of divided Taylor coefficients makes the
 * partial derivative a pure index shift; the price is a binomial weight in the
 * product (Leibniz rule).  All arithmetic is exact over Gaussian rationals.
 *
 * The `order` field is a reliability certificate: coefficients up to |alpha| =
 * order agree with the underlying germ.  Taking a partial derivative lowers it
 * by one.  Once it would drop below zero the information is gone, and asking
 * for a further derivative throws instead of silently returning garbage.
 */

#ifndef FEDSTAR_JET_HPP
#define FEDSTAR_JET_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fedstar/error.hpp"
#include "fedstar/scalar.hpp"

namespace fedstar {

/// Coordinate frame of a chart: real coordinates x^1..x^2n, or complex ones
/// z^1..z^n, zbar^1..zbar^n treated as 2n formally independent variables.
enum class Frame { Real, Complex };

/// Packed multi-index: one byte per variable, variable 0 in the lowest byte.
using Mono = std::uint64_t;

constexpr unsigned kMaxVars = 8;

inline unsigned mono_exp(Mono m, unsigned v) { return unsigned(m >> (8 * v)) & 0xffu; }
inline Mono mono_unit(unsigned v) { return Mono(1) << (8 * v); }

inline unsigned mono_degree(Mono m) {
    unsigned d = 0;
    while (m != 0) {
        d += unsigned(m & 0xffu);
        m >>= 8;
    }
    return d;
}

/// Componentwise difference a - b; false if any exponent would go negative.
inline bool mono_sub(Mono a, Mono b, Mono& out) {
    Mono r = 0;
    for (unsigned v = 0; v < kMaxVars; ++v) {
        unsigned ea = mono_exp(a, v), eb = mono_exp(b, v);
        if (eb > ea) return false;
        r |= Mono(ea - eb) << (8 * v);
    }
    out = r;
    return true;
}

/// Binomial coefficients as exact machine integers; n is capped well below the
/// point where they would overflow 64 bits.
inline unsigned long long binom_u64(unsigned n, unsigned k) {
    constexpr unsigned kMaxN = 64;
    if (n > kMaxN) throw structural_error("binomial table exceeded; jet order too large");
    static const auto table = [] {
        std::vector<std::vector<unsigned long long>> t(kMaxN + 1);
        for (unsigned i = 0; i <= kMaxN; ++i) {
            t[i].resize(i + 1, 1);
            for (unsigned j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
        }
        return t;
    }();
    if (k > n) return 0;
    return table[n][k];
}

struct Jet {
    unsigned dim = 0;
    int order = 0;
    std::map<Mono, Scalar> c; // no zero values are ever stored

    bool is_zero() const { return c.empty(); }

    friend bool operator==(const Jet& a, const Jet& b) {
        return a.dim == b.dim && a.order == b.order && a.c == b.c;
    }
};

inline Jet jet_zero(unsigned dim, int order) {
    if (dim == 0 || dim > kMaxVars) throw structural_error("jet dimension out of range");
    if (order < 0) throw structural_error("negative jet order");
    return Jet{dim, order, {}};
}

inline Jet jet_const(unsigned dim, int order, const Scalar& v) {
    Jet j = jet_zero(dim, order);
    if (!v.is_zero()) j.c[0] = v;
    return j;
}

/// Jet of the coordinate function x0_v + u_v.
inline Jet jet_coord(unsigned dim, int order, unsigned v, const Scalar& base) {
    Jet j = jet_const(dim, order, base);
    if (v >= dim) throw structural_error("coordinate index out of range");
    if (order >= 1) j.c[mono_unit(v)] = Scalar::one();
    return j;
}

namespace detail {
inline void jet_check_match(const Jet& a, const Jet& b, const char* op) {
    if (a.dim != b.dim) throw structural_error(std::string(op) + ": jet dimension mismatch");
    if (a.order != b.order) throw structural_error(std::string(op) + ": jet order mismatch");
}
inline void jet_insert_add(Jet& j, Mono m, const Scalar& v) {
    if (v.is_zero()) return;
    auto it = j.c.find(m);
    if (it == j.c.end()) {
        j.c.emplace(m, v);
    } else {
        it->second += v;
        if (it->second.is_zero()) j.c.erase(it);
    }
}
} // namespace detail

inline Jet jet_add(const Jet& a, const Jet& b) {
    detail::jet_check_match(a, b, "jet_add");
    Jet r = a;
    for (const auto& [m, v] : b.c) detail::jet_insert_add(r, m, v);
    return r;
}

inline Jet jet_neg(const Jet& a) {
    Jet r = a;
    for (auto& [m, v] : r.c) v = -v;
    return r;
}

inline Jet jet_sub(const Jet& a, const Jet& b) { return jet_add(a, jet_neg(b)); }

inline Jet jet_scale(const Jet& a, const Scalar& s) {
    Jet r = jet_zero(a.dim, a.order);
    if (s.is_zero()) return r;
    for (const auto& [m, v] : a.c) r.c.emplace(m, v * s);
    return r;
}

/// Leibniz product: c_gamma(fg) = sum binom(gamma, alpha) c_alpha(f) c_beta(g).
inline Jet jet_mul(const Jet& a, const Jet& b) {
    detail::jet_check_match(a, b, "jet_mul");
    Jet r = jet_zero(a.dim, a.order);
    const unsigned cap = unsigned(a.order);
    for (const auto& [ma, va] : a.c) {
        const unsigned da = mono_degree(ma);
        if (da > cap) continue;
        for (const auto& [mb, vb] : b.c) {
            if (da + mono_degree(mb) > cap) continue;
            Mono mg = ma + mb;
            Scalar t = va * vb;
            for (unsigned v = 0; v < a.dim; ++v) {
                unsigned ea = mono_exp(ma, v);
                if (ea == 0) continue;
                unsigned long long w = binom_u64(ea + mono_exp(mb, v), ea);
                if (w != 1) t *= Scalar(Rat(static_cast<unsigned long>(w)));
            }
            detail::jet_insert_add(r, mg, t);
        }
    }
    return r;
}

/// Formal partial derivative; spends one unit of the order budget.
inline Jet jet_partial(const Jet& a, unsigned v) {
    if (v >= a.dim) throw structural_error("jet_partial: variable index out of range");
    if (a.order < 1) throw budget_error("jet_partial: derivative budget exhausted (order 0 jet)");
    Jet r = jet_zero(a.dim, a.order - 1);
    for (const auto& [m, val] : a.c) {
        if (mono_exp(m, v) == 0) continue;
        r.c.emplace(m - mono_unit(v), val);
    }
    return r;
}

/// Restriction to a lower order; never raises the certificate.
inline Jet jet_truncate(const Jet& a, int order) {
    if (order > a.order) throw structural_error("jet_truncate: cannot raise jet order");
    if (order < 0) throw structural_error("jet_truncate: negative target order");
    if (order == a.order) return a;
    Jet r = jet_zero(a.dim, order);
    for (const auto& [m, v] : a.c)
        if (mono_degree(m) <= unsigned(order)) r.c.emplace(m, v);
    return r;
}

inline Scalar jet_eval0(const Jet& a) {
    auto it = a.c.find(0);
    return it == a.c.end() ? Scalar::zero() : it->second;
}

namespace detail {
/// All multi-indices of the given dimension grouped by total degree.
inline std::vector<std::vector<Mono>> monos_by_degree(unsigned dim, unsigned maxdeg) {
    std::vector<std::vector<Mono>> out(maxdeg + 1);
    std::vector<Mono> cur{0};
    out[0] = cur;
    for (unsigned d = 1; d <= maxdeg; ++d) {
        std::vector<Mono> next;
        for (Mono m : out[d - 1])
            for (unsigned v = 0; v < dim; ++v) {
                Mono cand = m + mono_unit(v);
                // keep only the canonical generation path to avoid duplicates
                bool lead = true;
                for (unsigned w = v + 1; w < dim; ++w)
                    if (mono_exp(m, w) != 0) lead = false;
                if (lead) next.push_back(cand);
            }
        out[d] = next;
    }
    return out;
}
} // namespace detail

/// Multiplicative inverse of a jet with nonzero constant term, solved degree by
/// degree from a * b = 1.
inline Jet jet_invert(const Jet& a) {
    Scalar a0 = jet_eval0(a);
    if (a0.is_zero()) throw singularity_error("jet_invert: constant term vanishes");
    Scalar a0inv = a0.inv();
    Jet b = jet_const(a.dim, a.order, a0inv);
    auto degrees = detail::monos_by_degree(a.dim, unsigned(a.order));
    for (unsigned d = 1; d <= unsigned(a.order); ++d) {
        for (Mono g : degrees[d]) {
            Scalar acc = Scalar::zero();
            for (const auto& [ma, va] : a.c) {
                if (ma == 0) continue;
                Mono mb;
                if (!mono_sub(g, ma, mb)) continue;
                auto it = b.c.find(mb);
                if (it == b.c.end()) continue;
                Scalar t = va * it->second;
                for (unsigned v = 0; v < a.dim; ++v) {
                    unsigned ea = mono_exp(ma, v);
                    if (ea == 0) continue;
                    unsigned long long w = binom_u64(mono_exp(g, v), ea);
                    if (w != 1) t *= Scalar(Rat(static_cast<unsigned long>(w)));
                }
                acc += t;
            }
            if (!acc.is_zero()) b.c.emplace(g, -(a0inv * acc));
        }
    }
    return b;
}

inline Jet jet_pow(const Jet& a, unsigned e) {
    Jet r = jet_const(a.dim, a.order, Scalar::one());
    for (unsigned k = 0; k < e; ++k) r = jet_mul(r, a);
    return r;
}

/// Complex conjugate of the germ.  In a complex frame conjugation also swaps
/// each variable z^k with its partner zbar^k, i.e. byte k with byte n+k.
inline Jet jet_conjugate(const Jet& a, Frame frame) {
    Jet r = jet_zero(a.dim, a.order);
    if (frame == Frame::Real) {
        for (const auto& [m, v] : a.c) r.c.emplace(m, v.conj());
        return r;
    }
    if (a.dim % 2 != 0) throw structural_error("jet_conjugate: complex frame needs even dimension");
    const unsigned n = a.dim / 2;
    for (const auto& [m, v] : a.c) {
        Mono w = 0;
        for (unsigned k = 0; k < n; ++k) {
            w |= Mono(mono_exp(m, k)) << (8 * (k + n));
            w |= Mono(mono_exp(m, k + n)) << (8 * k);
        }
        r.c.emplace(w, v.conj());
    }
    return r;
}

/// Debug rendering such as "1 - 2*u0 + 1/2*u0^2*u1".
inline std::string jet_to_string(const Jet& a) {
    if (a.c.empty()) return "0";
    std::string out;
    for (const auto& [m, v] : a.c) {
        if (!out.empty()) out += " + ";
        out += "(" + v.str() + ")";
        for (unsigned var = 0; var < a.dim; ++var) {
            unsigned e = mono_exp(m, var);
            if (e == 0) continue;
            out += "*u" + std::to_string(var);
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

} // namespace fedstar

#endif
