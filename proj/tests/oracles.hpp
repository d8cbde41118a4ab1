// SPDX-License-Identifier: MIT
#pragma once

// Independent cross-check implementations for the test suite.  Everything in
// this header is written directly against polynomial calculus with dense
// exponent vectors; it shares only the exact scalar type with the library, so
// agreement with the jet pipeline is a genuine two-route check.

#include <cstdint>
#include <map>
#include <vector>

#include "fedstar/jet.hpp"
#include "fedstar/scalar.hpp"

namespace oracles {

using fedstar::Rat;
using fedstar::rat;
using fedstar::Scalar;

struct Poly {
    int dim = 0;
    std::map<std::vector<int>, Scalar> c;

    static Poly zero(int dim) { return {dim, {}}; }
    static Poly constant(int dim, const Scalar& v) {
        Poly p{dim, {}};
        if (!v.is_zero()) p.c[std::vector<int>(static_cast<std::size_t>(dim), 0)] = v;
        return p;
    }
    static Poly var(int dim, int v) {
        Poly p{dim, {}};
        std::vector<int> e(static_cast<std::size_t>(dim), 0);
        e[static_cast<std::size_t>(v)] = 1;
        p.c[e] = Scalar::one();
        return p;
    }
};

inline Poly operator+(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [e, v] : b.c) {
        auto it = out.c.find(e);
        if (it == out.c.end()) {
            out.c.emplace(e, v);
        } else {
            it->second += v;
            if (it->second.is_zero()) out.c.erase(it);
        }
    }
    return out;
}

inline Poly pscale(const Poly& a, const Scalar& s) {
    Poly out{a.dim, {}};
    if (s.is_zero()) return out;
    for (const auto& [e, v] : a.c) out.c.emplace(e, v * s);
    return out;
}

inline Poly operator*(const Poly& a, const Poly& b) {
    Poly out{a.dim, {}};
    for (const auto& [ea, va] : a.c)
        for (const auto& [eb, vb] : b.c) {
            std::vector<int> e(ea.size());
            for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
            auto it = out.c.find(e);
            if (it == out.c.end()) {
                out.c.emplace(std::move(e), va * vb);
            } else {
                it->second += va * vb;
                if (it->second.is_zero()) out.c.erase(it);
            }
        }
    return out;
}

inline Poly partial(const Poly& a, int v) {
    Poly out{a.dim, {}};
    for (const auto& [e, coef] : a.c) {
        int k = e[static_cast<std::size_t>(v)];
        if (k == 0) continue;
        std::vector<int> d = e;
        d[static_cast<std::size_t>(v)] = k - 1;
        out.c.emplace(std::move(d), coef * Scalar(rat(k)));
    }
    return out;
}

inline Scalar eval(const Poly& a, const std::vector<Scalar>& x) {
    Scalar acc = Scalar::zero();
    for (const auto& [e, coef] : a.c) {
        Scalar term = coef;
        for (std::size_t v = 0; v < e.size(); ++v) term *= x[v].pow_int(e[v]);
        acc += term;
    }
    return acc;
}

inline void indices_up_to(int dim, int maxDeg, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(static_cast<std::size_t>(dim), 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == dim) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[static_cast<std::size_t>(pos)] = k;
            self(self, pos + 1, left - k);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, maxDeg);
}

/// Taylor jet of a polynomial at a base point: stores raw derivative values.
inline fedstar::Jet to_jet(const Poly& p, int order, const std::vector<Scalar>& base) {
    fedstar::Jet j = fedstar::jet_zero(static_cast<unsigned>(p.dim), order);
    std::vector<std::vector<int>> idx;
    indices_up_to(p.dim, order, idx);
    for (const auto& alpha : idx) {
        Poly d = p;
        for (int v = 0; v < p.dim; ++v)
            for (int k = 0; k < alpha[static_cast<std::size_t>(v)]; ++k) d = partial(d, v);
        Scalar val = eval(d, base);
        if (val.is_zero()) continue;
        fedstar::Mono m = 0;
        for (int v = 0; v < p.dim; ++v)
            m += fedstar::Mono(alpha[static_cast<std::size_t>(v)]) * fedstar::mono_unit(unsigned(v));
        j.c.emplace(m, val);
    }
    return j;
}

/// Moyal bidifferential value on the standard chart (dim 2, Lambda^{12} = 1):
/// M_r(f,g) = (1/r!) sum Lambda^{i1 j1} ... Lambda^{ir jr} (d_i f)(d_j g).
inline Scalar moyal_m(const Poly& f, const Poly& g, unsigned r, const std::vector<Scalar>& x0) {
    Scalar acc = Scalar::zero();
    for (std::uint32_t im = 0; im < (1u << r); ++im)
        for (std::uint32_t jm = 0; jm < (1u << r); ++jm) {
            long sign = 1;
            bool dead = false;
            for (unsigned k = 0; k < r && !dead; ++k) {
                int ik = (im >> k) & 1;
                int jk = (jm >> k) & 1;
                if (ik == jk)
                    dead = true;
                else if (ik == 1)
                    sign = -sign;  // Lambda^{21} = -1
            }
            if (dead) continue;
            Poly df = f, dg = g;
            for (unsigned k = 0; k < r; ++k) {
                df = partial(df, (im >> k) & 1);
                dg = partial(dg, (jm >> k) & 1);
            }
            acc += Scalar(rat(sign)) * eval(df, x0) * eval(dg, x0);
        }
    Rat fact(1);
    for (unsigned k = 2; k <= r; ++k) fact *= k;
    return acc * Scalar(Rat(1) / fact);
}

/// hbar^r coefficient of the normally ordered product on the flat complex line
/// (omega_{1 1bar} = 1, variables z, zbar): 2^r/r! (d_z^r f)(d_zbar^r g).
inline Scalar normal_order_coeff(const Poly& f, const Poly& g, unsigned r,
                                 const std::vector<Scalar>& x0) {
    Poly df = f, dg = g;
    for (unsigned k = 0; k < r; ++k) {
        df = partial(df, 0);
        dg = partial(dg, 1);
    }
    Rat pref(1);
    for (unsigned k = 1; k <= r; ++k) {
        pref *= 2;
        pref /= k;
    }
    return Scalar(pref) * eval(df, x0) * eval(dg, x0);
}

/// Deterministic pseudo-random stream, implementation independent.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return s >> 11;
    }
    long pick(long lo, long hi) {  // inclusive
        return lo + long(next() % std::uint64_t(hi - lo + 1));
    }
};

inline Poly random_poly(int dim, int maxDeg, Rng& rng) {
    std::vector<std::vector<int>> idx;
    indices_up_to(dim, maxDeg, idx);
    Poly p = Poly::zero(dim);
    for (const auto& alpha : idx) {
        long v = rng.pick(-9, 9);
        if (v == 0) continue;
        std::vector<int> e = alpha;
        p.c.emplace(std::move(e), Scalar(rat(v)));
    }
    return p;
}

inline Scalar random_rational(Rng& rng) {
    return Scalar(rat(rng.pick(-6, 6), rng.pick(1, 5)));
}

}  // namespace oracles
