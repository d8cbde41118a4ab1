// SPDX-License-Identifier: MIT

/**
 * \file
 * \brief Exact complex rational scalars.
 *
 * Every coefficient in this library is a Gaussian rational a + b*i with a, b
 * arbitrary-precision reduced fractions.  There is no floating point anywhere;
 * equality of scalars is exact equality.
 */

#ifndef FEDSTAR_SCALAR_HPP
#define FEDSTAR_SCALAR_HPP

#include <gmpxx.h>

#include <string>
#include <utility>

#include "fedstar/error.hpp"

namespace fedstar {

using Rat = mpq_class;

/// Reduced fraction from a numerator/denominator pair.
inline Rat rat(long num, long den = 1) {
    if (den == 0) throw structural_error("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p", "-p" or "p/q" in base ten.
inline Rat rat_from_string(const std::string& s) {
    Rat q;
    try {
        q = Rat(s, 10);
    } catch (const std::invalid_argument&) {
        throw structural_error("malformed rational literal: '" + s + "'");
    }
    if (sgn(q.get_den()) == 0) throw structural_error("rational literal with zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

struct Scalar {
    Rat re, im;

    Scalar() : re(0), im(0) {}
    Scalar(long v) : re(v), im(0) {}                       // NOLINT(google-explicit-constructor)
    Scalar(Rat r) : re(std::move(r)), im(0) {}             // NOLINT(google-explicit-constructor)
    Scalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar imag_unit() { return Scalar(Rat(0), Rat(1)); }
    static Scalar of(long num, long den = 1) { return Scalar(rat(num, den)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) { return {a.re + b.re, a.im + b.im}; }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return {a.re - b.re, a.im - b.im}; }
    friend Scalar operator-(const Scalar& a) { return {-a.re, -a.im}; }

    // (a + b i)(c + d i) = (ac - bd) + (ad + bc) i
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return {Rat(a.re * b.re - a.im * b.im), Rat(a.re * b.im + a.im * b.re)};
    }

    Scalar& operator+=(const Scalar& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar conj() const { return {re, Rat(-im)}; }

    Scalar inv() const {
        if (is_zero()) throw singularity_error("inverse of zero scalar");
        Rat n = re * re + im * im;
        return {Rat(re / n), Rat(-im / n)};
    }

    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

    Scalar pow_int(long e) const {
        if (e < 0) return inv().pow_int(-e);
        Scalar acc = one();
        Scalar base = *this;
        for (; e > 0; e >>= 1) {
            if (e & 1) acc *= base;
            base *= base;
        }
        return acc;
    }

    /// Compact display form, e.g. "0", "3/2", "i", "1/2-3i".
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        if (sgn(re) != 0) out += rat_to_string(re);
        if (sgn(im) != 0) {
            if (sgn(im) > 0 && !out.empty()) out += "+";
            if (im == -1)
                out += "-";
            else if (im != 1)
                out += rat_to_string(im);
            out += "i";
        }
        return out;
    }
};

inline Scalar scalar_conj(const Scalar& a) { return a.conj(); }

} // namespace fedstar

#endif
