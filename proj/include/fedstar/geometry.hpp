// SPDX-License-Identifier: MIT

/**
 * \file
 * \brief Chart-level geometric data: symplectic form, Poisson tensor,
 * connection, curvature, and the operators built from them.
 *
 * A ChartModel is everything the deformation pipeline needs about one
 * coordinate chart, expanded as exact jets at a fixed base point:
 *
 *  - frame components omega_{ij} of the symplectic form (real frame x^i, or
 *    complex frame z^1..z^n, zbar^1..zbar^n as independent variables),
 *  - the inverse Poisson tensor Lambda^{ij} with Lambda^{ij} omega_{kj} =
 *    delta^i_k,
 *  - for complex frames the Hermitian matrix omega_{k lbar} with
 *    omega_{k, n+l} = (i/2) omega_{k lbar}, its inverse omega^{k lbar}
 *    normalized by omega^{k lbar} omega_{t lbar} = delta^k_t, and the
 *    normally ordered pairing (4/i) omega^{k lbar},
 *  - Christoffel symbols of a torsion-free symplectic connection (either the
 *    canonical Kaehler connection Gamma^k_{ij} = omega^{k mbar} d_i
 *    omega_{j mbar}, or the averaged connection Gamma_{ij,k} = (d_i
 *    omega_{jk} + d_j omega_{ik})/3 raised with Lambda),
 *  - its curvature R^t_{jkl} = d_k Gamma^t_{lj} - d_l Gamma^t_{kj}
 *    + Gamma^t_{km} Gamma^m_{lj} - Gamma^t_{lm} Gamma^m_{kj}.
 *
 * Jet order budget: omega carries the model order G, Christoffel symbols
 * G - 1, curvature G - 2.
 */

#ifndef FEDSTAR_GEOMETRY_HPP
#define FEDSTAR_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "fedstar/error.hpp"
#include "fedstar/jet.hpp"
#include "fedstar/report.hpp"
#include "fedstar/scalar.hpp"
#include "fedstar/section.hpp"

namespace fedstar {

enum class Connection { Kaehler, Thirds };

struct ChartModel {
    std::string name;
    Frame frame = Frame::Real;
    unsigned n = 0;   // half the chart dimension
    unsigned dim = 0; // 2n
    int order = 0;    // jet order G of omega
    Connection connection = Connection::Kaehler;
    std::vector<Scalar> base;      // coordinates of the base point (dim entries)
    std::vector<Jet> omega;        // omega_{ij}, row-major dim x dim, order G
    std::vector<Jet> hermitian;    // omega_{k lbar}, n x n, complex frames only
    std::vector<Jet> hermitianInv; // omega^{k lbar}, n x n
    PairingTensor poisson;         // Lambda^{ij}, order G
    std::optional<PairingTensor> wick; // (4/i) omega^{k lbar} in slot (k, n+l)
    std::vector<Jet> christoffel;  // Gamma^t_{ij} at t*dim*dim + i*dim + j, order G-1
    std::vector<Jet> curv;         // R^t_{jkl} at ((t*dim+j)*dim+k)*dim+l, order G-2

    const Jet& om(unsigned i, unsigned j) const { return omega[i * dim + j]; }
    const Jet& herm(unsigned k, unsigned l) const { return hermitian[k * n + l]; }
    const Jet& hermInv(unsigned k, unsigned l) const { return hermitianInv[k * n + l]; }
    const Jet& gamma(unsigned t, unsigned i, unsigned j) const {
        return christoffel[(t * dim + i) * dim + j];
    }
    const Jet& curvature(unsigned t, unsigned j, unsigned k, unsigned l) const {
        return curv[((t * dim + j) * dim + k) * dim + l];
    }
};

// ---------------------------------------------------------------------------
// Exact linear algebra over jets
// ---------------------------------------------------------------------------

/// Inverse of an m x m matrix of jets (Gauss-Jordan; a matrix of jets is
/// invertible iff its constant-term matrix is).
inline std::vector<Jet> invert_matrix(const std::vector<Jet>& a, unsigned m) {
    if (a.size() != size_t(m) * m) throw structural_error("invert_matrix: wrong entry count");
    unsigned dim = a[0].dim;
    int order = a[0].order;
    std::vector<Jet> w = a;
    std::vector<Jet> inv(size_t(m) * m, jet_zero(dim, order));
    for (unsigned i = 0; i < m; ++i) inv[i * m + i] = jet_const(dim, order, Scalar::one());
    for (unsigned c = 0; c < m; ++c) {
        unsigned piv = m;
        for (unsigned r = c; r < m; ++r)
            if (!jet_eval0(w[r * m + c]).is_zero()) { piv = r; break; }
        if (piv == m) throw singularity_error("invert_matrix: matrix not invertible at base point");
        if (piv != c)
            for (unsigned j = 0; j < m; ++j) {
                std::swap(w[piv * m + j], w[c * m + j]);
                std::swap(inv[piv * m + j], inv[c * m + j]);
            }
        Jet pinv = jet_invert(w[c * m + c]);
        for (unsigned j = 0; j < m; ++j) {
            w[c * m + j] = jet_mul(w[c * m + j], pinv);
            inv[c * m + j] = jet_mul(inv[c * m + j], pinv);
        }
        for (unsigned r = 0; r < m; ++r) {
            if (r == c || w[r * m + c].is_zero()) continue;
            Jet f = w[r * m + c];
            for (unsigned j = 0; j < m; ++j) {
                w[r * m + j] = jet_sub(w[r * m + j], jet_mul(f, w[c * m + j]));
                inv[r * m + j] = jet_sub(inv[r * m + j], jet_mul(f, inv[c * m + j]));
            }
        }
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Derived fields
// ---------------------------------------------------------------------------

namespace detail {

/// Poisson tensor of a complex-frame model from omega^{k lbar}:
/// Lambda^{k, n+l} = -2i omega^{k lbar}, Lambda^{n+l, k} = +2i omega^{k lbar}.
inline PairingTensor complex_poisson(const std::vector<Jet>& hermInv, unsigned n) {
    unsigned dim = 2 * n;
    int order = hermInv[0].order;
    std::vector<Jet> e(size_t(dim) * dim, jet_zero(dim, order));
    for (unsigned k = 0; k < n; ++k)
        for (unsigned l = 0; l < n; ++l) {
            const Jet& v = hermInv[k * n + l];
            e[k * dim + (n + l)] = jet_scale(v, Scalar(Rat(0), Rat(-2)));
            e[(n + l) * dim + k] = jet_scale(v, Scalar(Rat(0), Rat(2)));
        }
    return make_pairing(dim, PairingTensor::Shape::Antisymmetric, std::move(e));
}

/// Normally ordered pairing (4/i) omega^{k lbar} = -4i omega^{k lbar} in the
/// holomorphic-to-antiholomorphic slot (k, n+l).
inline PairingTensor wick_pairing(const std::vector<Jet>& hermInv, unsigned n) {
    unsigned dim = 2 * n;
    int order = hermInv[0].order;
    std::vector<Jet> e(size_t(dim) * dim, jet_zero(dim, order));
    for (unsigned k = 0; k < n; ++k)
        for (unsigned l = 0; l < n; ++l)
            e[k * dim + (n + l)] = jet_scale(hermInv[k * n + l], Scalar(Rat(0), Rat(-4)));
    return make_pairing(dim, PairingTensor::Shape::HolToAntihol, std::move(e));
}

/// Frame components of omega from the Hermitian matrix:
/// omega_{k, n+l} = (i/2) omega_{k lbar}, omega_{n+l, k} = -(i/2) omega_{k lbar}.
inline std::vector<Jet> frame_omega_from_hermitian(const std::vector<Jet>& herm, unsigned n) {
    unsigned dim = 2 * n;
    int order = herm[0].order;
    std::vector<Jet> om(size_t(dim) * dim, jet_zero(dim, order));
    for (unsigned k = 0; k < n; ++k)
        for (unsigned l = 0; l < n; ++l) {
            const Jet& w = herm[k * n + l];
            om[k * dim + (n + l)] = jet_scale(w, Scalar(Rat(0), Rat(1, 2)));
            om[(n + l) * dim + k] = jet_scale(w, Scalar(Rat(0), Rat(-1, 2)));
        }
    return om;
}

/// Canonical connection of a Kaehler chart: Gamma^k_{ij} = omega^{k mbar}
/// d_i omega_{j mbar} on holomorphic indices, conjugated on antiholomorphic
/// ones, zero on mixed ones.
inline std::vector<Jet> kaehler_christoffel(const std::vector<Jet>& herm,
                                            const std::vector<Jet>& hermInv, unsigned n) {
    unsigned dim = 2 * n;
    int go = herm[0].order - 1;
    std::vector<Jet> g(size_t(dim) * dim * dim, jet_zero(dim, go));
    for (unsigned k = 0; k < n; ++k)
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) {
                Jet acc = jet_zero(dim, go);
                for (unsigned m = 0; m < n; ++m)
                    acc = jet_add(acc, jet_mul(jet_truncate(hermInv[k * n + m], go),
                                               jet_partial(herm[j * n + m], i)));
                g[(k * dim + i) * dim + j] = acc;
                g[((n + k) * dim + (n + i)) * dim + (n + j)] = jet_conjugate(acc, Frame::Complex);
            }
    return g;
}

/// Averaged symplectic connection Gamma_{ij,k} = (d_i omega_{jk} +
/// d_j omega_{ik}) / 3 raised with the Poisson tensor.  Torsion-free and
/// symplectic whenever omega is closed.
inline std::vector<Jet> thirds_christoffel(const std::vector<Jet>& omega,
                                           const PairingTensor& poisson, unsigned dim) {
    int go = omega[0].order - 1;
    std::vector<Jet> low(size_t(dim) * dim * dim, jet_zero(dim, go));
    Scalar third{Rat(1, 3), Rat(0)};
    for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = 0; j < dim; ++j)
            for (unsigned k = 0; k < dim; ++k) {
                Jet t = jet_add(jet_partial(omega[j * dim + k], i), jet_partial(omega[i * dim + k], j));
                low[(i * dim + j) * dim + k] = jet_scale(t, third);
            }
    std::vector<Jet> g(size_t(dim) * dim * dim, jet_zero(dim, go));
    for (unsigned l = 0; l < dim; ++l)
        for (unsigned i = 0; i < dim; ++i)
            for (unsigned j = 0; j < dim; ++j) {
                Jet acc = jet_zero(dim, go);
                for (unsigned k = 0; k < dim; ++k) {
                    const Jet& lam = poisson.at(l, k);
                    if (lam.is_zero() || low[(i * dim + j) * dim + k].is_zero()) continue;
                    acc = jet_add(acc, jet_mul(jet_truncate(lam, go), low[(i * dim + j) * dim + k]));
                }
                g[(l * dim + i) * dim + j] = acc;
            }
    return g;
}

inline std::vector<Jet> curvature_from_christoffel(const std::vector<Jet>& g, unsigned dim) {
    int ro = g[0].order - 1;
    std::vector<Jet> r(size_t(dim) * dim * dim * dim, jet_zero(dim, ro));
    for (unsigned t = 0; t < dim; ++t)
        for (unsigned j = 0; j < dim; ++j)
            for (unsigned k = 0; k < dim; ++k)
                for (unsigned l = 0; l < k; ++l) {
                    Jet acc = jet_sub(jet_partial(g[(t * dim + l) * dim + j], k),
                                      jet_partial(g[(t * dim + k) * dim + j], l));
                    for (unsigned m = 0; m < dim; ++m) {
                        const Jet& gkm = g[(t * dim + k) * dim + m];
                        const Jet& glm = g[(t * dim + l) * dim + m];
                        const Jet& glj = g[(m * dim + l) * dim + j];
                        const Jet& gkj = g[(m * dim + k) * dim + j];
                        if (!gkm.is_zero() && !glj.is_zero())
                            acc = jet_add(acc, jet_mul(jet_truncate(gkm, ro), jet_truncate(glj, ro)));
                        if (!glm.is_zero() && !gkj.is_zero())
                            acc = jet_sub(acc, jet_mul(jet_truncate(glm, ro), jet_truncate(gkj, ro)));
                    }
                    r[((t * dim + j) * dim + k) * dim + l] = acc;
                    r[((t * dim + j) * dim + l) * dim + k] = jet_neg(acc);
                }
    return r;
}

inline void finish_model(ChartModel& mo) {
    if (mo.connection == Connection::Kaehler) {
        if (mo.frame != Frame::Complex)
            throw structural_error("canonical Kaehler connection needs a complex frame");
        mo.christoffel = kaehler_christoffel(mo.hermitian, mo.hermitianInv, mo.n);
    } else {
        mo.christoffel = thirds_christoffel(mo.omega, mo.poisson, mo.dim);
    }
    mo.curv = curvature_from_christoffel(mo.christoffel, mo.dim);
}

inline void build_complex_model(ChartModel& mo, std::vector<Jet> herm) {
    mo.hermitian = std::move(herm);
    // omega^{k lbar} omega_{t lbar} = delta^k_t reads V * W^T = I, so invert
    // the transpose
    {
        std::vector<Jet> wt(size_t(mo.n) * mo.n, jet_zero(mo.dim, mo.order));
        for (unsigned k = 0; k < mo.n; ++k)
            for (unsigned l = 0; l < mo.n; ++l) wt[l * mo.n + k] = mo.hermitian[k * mo.n + l];
        mo.hermitianInv = invert_matrix(wt, mo.n);
    }
    mo.omega = frame_omega_from_hermitian(mo.hermitian, mo.n);
    mo.poisson = complex_poisson(mo.hermitianInv, mo.n);
    mo.wick = wick_pairing(mo.hermitianInv, mo.n);
    finish_model(mo);
}

inline void require_order(int order) {
    if (order < 2) throw structural_error("model jet order must be at least 2");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Flat real chart R^{2n} with omega_{k, n+k} = 1 and the zero connection.
inline ChartModel flat_symplectic_model(unsigned n, std::vector<Scalar> base, int order) {
    detail::require_order(order);
    ChartModel mo;
    mo.name = "flat-symplectic";
    mo.frame = Frame::Real;
    mo.n = n;
    mo.dim = 2 * n;
    mo.order = order;
    mo.connection = Connection::Thirds; // zero connection; averaged formula gives zero
    if (base.empty()) base.assign(mo.dim, Scalar::zero());
    if (base.size() != mo.dim) throw structural_error("flat_symplectic_model: base point needs 2n entries");
    mo.base = std::move(base);
    mo.omega.assign(size_t(mo.dim) * mo.dim, jet_zero(mo.dim, order));
    std::vector<Jet> lam(size_t(mo.dim) * mo.dim, jet_zero(mo.dim, order));
    for (unsigned k = 0; k < n; ++k) {
        mo.omega[k * mo.dim + (n + k)] = jet_const(mo.dim, order, Scalar::one());
        mo.omega[(n + k) * mo.dim + k] = jet_const(mo.dim, order, Scalar(Rat(-1)));
        lam[k * mo.dim + (n + k)] = jet_const(mo.dim, order, Scalar::one());
        lam[(n + k) * mo.dim + k] = jet_const(mo.dim, order, Scalar(Rat(-1)));
    }
    mo.poisson = make_pairing(mo.dim, PairingTensor::Shape::Antisymmetric, std::move(lam));
    detail::finish_model(mo);
    return mo;
}

/// Flat complex chart C^n with omega_{k lbar} = delta_{kl}.
inline ChartModel flat_kaehler_model(unsigned n, std::vector<Scalar> baseZ, int order) {
    detail::require_order(order);
    ChartModel mo;
    mo.name = "flat-kaehler";
    mo.frame = Frame::Complex;
    mo.n = n;
    mo.dim = 2 * n;
    mo.order = order;
    mo.connection = Connection::Kaehler;
    if (baseZ.empty()) baseZ.assign(n, Scalar::zero());
    if (baseZ.size() != n) throw structural_error("flat_kaehler_model: base point needs n complex entries");
    mo.base.resize(mo.dim);
    for (unsigned k = 0; k < n; ++k) {
        mo.base[k] = baseZ[k];
        mo.base[n + k] = baseZ[k].conj();
    }
    std::vector<Jet> herm(size_t(n) * n, jet_zero(mo.dim, order));
    for (unsigned k = 0; k < n; ++k) herm[k * n + k] = jet_const(mo.dim, order, Scalar::one());
    detail::build_complex_model(mo, std::move(herm));
    return mo;
}

/// Fubini-Study chart: omega_{k lbar} = lambda ((1+|z|^2) delta_{kl}
/// - zbar^k z^l) / (1+|z|^2)^2.
inline ChartModel fubini_study_model(unsigned n, std::vector<Scalar> baseZ, const Scalar& lambda,
                                     int order, Connection conn = Connection::Kaehler) {
    detail::require_order(order);
    if (!lambda.is_real() || !(lambda.re > 0))
        throw structural_error("fubini_study_model: scale must be a positive rational");
    ChartModel mo;
    mo.name = "fubini-study";
    mo.frame = Frame::Complex;
    mo.n = n;
    mo.dim = 2 * n;
    mo.order = order;
    mo.connection = conn;
    if (baseZ.empty()) baseZ.assign(n, Scalar::zero());
    if (baseZ.size() != n) throw structural_error("fubini_study_model: base point needs n complex entries");
    mo.base.resize(mo.dim);
    for (unsigned k = 0; k < n; ++k) {
        mo.base[k] = baseZ[k];
        mo.base[n + k] = baseZ[k].conj();
    }
    std::vector<Jet> z(n), zb(n);
    for (unsigned k = 0; k < n; ++k) {
        z[k] = jet_coord(mo.dim, order, k, mo.base[k]);
        zb[k] = jet_coord(mo.dim, order, n + k, mo.base[n + k]);
    }
    Jet s = jet_const(mo.dim, order, Scalar::one());
    for (unsigned k = 0; k < n; ++k) s = jet_add(s, jet_mul(z[k], zb[k]));
    Jet inv2 = jet_pow(jet_invert(s), 2);
    std::vector<Jet> herm(size_t(n) * n);
    for (unsigned k = 0; k < n; ++k)
        for (unsigned l = 0; l < n; ++l) {
            Jet t = jet_neg(jet_mul(zb[k], z[l]));
            if (k == l) t = jet_add(t, s);
            herm[k * n + l] = jet_scale(jet_mul(t, inv2), lambda);
        }
    detail::build_complex_model(mo, std::move(herm));
    return mo;
}

/// Poincare disc chart: omega_{1 1bar} = lambda / (1 - z zbar)^2, |z0| < 1.
inline ChartModel poincare_disc_model(const Scalar& z0, const Scalar& lambda, int order,
                                      Connection conn = Connection::Kaehler) {
    detail::require_order(order);
    if (!lambda.is_real() || !(lambda.re > 0))
        throw structural_error("poincare_disc_model: scale must be a positive rational");
    if (!((z0 * z0.conj()).re < 1))
        throw structural_error("poincare_disc_model: base point must satisfy |z0| < 1");
    ChartModel mo;
    mo.name = "poincare-disc";
    mo.frame = Frame::Complex;
    mo.n = 1;
    mo.dim = 2;
    mo.order = order;
    mo.connection = conn;
    mo.base = {z0, z0.conj()};
    Jet z = jet_coord(2, order, 0, mo.base[0]);
    Jet zb = jet_coord(2, order, 1, mo.base[1]);
    Jet s = jet_sub(jet_const(2, order, Scalar::one()), jet_mul(z, zb));
    std::vector<Jet> herm{jet_scale(jet_pow(jet_invert(s), 2), lambda)};
    detail::build_complex_model(mo, std::move(herm));
    return mo;
}

/// Kaehler chart from a potential: omega_{k lbar} = d_k d_lbar phi.  The
/// potential jet must carry order (model order + 2).
inline ChartModel kaehler_model_from_potential(unsigned n, std::vector<Scalar> baseZ, const Jet& phi,
                                               int order, Connection conn = Connection::Kaehler) {
    detail::require_order(order);
    if (phi.dim != 2 * n) throw structural_error("kaehler_model_from_potential: potential dimension mismatch");
    if (phi.order < order + 2)
        throw structural_error("kaehler_model_from_potential: potential jet order must exceed model order by 2");
    ChartModel mo;
    mo.name = "kaehler-potential";
    mo.frame = Frame::Complex;
    mo.n = n;
    mo.dim = 2 * n;
    mo.order = order;
    mo.connection = conn;
    if (baseZ.size() != n) throw structural_error("kaehler_model_from_potential: base point needs n complex entries");
    mo.base.resize(mo.dim);
    for (unsigned k = 0; k < n; ++k) {
        mo.base[k] = baseZ[k];
        mo.base[n + k] = baseZ[k].conj();
    }
    std::vector<Jet> herm(size_t(n) * n);
    for (unsigned k = 0; k < n; ++k)
        for (unsigned l = 0; l < n; ++l)
            herm[k * n + l] = jet_truncate(jet_partial(jet_partial(phi, k), n + l), order);
    detail::build_complex_model(mo, std::move(herm));
    return mo;
}

/// Real symplectic chart from explicit omega_{ij} jets (order = model order),
/// with the averaged connection.
inline ChartModel symplectic_model_from_omega(unsigned n, std::vector<Scalar> base,
                                              std::vector<Jet> omega, int order) {
    detail::require_order(order);
    ChartModel mo;
    mo.name = "symplectic-omega";
    mo.frame = Frame::Real;
    mo.n = n;
    mo.dim = 2 * n;
    mo.order = order;
    mo.connection = Connection::Thirds;
    if (base.size() != mo.dim) throw structural_error("symplectic_model_from_omega: base point needs 2n entries");
    mo.base = std::move(base);
    if (omega.size() != size_t(mo.dim) * mo.dim)
        throw structural_error("symplectic_model_from_omega: omega needs (2n)^2 entries");
    for (auto& j : omega) {
        if (j.dim != mo.dim) throw structural_error("symplectic_model_from_omega: omega entry dimension mismatch");
        j = jet_truncate(j, order);
    }
    mo.omega = std::move(omega);
    // Lambda = (Omega^T)^{-1}
    std::vector<Jet> ot(size_t(mo.dim) * mo.dim);
    for (unsigned i = 0; i < mo.dim; ++i)
        for (unsigned j = 0; j < mo.dim; ++j) ot[j * mo.dim + i] = mo.omega[i * mo.dim + j];
    mo.poisson = make_pairing(mo.dim, PairingTensor::Shape::Antisymmetric, invert_matrix(ot, mo.dim));
    detail::finish_model(mo);
    return mo;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/**
 * Covariant exterior derivative on sections:
 *
 *   nabla a = dx^i ^ [ d_i(jet) + (y-slot and dx-slot Gamma replacements) ]
 *
 * with D y^v = -Gamma^v_{is} y^s and D dx^p = -Gamma^p_{im} dx^m, the new
 * dx^i wedged on the left.  Spends one unit of jet order.
 */
inline Section nabla(const Section& a, const ChartModel& mo) {
    if (a.dim != mo.dim) throw structural_error("nabla: section dimension mismatch");
    Section r = section_zero(a.dim, a.frame, a.caps);
    if (a.is_zero()) return r;
    int t = std::min(a.jetOrder - 1, mo.order - 1);
    if (t < 0) throw budget_error("nabla: jet order exhausted");
    Section at = section_truncate_order(a, t + 1);
    r.jetOrder = t;
    for (const auto& [key, j] : at.terms)
        for (unsigned i = 0; i < mo.dim; ++i) {
            // d/dx^i on the coefficient jet
            {
                int sgn = wedge_insert_sign(key.asym, i);
                if (sgn != 0) {
                    Jet dj = jet_partial(j, i);
                    if (sgn < 0) dj = jet_neg(dj);
                    detail::section_insert_add(r, TermKey{key.h, key.sym, key.asym | (1u << i)}, dj);
                }
            }
            Jet jt = jet_truncate(j, t);
            // y-slot replacements
            for (unsigned v = 0; v < mo.dim; ++v) {
                unsigned e = mono_exp(key.sym, v);
                if (e == 0) continue;
                for (unsigned s = 0; s < mo.dim; ++s) {
                    const Jet& g = mo.gamma(v, i, s);
                    if (g.is_zero()) continue;
                    std::uint32_t asym2 = key.asym;
                    int sgn = wedge_insert_sign(asym2, i);
                    if (sgn == 0) continue;
                    Jet c = jet_mul(jt, jet_truncate(g, t));
                    c = jet_scale(c, Scalar(Rat(-long(e) * sgn)));
                    detail::section_insert_add(r, TermKey{key.h, key.sym - mono_unit(v) + mono_unit(s), asym2 | (1u << i)}, c);
                }
            }
            // dx-slot replacements
            for (unsigned p = 0; p < mo.dim; ++p) {
                if (!(key.asym & (1u << p))) continue;
                std::uint32_t rem = key.asym & ~(1u << p);
                int s1 = wedge_remove_sign(key.asym, p);
                for (unsigned m = 0; m < mo.dim; ++m) {
                    const Jet& g = mo.gamma(p, i, m);
                    if (g.is_zero()) continue;
                    int s2 = wedge_insert_sign(rem, m);
                    if (s2 == 0) continue;
                    std::uint32_t asym2 = rem | (1u << m);
                    int s3 = wedge_insert_sign(asym2, i);
                    if (s3 == 0) continue;
                    Jet c = jet_mul(jt, jet_truncate(g, t));
                    c = jet_scale(c, Scalar(Rat(-long(s1 * s2 * s3))));
                    detail::section_insert_add(r, TermKey{key.h, key.sym, asym2 | (1u << i)}, c);
                }
            }
        }
    detail::section_normalize(r);
    return r;
}

/// Fibre Laplacian omega^{k lbar} (d/dy^k)(d/dy^{n+l}); complex frames only.
inline Section fiber_laplacian(const Section& a, const ChartModel& mo) {
    if (mo.frame != Frame::Complex) throw structural_error("fiber_laplacian: complex frame required");
    if (a.dim != mo.dim) throw structural_error("fiber_laplacian: section dimension mismatch");
    Section r = section_zero(a.dim, a.frame, a.caps);
    if (a.is_zero()) return r;
    int t = std::min(a.jetOrder, mo.order);
    Section at = section_truncate_order(a, t);
    r.jetOrder = t;
    const unsigned n = mo.n;
    for (const auto& [key, j] : at.terms)
        for (unsigned k = 0; k < n; ++k) {
            unsigned ek = mono_exp(key.sym, k);
            if (ek == 0) continue;
            for (unsigned l = 0; l < n; ++l) {
                unsigned el = mono_exp(key.sym, n + l);
                if (el == 0) continue;
                const Jet& v = mo.hermInv(k, l);
                if (v.is_zero()) continue;
                Jet c = jet_mul(j, jet_truncate(v, t));
                unsigned long mult = static_cast<unsigned long>(ek) * el;
                if (mult != 1) c = jet_scale(c, Scalar(Rat(mult)));
                detail::section_insert_add(r, TermKey{key.h, key.sym - mono_unit(k) - mono_unit(n + l), key.asym}, c);
            }
        }
    detail::section_normalize(r);
    return r;
}

/// exp(sign * hbar * fiber_laplacian): the conjugation between the symmetric
/// and normally ordered fibre products.  Finite sum since each step removes
/// two fibre variables.
inline Section exp_h_laplacian(const Section& a, const ChartModel& mo, int sign) {
    Section total = a;
    Section term = a; // invariant: term = (sign hbar Delta)^m a / m!
    for (unsigned m = 1; !term.is_zero(); ++m) {
        term = shift_h(fiber_laplacian(term, mo), 1);
        term = section_scale(term, Scalar(Rat(sign < 0 ? -1 : 1, long(m))));
        total = section_add(total, term);
    }
    return total;
}

/// The scalar-sym/one-form section with delta a = -(i/hbar) [this, a] in both
/// fibre products: (i/2) omega_{k lbar} (y^k dzbar^l - y^{n+l} dz^k).
inline Section delta_tilde(const ChartModel& mo, SectionCaps caps) {
    if (mo.frame != Frame::Complex) throw structural_error("delta_tilde: complex frame required");
    Section s = section_zero(mo.dim, mo.frame, caps);
    s.jetOrder = mo.order;
    const unsigned n = mo.n;
    for (unsigned k = 0; k < n; ++k)
        for (unsigned l = 0; l < n; ++l) {
            const Jet& w = mo.herm(k, l);
            if (w.is_zero()) continue;
            detail::section_insert_add(s, TermKey{0, mono_unit(k), 1u << (n + l)},
                                       jet_scale(w, Scalar(Rat(0), Rat(1, 2))));
            detail::section_insert_add(s, TermKey{0, mono_unit(n + l), 1u << k},
                                       jet_scale(w, Scalar(Rat(0), Rat(-1, 2))));
        }
    detail::section_normalize(s);
    return s;
}

/// Curvature section (1/4) omega_{it} R^t_{jkl} y^i y^j dx^k ^ dx^l.
inline Section curvature_section(const ChartModel& mo, SectionCaps caps) {
    Section s = section_zero(mo.dim, mo.frame, caps);
    s.jetOrder = mo.order - 2;
    Scalar quarter{Rat(1, 4), Rat(0)};
    for (unsigned i = 0; i < mo.dim; ++i)
        for (unsigned j = 0; j < mo.dim; ++j)
            for (unsigned k = 0; k < mo.dim; ++k)
                for (unsigned l = 0; l < mo.dim; ++l) {
                    if (k == l) continue;
                    Jet acc = jet_zero(mo.dim, mo.order - 2);
                    for (unsigned t = 0; t < mo.dim; ++t) {
                        const Jet& om = mo.om(i, t);
                        const Jet& rr = mo.curvature(t, j, k, l);
                        if (om.is_zero() || rr.is_zero()) continue;
                        acc = jet_add(acc, jet_mul(jet_truncate(om, mo.order - 2), rr));
                    }
                    if (acc.is_zero()) continue;
                    acc = jet_scale(acc, quarter);
                    int sgn = k < l ? 1 : -1;
                    if (sgn < 0) acc = jet_neg(acc);
                    std::uint32_t mask = (1u << k) | (1u << l);
                    detail::section_insert_add(s, TermKey{0, mono_unit(i) + mono_unit(j), mask}, acc);
                }
    detail::section_normalize(s);
    return s;
}

/// Poisson bracket of two scalar jets: Lambda^{ij} d_i f d_j g.
inline Jet poisson_bracket(const Jet& f, const Jet& g, const ChartModel& mo) {
    int t = std::min({f.order - 1, g.order - 1, mo.order});
    if (t < 0) throw budget_error("poisson_bracket: jet order exhausted");
    Jet r = jet_zero(mo.dim, t);
    for (unsigned i = 0; i < mo.dim; ++i)
        for (unsigned j = 0; j < mo.dim; ++j) {
            const Jet& lam = mo.poisson.at(i, j);
            if (lam.is_zero()) continue;
            Jet term = jet_mul(jet_truncate(jet_partial(f, i), t), jet_truncate(jet_partial(g, j), t));
            r = jet_add(r, jet_mul(term, jet_truncate(lam, t)));
        }
    return r;
}

/// First-order normally ordered term (4/i) omega^{k lbar} d_k f d_{n+l} g.
inline Jet wick_first_order(const Jet& f, const Jet& g, const ChartModel& mo) {
    if (mo.frame != Frame::Complex) throw structural_error("wick_first_order: complex frame required");
    int t = std::min({f.order - 1, g.order - 1, mo.order});
    if (t < 0) throw budget_error("wick_first_order: jet order exhausted");
    Jet r = jet_zero(mo.dim, t);
    for (unsigned k = 0; k < mo.n; ++k)
        for (unsigned l = 0; l < mo.n; ++l) {
            const Jet& v = mo.hermInv(k, l);
            if (v.is_zero()) continue;
            Jet term = jet_mul(jet_truncate(jet_partial(f, k), t), jet_truncate(jet_partial(g, mo.n + l), t));
            term = jet_mul(term, jet_truncate(v, t));
            r = jet_add(r, jet_scale(term, Scalar(Rat(0), Rat(-4))));
        }
    return r;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {
/// Leading principal minors of an exact Hermitian scalar matrix; all must be
/// real and positive.
inline bool positive_definite(const std::vector<Scalar>& w, unsigned n, std::string& why) {
    std::vector<Scalar> m = w;
    Scalar minor = Scalar::one();
    for (unsigned k = 0; k < n; ++k) {
        Scalar piv = m[k * n + k];
        minor = minor * piv;
        if (!minor.is_real() || !(minor.re > 0)) {
            why = "leading minor " + std::to_string(k + 1) + " is " + minor.str();
            return false;
        }
        for (unsigned i = k + 1; i < n; ++i) {
            if (m[i * n + k].is_zero()) continue;
            Scalar f = m[i * n + k] / piv;
            for (unsigned j = k; j < n; ++j) m[i * n + j] = m[i * n + j] - f * m[k * n + j];
        }
    }
    return true;
}
} // namespace detail

/// Structural checks on a chart model.  Every check is exact; failures carry
/// the first offending component.
inline Report validate_model(const ChartModel& mo) {
    Report rep;
    const unsigned d = mo.dim, n = mo.n;
    auto idx2 = [&](unsigned i, unsigned j) {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    };

    {
        bool ok = true;
        std::string why;
        for (unsigned i = 0; i < d && ok; ++i)
            for (unsigned j = 0; j < d && ok; ++j)
                if (!jet_add(mo.om(i, j), mo.om(j, i)).is_zero()) {
                    ok = false;
                    why = "omega" + idx2(i, j) + " + omega" + idx2(j, i) + " = " +
                          jet_to_string(jet_add(mo.om(i, j), mo.om(j, i)));
                }
        rep.add("omega-antisymmetric", ok, why);
    }
    {
        bool ok = true;
        std::string why;
        for (unsigned i = 0; i < d && ok; ++i)
            for (unsigned j = 0; j < d && ok; ++j)
                for (unsigned k = 0; k < d && ok; ++k) {
                    Jet c = jet_add(jet_add(jet_partial(mo.om(j, k), i), jet_partial(mo.om(k, i), j)),
                                    jet_partial(mo.om(i, j), k));
                    if (!c.is_zero()) {
                        ok = false;
                        why = "cyclic d omega at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              "," + std::to_string(k + 1) + ") = " + jet_to_string(c);
                    }
                }
        rep.add("omega-closed", ok, why);
    }
    {
        bool ok = true;
        std::string why;
        for (unsigned i = 0; i < d && ok; ++i)
            for (unsigned k = 0; k < d && ok; ++k) {
                Jet acc = jet_zero(d, mo.order);
                for (unsigned j = 0; j < d; ++j) {
                    if (mo.poisson.at(i, j).is_zero() || mo.om(k, j).is_zero()) continue;
                    acc = jet_add(acc, jet_mul(mo.poisson.at(i, j), mo.om(k, j)));
                }
                if (i == k) acc = jet_sub(acc, jet_const(d, mo.order, Scalar::one()));
                if (!acc.is_zero()) {
                    ok = false;
                    why = "Lambda omega defect at " + idx2(i, k) + " = " + jet_to_string(acc);
                }
            }
        rep.add("poisson-inverse", ok, why);
    }
    if (mo.frame == Frame::Complex) {
        {
            bool ok = true;
            std::string why;
            for (unsigned k = 0; k < n && ok; ++k)
                for (unsigned l = 0; l < n && ok; ++l) {
                    Jet difn = jet_sub(mo.herm(k, l), jet_conjugate(mo.herm(l, k), Frame::Complex));
                    if (!difn.is_zero()) {
                        ok = false;
                        why = "Hermitian defect at " + idx2(k, l) + " = " + jet_to_string(difn);
                    }
                }
            rep.add("hermitian-symmetry", ok, why);
        }
        {
            bool ok = true;
            std::string why;
            for (unsigned k = 0; k < n && ok; ++k)
                for (unsigned t = 0; t < n && ok; ++t) {
                    Jet acc = jet_zero(d, mo.order);
                    for (unsigned l = 0; l < n; ++l)
                        acc = jet_add(acc, jet_mul(mo.hermInv(k, l), mo.herm(t, l)));
                    if (k == t) acc = jet_sub(acc, jet_const(d, mo.order, Scalar::one()));
                    if (!acc.is_zero()) {
                        ok = false;
                        why = "inverse defect at " + idx2(k, t) + " = " + jet_to_string(acc);
                    }
                }
            rep.add("hermitian-inverse", ok, why);
        }
        {
            std::vector<Scalar> w0(size_t(n) * n);
            for (unsigned k = 0; k < n; ++k)
                for (unsigned l = 0; l < n; ++l) w0[k * n + l] = jet_eval0(mo.herm(k, l));
            std::string why;
            bool ok = detail::positive_definite(w0, n, why);
            rep.add("positive-at-base", ok, why);
        }
        if (mo.connection == Connection::Kaehler) {
            bool ok = true;
            std::string why;
            for (unsigned t = 0; t < d && ok; ++t)
                for (unsigned i = 0; i < d && ok; ++i)
                    for (unsigned j = 0; j < d && ok; ++j) {
                        bool hol = t < n && i < n && j < n;
                        bool antihol = t >= n && i >= n && j >= n;
                        if (!hol && !antihol && !mo.gamma(t, i, j).is_zero()) {
                            ok = false;
                            why = "mixed-type Gamma(" + std::to_string(t + 1) + ";" + std::to_string(i + 1) +
                                  "," + std::to_string(j + 1) + ") nonzero";
                        }
                    }
            rep.add("connection-pure-type", ok, why);
        }
        if (mo.connection == Connection::Kaehler) {
            bool ok = true;
            std::string why;
            for (unsigned t = 0; t < d && ok; ++t)
                for (unsigned j = 0; j < d && ok; ++j)
                    for (unsigned k = 0; k < d && ok; ++k)
                        for (unsigned l = 0; l < k && ok; ++l) {
                            bool mixed = (k < n) != (l < n);
                            if (!mixed && !mo.curvature(t, j, k, l).is_zero()) {
                                ok = false;
                                why = "pure-type curvature R(" + std::to_string(t + 1) + ";" +
                                      std::to_string(j + 1) + "," + std::to_string(k + 1) + "," +
                                      std::to_string(l + 1) + ") nonzero";
                            }
                        }
            rep.add("curvature-type-1-1", ok, why);
        }
        {
            bool ok = mo.wick.has_value();
            std::string why = ok ? "" : "missing";
            if (ok)
                for (unsigned k = 0; k < n && ok; ++k)
                    for (unsigned l = 0; l < n && ok; ++l) {
                        Jet expect = jet_scale(mo.hermInv(k, l), Scalar(Rat(0), Rat(-4)));
                        if (!jet_sub(mo.wick->at(k, n + l), expect).is_zero()) {
                            ok = false;
                            why = "pairing entry " + idx2(k, l) + " inconsistent with omega^{k lbar}";
                        }
                    }
            rep.add("wick-pairing", ok, why);
        }
    }
    {
        bool ok = true;
        std::string why;
        for (unsigned t = 0; t < d && ok; ++t)
            for (unsigned i = 0; i < d && ok; ++i)
                for (unsigned j = 0; j < i && ok; ++j)
                    if (!jet_sub(mo.gamma(t, i, j), mo.gamma(t, j, i)).is_zero()) {
                        ok = false;
                        why = "Gamma(" + std::to_string(t + 1) + ";" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") asymmetric";
                    }
        rep.add("torsion-free", ok, why);
    }
    {
        bool ok = true;
        std::string why;
        int go = mo.order - 1;
        for (unsigned i = 0; i < d && ok; ++i)
            for (unsigned j = 0; j < d && ok; ++j)
                for (unsigned k = 0; k < d && ok; ++k) {
                    Jet acc = jet_partial(mo.om(j, k), i);
                    for (unsigned m = 0; m < d; ++m) {
                        if (!mo.gamma(m, i, j).is_zero() && !mo.om(m, k).is_zero())
                            acc = jet_sub(acc, jet_mul(mo.gamma(m, i, j), jet_truncate(mo.om(m, k), go)));
                        if (!mo.gamma(m, i, k).is_zero() && !mo.om(j, m).is_zero())
                            acc = jet_sub(acc, jet_mul(mo.gamma(m, i, k), jet_truncate(mo.om(j, m), go)));
                    }
                    if (!acc.is_zero()) {
                        ok = false;
                        why = "nabla omega at (" + std::to_string(i + 1) + ";" + std::to_string(j + 1) +
                              "," + std::to_string(k + 1) + ") = " + jet_to_string(acc);
                    }
                }
        rep.add("connection-symplectic", ok, why);
    }
    {
        bool ok = true;
        std::string why;
        for (unsigned t = 0; t < d && ok; ++t)
            for (unsigned j = 0; j < d && ok; ++j)
                for (unsigned k = 0; k < d && ok; ++k)
                    for (unsigned l = 0; l < k && ok; ++l)
                        if (!jet_add(mo.curvature(t, j, k, l), mo.curvature(t, j, l, k)).is_zero()) {
                            ok = false;
                            why = "R not antisymmetric in last indices at (" + std::to_string(t + 1) + ";" +
                                  std::to_string(j + 1) + "," + std::to_string(k + 1) + "," + std::to_string(l + 1) + ")";
                        }
        rep.add("curvature-antisymmetric", ok, why);
    }
    {
        bool ok = true;
        std::string why;
        for (unsigned t = 0; t < d && ok; ++t)
            for (unsigned j = 0; j < d && ok; ++j)
                for (unsigned k = 0; k < d && ok; ++k)
                    for (unsigned l = 0; l < d && ok; ++l) {
                        Jet c = jet_add(jet_add(mo.curvature(t, j, k, l), mo.curvature(t, k, l, j)),
                                        mo.curvature(t, l, j, k));
                        if (!c.is_zero()) {
                            ok = false;
                            why = "Bianchi defect at (" + std::to_string(t + 1) + ";" + std::to_string(j + 1) +
                                  "," + std::to_string(k + 1) + "," + std::to_string(l + 1) + ") = " + jet_to_string(c);
                        }
                    }
        rep.add("curvature-first-bianchi", ok, why);
    }
    {
        bool ok = true;
        std::string why;
        int ro = mo.order - 2;
        for (unsigned i = 0; i < d && ok; ++i)
            for (unsigned j = 0; j < i && ok; ++j)
                for (unsigned k = 0; k < d && ok; ++k)
                    for (unsigned l = 0; l < k && ok; ++l) {
                        Jet a = jet_zero(d, ro), b = jet_zero(d, ro);
                        for (unsigned t = 0; t < d; ++t) {
                            if (!mo.om(i, t).is_zero() && !mo.curvature(t, j, k, l).is_zero())
                                a = jet_add(a, jet_mul(jet_truncate(mo.om(i, t), ro), mo.curvature(t, j, k, l)));
                            if (!mo.om(j, t).is_zero() && !mo.curvature(t, i, k, l).is_zero())
                                b = jet_add(b, jet_mul(jet_truncate(mo.om(j, t), ro), mo.curvature(t, i, k, l)));
                        }
                        if (!jet_sub(a, b).is_zero()) {
                            ok = false;
                            why = "omega R not symmetric in first pair at (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ";" + std::to_string(k + 1) + "," + std::to_string(l + 1) + ")";
                        }
                    }
        rep.add("curvature-symmetric-pair", ok, why);
    }
    return rep;
}

} // namespace fedstar

#endif
