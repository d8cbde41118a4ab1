// SPDX-License-Identifier: MIT
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fedstar/expr.hpp"
#include "fedstar/fedosov.hpp"
#include "fedstar/geometry.hpp"
#include "fedstar/report.hpp"

namespace fedstar {

using Json = nlohmann::ordered_json;

inline Json scalar_to_json(const Scalar& s) {
    return Json{{"re", rat_to_string(s.re)}, {"im", rat_to_string(s.im)}};
}

/// Serializes a truncated star product evaluated at the base point.
inline Json star_result_to_json(const StarContext& ctx, const StarProduct& sp,
                                const std::string& fSrc, const std::string& gSrc) {
    Json out;
    out["model"] = ctx.model.name;
    out["kind"] = star_kind_name(ctx.kind);
    out["order"] = sp.N;
    Json base = Json::array();
    for (const Scalar& s : ctx.model.base) base.push_back(scalar_to_json(s));
    out["basePoint"] = base;
    out["f"] = fSrc;
    out["g"] = gSrc;
    Json coeffs = Json::array();
    Json mvals = Json::array();
    for (unsigned t = 0; t <= sp.N; ++t) {
        coeffs.push_back(Json{{"h", t},
                              {"re", rat_to_string(sp.coeffVal[t].re)},
                              {"im", rat_to_string(sp.coeffVal[t].im)}});
        mvals.push_back(Json{{"r", t},
                             {"re", rat_to_string(sp.mVal[t].re)},
                             {"im", rat_to_string(sp.mVal[t].im)}});
    }
    out["coeffs"] = coeffs;
    out["mValues"] = mvals;
    return out;
}

/// One row per hbar power: coefficient of hbar^t and the bidifferential value M_t.
inline std::string star_result_to_csv(const StarProduct& sp) {
    std::ostringstream out;
    out << "h,coeff_re,coeff_im,m_re,m_im\n";
    for (unsigned t = 0; t <= sp.N; ++t) {
        out << t << ',' << rat_to_string(sp.coeffVal[t].re) << ','
            << rat_to_string(sp.coeffVal[t].im) << ',' << rat_to_string(sp.mVal[t].re) << ','
            << rat_to_string(sp.mVal[t].im) << '\n';
    }
    return out.str();
}

inline Json report_to_json(const Report& rep) {
    Json out;
    out["ok"] = rep.ok();
    Json checks = Json::array();
    for (const Check& c : rep.checks) {
        Json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        if (!c.detail.empty()) e["detail"] = c.detail;
        checks.push_back(e);
    }
    out["checks"] = checks;
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw structural_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw structural_error("cannot open file for writing: " + path);
    out << content;
}

namespace detail {

inline const Json& config_field(const Json& j, const std::string& key) {
    if (!j.contains(key)) throw structural_error("model config: missing field '" + key + "'");
    return j.at(key);
}

inline std::vector<Scalar> config_point(const Json& j, const std::string& key, std::size_t count) {
    std::vector<Scalar> out(count, Scalar::zero());
    if (!j.contains(key)) return out;
    const Json& arr = j.at(key);
    if (!arr.is_array() || arr.size() != count)
        throw structural_error("model config: '" + key + "' must be an array of " +
                               std::to_string(count) + " constant expressions");
    for (std::size_t k = 0; k < count; ++k) {
        if (!arr[k].is_string())
            throw structural_error("model config: '" + key + "' entries must be strings");
        out[k] = eval_scalar_expr(arr[k].get<std::string>());
    }
    return out;
}

}  // namespace detail

/// Builds a chart model from a JSON description.
///
/// Common fields: "kind" ("kahler" or "symplectic"), "n", optional "name" and
/// "basePoint" (constant expressions; n entries z1..zn for Kaehler charts, 2n
/// entries for symplectic ones).  Kaehler charts take "kahlerPotential", an
/// expression in z1..zn, zb1..zbn, and an optional "connection" ("kaehler" or
/// "thirds").  Symplectic charts take "omegaMatrix", a 2n x 2n array of
/// expressions in x1..x{2n}.
inline ChartModel load_model_config(const Json& j, int order) {
    if (!j.is_object()) throw structural_error("model config: top level must be an object");
    const Json& kindField = detail::config_field(j, "kind");
    if (!kindField.is_string())
        throw structural_error("model config: 'kind' must be \"kahler\" or \"symplectic\"");
    std::string kind = kindField.get<std::string>();
    const Json& nField = detail::config_field(j, "n");
    if (!nField.is_number_unsigned() || nField.get<unsigned>() == 0 || nField.get<unsigned>() > 4)
        throw structural_error("model config: 'n' must be an integer in 1..4");
    unsigned n = nField.get<unsigned>();
    int dim = int(2 * n);

    ChartModel mo;
    if (kind == "kahler") {
        std::vector<Scalar> baseZ = detail::config_point(j, "basePoint", n);
        std::vector<Scalar> fullBase(static_cast<std::size_t>(dim));
        for (unsigned k = 0; k < n; ++k) {
            fullBase[k] = baseZ[k];
            fullBase[n + k] = baseZ[k].conj();
        }
        const Json& phiField = detail::config_field(j, "kahlerPotential");
        if (!phiField.is_string())
            throw structural_error("model config: 'kahlerPotential' must be an expression string");
        Jet phi = lower_expr(phiField.get<std::string>(), Frame::Complex, int(n), fullBase,
                             order + 2);
        Connection conn = Connection::Kaehler;
        if (j.contains("connection")) {
            std::string c = j.at("connection").get<std::string>();
            if (c == "thirds")
                conn = Connection::Thirds;
            else if (c != "kaehler")
                throw structural_error("model config: 'connection' must be \"kaehler\" or \"thirds\"");
        }
        mo = kaehler_model_from_potential(n, baseZ, phi, order, conn);
    } else if (kind == "symplectic") {
        std::vector<Scalar> base = detail::config_point(j, "basePoint", static_cast<std::size_t>(dim));
        const Json& omField = detail::config_field(j, "omegaMatrix");
        if (!omField.is_array() || omField.size() != static_cast<std::size_t>(dim))
            throw structural_error("model config: 'omegaMatrix' must be a 2n x 2n array");
        std::vector<Jet> omega;
        omega.reserve(static_cast<std::size_t>(dim) * dim);
        for (int r = 0; r < dim; ++r) {
            const Json& row = omField[static_cast<std::size_t>(r)];
            if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
                throw structural_error("model config: 'omegaMatrix' must be a 2n x 2n array");
            for (int c = 0; c < dim; ++c) {
                if (!row[static_cast<std::size_t>(c)].is_string())
                    throw structural_error("model config: 'omegaMatrix' entries must be strings");
                omega.push_back(lower_expr(row[static_cast<std::size_t>(c)].get<std::string>(),
                                           Frame::Real, int(n), base, order));
            }
        }
        mo = symplectic_model_from_omega(n, base, omega, order);
    } else {
        throw structural_error("model config: 'kind' must be \"kahler\" or \"symplectic\"");
    }
    if (j.contains("name")) mo.name = j.at("name").get<std::string>();
    return mo;
}

inline ChartModel load_model_config_file(const std::string& path, int order) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw structural_error("model config " + path + ": " + e.what());
    }
    return load_model_config(j, order);
}

}  // namespace fedstar
