// SPDX-License-Identifier: MIT

// Command line front end: star products, M_r tables, structural verification
// and chart model validation, all in exact rational arithmetic.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fedstar/io.hpp"

using namespace fedstar;

namespace {

struct ModelOpts {
    std::string spec = "flat-symplectic:1";
    std::string at;
    std::string connection;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Scalar> parse_point(const std::string& at, std::size_t count,
                                const std::string& what) {
    if (at.empty()) return std::vector<Scalar>(count, Scalar::zero());
    auto parts = split(at, ',');
    if (parts.size() != count)
        throw structural_error("--at for " + what + " needs " + std::to_string(count) +
                               " comma-separated constant expressions, got " +
                               std::to_string(parts.size()));
    std::vector<Scalar> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = eval_scalar_expr(parts[k]);
    return out;
}

unsigned parse_small_uint(const std::string& s, const std::string& what) {
    if (s.empty() || s.size() > 2) throw structural_error("bad " + what + ": '" + s + "'");
    unsigned v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw structural_error("bad " + what + ": '" + s + "'");
        v = v * 10 + unsigned(c - '0');
    }
    if (v == 0 || v > 4) throw structural_error("bad " + what + ": '" + s + "' (need 1..4)");
    return v;
}

Connection parse_connection(const std::string& s, const std::string& modelHead) {
    if (s.empty() || s == "kaehler") return Connection::Kaehler;
    if (s == "thirds") return Connection::Thirds;
    throw structural_error("--connection must be 'kaehler' or 'thirds' (model " + modelHead + ")");
}

ChartModel build_model(const ModelOpts& o, int order) {
    auto parts = split(o.spec, ':');
    const std::string& head = parts[0];
    auto at_most = [&](std::size_t m) {
        if (parts.size() > m)
            throw structural_error("model spec '" + o.spec + "' has too many ':' fields");
    };
    auto no_connection = [&]() {
        if (!o.connection.empty())
            throw structural_error("--connection applies to fubini-study and poincare-disc models");
    };
    if (head == "flat-symplectic") {
        at_most(2);
        no_connection();
        unsigned n = parts.size() > 1 ? parse_small_uint(parts[1], "chart dimension n") : 1;
        return flat_symplectic_model(n, parse_point(o.at, 2 * n, head), order);
    }
    if (head == "flat-kaehler") {
        at_most(2);
        no_connection();
        unsigned n = parts.size() > 1 ? parse_small_uint(parts[1], "chart dimension n") : 1;
        return flat_kaehler_model(n, parse_point(o.at, n, head), order);
    }
    if (head == "fubini-study") {
        at_most(3);
        unsigned n = parts.size() > 1 ? parse_small_uint(parts[1], "chart dimension n") : 1;
        Scalar lambda = parts.size() > 2 ? eval_scalar_expr(parts[2]) : Scalar::one();
        return fubini_study_model(n, parse_point(o.at, n, head), lambda, order,
                                  parse_connection(o.connection, head));
    }
    if (head == "poincare-disc") {
        at_most(2);
        Scalar lambda = parts.size() > 1 ? eval_scalar_expr(parts[1]) : Scalar::one();
        Scalar z0 = parse_point(o.at, 1, head)[0];
        return poincare_disc_model(z0, lambda, order, parse_connection(o.connection, head));
    }
    if (std::filesystem::exists(o.spec)) {
        if (!o.at.empty())
            throw structural_error("--at applies to builtin models; set basePoint in " + o.spec);
        no_connection();
        return load_model_config_file(o.spec, order);
    }
    throw structural_error("unknown model '" + o.spec +
                           "': not a builtin (flat-symplectic, flat-kaehler, fubini-study, "
                           "poincare-disc) and not a readable config file");
}

StarKind parse_kind(const std::string& s) {
    if (s == "weyl") return StarKind::Weyl;
    if (s == "wick") return StarKind::Wick;
    throw structural_error("--kind must be 'weyl' or 'wick'");
}

void emit(const std::string& payload, const std::string& output) {
    if (output.empty())
        std::cout << payload;
    else
        write_text_file(output, payload);
}

struct StarOpts {
    ModelOpts model;
    std::string kind = "weyl";
    unsigned N = 2;
    std::string f, g, h;
    std::string format = "json";
    std::string output;
};

int run_star(const StarOpts& o) {
    int J = 2 * int(o.N) + 4;
    ChartModel mo = build_model(o.model, J);
    StarContext ctx = make_star_context(mo, parse_kind(o.kind), o.N);
    Jet f = lower_expr(o.f, mo.frame, mo.n, mo.base, J);
    Jet g = lower_expr(o.g, mo.frame, mo.n, mo.base, J);
    StarProduct sp = star(ctx, f, g);
    if (o.format == "json")
        emit(star_result_to_json(ctx, sp, o.f, o.g).dump(2) + "\n", o.output);
    else if (o.format == "csv")
        emit(star_result_to_csv(sp), o.output);
    else
        throw structural_error("--format must be 'json' or 'csv'");
    return 0;
}

int run_mtable(const StarOpts& o) {
    int J = 2 * int(o.N) + 4;
    ChartModel mo = build_model(o.model, J);
    StarContext ctx = make_star_context(mo, parse_kind(o.kind), o.N);
    Jet f = lower_expr(o.f, mo.frame, mo.n, mo.base, J);
    Jet g = lower_expr(o.g, mo.frame, mo.n, mo.base, J);
    StarProduct sp = star(ctx, f, g);
    std::ostringstream out;
    out << "model " << mo.name << "  kind " << star_kind_name(ctx.kind) << "  order " << o.N
        << "\n";
    out << "f = " << o.f << "\ng = " << o.g << "\n";
    for (unsigned t = 0; t <= o.N; ++t)
        out << "M_" << t << "(f,g)(x0) = " << sp.mVal[t].str() << "\n";
    emit(out.str(), o.output);
    return 0;
}

int run_verify(const StarOpts& o) {
    unsigned N = o.N;
    int J = 4 * int(N) + 6;
    ChartModel mo = build_model(o.model, J);
    StarContext ctx = make_star_context(mo, parse_kind(o.kind), N);
    bool complex = mo.frame == Frame::Complex;
    std::string fSrc = !o.f.empty() ? o.f : (complex ? "z1^2*zb1 + z1" : "x1^2 + x1*x2");
    std::string gSrc = !o.g.empty() ? o.g : (complex ? "zb1^2 + z1*zb1" : "x2^3 - x1");
    std::string hSrc = !o.h.empty() ? o.h : (complex ? "z1 + zb1" : "x1*x2");
    Jet f = lower_expr(fSrc, mo.frame, mo.n, mo.base, J);
    Jet g = lower_expr(gSrc, mo.frame, mo.n, mo.base, J);
    Jet h = lower_expr(hSrc, mo.frame, mo.n, mo.base, J);

    Report rep;
    {
        Report mv = validate_model(mo);
        std::string bad;
        for (auto& c : mv.checks)
            if (!c.pass) bad += (bad.empty() ? "" : ", ") + c.name;
        rep.add("model-valid", mv.ok(), bad);
    }
    for (auto& c : check_flatness(ctx).checks) rep.checks.push_back(c);
    for (auto& c : verify_axioms(ctx, f, g, h).checks) rep.checks.push_back(c);
    if (ctx.kind == StarKind::Wick) {
        Jet fHol = lower_expr("z1 + z1^2", Frame::Complex, mo.n, mo.base, J);
        Jet gAnti = lower_expr("zb1 + zb1^3", Frame::Complex, mo.n, mo.base, J);
        std::vector<Jet> left{lower_expr("z1*zb1", Frame::Complex, mo.n, mo.base, J),
                              lower_expr("zb1^2 + z1^2*zb1", Frame::Complex, mo.n, mo.base, J)};
        std::vector<Jet> right{lower_expr("z1*zb1", Frame::Complex, mo.n, mo.base, J),
                               lower_expr("z1^2 + z1*zb1^2", Frame::Complex, mo.n, mo.base, J)};
        for (auto& c : verify_wick_type(ctx, f, fHol, gAnti, left, right).checks)
            rep.checks.push_back(c);
    }
    for (auto& c : verify_order(ctx, f, g, std::min(N, 3u)).checks) rep.checks.push_back(c);

    if (o.format == "json")
        emit(report_to_json(rep).dump(2) + "\n", o.output);
    else
        emit(rep.to_text(), o.output);
    return rep.ok() ? 0 : 1;
}

int run_model_validate(const ModelOpts& m, int order, const std::string& format,
                       const std::string& output) {
    ChartModel mo = build_model(m, order);
    Report rep = validate_model(mo);
    if (format == "json")
        emit(report_to_json(rep).dump(2) + "\n", output);
    else
        emit(rep.to_text(), output);
    return rep.ok() ? 0 : 1;
}

void add_model_opts(CLI::App* sub, ModelOpts& m) {
    sub->add_option("--model", m.spec,
                    "builtin spec (flat-symplectic[:n], flat-kaehler[:n], "
                    "fubini-study[:n[:lambda]], poincare-disc[:lambda]) or JSON config path");
    sub->add_option("--at", m.at,
                    "base point, comma-separated constant expressions "
                    "(z1..zn for complex charts, x1..x2n for real ones)");
    sub->add_option("--connection", m.connection, "kaehler (default) or thirds");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Fedosov star products on symplectic and Kaehler chart models"};
    app.require_subcommand(1);

    StarOpts starOpts, mtableOpts, verifyOpts;
    verifyOpts.format = "text";
    ModelOpts validateOpts;
    int validateOrder = 6;
    std::string validateFormat = "text", validateOutput;

    auto* starCmd = app.add_subcommand("star", "expand f * g through hbar^N at the base point");
    add_model_opts(starCmd, starOpts.model);
    starCmd->add_option("--kind", starOpts.kind, "weyl or wick");
    starCmd->add_option("--order", starOpts.N, "truncation order N in hbar")
        ->check(CLI::Range(0u, 6u));
    starCmd->add_option("--f", starOpts.f, "left factor expression")->required();
    starCmd->add_option("--g", starOpts.g, "right factor expression")->required();
    starCmd->add_option("--format", starOpts.format, "json (default) or csv");
    starCmd->add_option("--output", starOpts.output, "write to file instead of stdout");

    auto* mtableCmd = app.add_subcommand("mtable", "print the M_r(f,g)(x0) table");
    add_model_opts(mtableCmd, mtableOpts.model);
    mtableCmd->add_option("--kind", mtableOpts.kind, "weyl or wick");
    mtableCmd->add_option("--order", mtableOpts.N, "truncation order N in hbar")
        ->check(CLI::Range(0u, 6u));
    mtableCmd->add_option("--f", mtableOpts.f, "left factor expression")->required();
    mtableCmd->add_option("--g", mtableOpts.g, "right factor expression")->required();
    mtableCmd->add_option("--output", mtableOpts.output, "write to file instead of stdout");

    auto* verifyCmd = app.add_subcommand(
        "verify", "machine-check flatness, product axioms and differentiation pattern");
    verifyCmd->set_help_flag("--help", "print help");
    add_model_opts(verifyCmd, verifyOpts.model);
    verifyCmd->add_option("--kind", verifyOpts.kind, "weyl or wick");
    verifyCmd->add_option("--order", verifyOpts.N, "truncation order N in hbar")
        ->check(CLI::Range(1u, 4u));
    verifyCmd->add_option("--f", verifyOpts.f, "probe expression (default depends on chart)");
    verifyCmd->add_option("--g", verifyOpts.g, "probe expression");
    verifyCmd->add_option("--h", verifyOpts.h, "probe expression");
    verifyCmd->add_option("--format", verifyOpts.format, "text (default) or json");
    verifyCmd->add_option("--output", verifyOpts.output, "write to file instead of stdout");

    auto* modelCmd = app.add_subcommand("model", "chart model operations");
    modelCmd->require_subcommand(1);
    auto* validateCmd = modelCmd->add_subcommand(
        "validate", "check symplectic / Kaehler / connection / curvature identities");
    add_model_opts(validateCmd, validateOpts);
    validateCmd->add_option("--order", validateOrder, "jet order of the model")
        ->check(CLI::Range(2, 12));
    validateCmd->add_option("--format", validateFormat, "text (default) or json");
    validateCmd->add_option("--output", validateOutput, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (starCmd->parsed()) return run_star(starOpts);
        if (mtableCmd->parsed()) return run_mtable(mtableOpts);
        if (verifyCmd->parsed()) return run_verify(verifyOpts);
        if (validateCmd->parsed())
            return run_model_validate(validateOpts, validateOrder, validateFormat, validateOutput);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << " (line " << e.line << ", column " << e.column
                  << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
