// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "fedstar/io.hpp"

using namespace fedstar;

TEST_CASE("star product serialization") {
    auto mo = flat_symplectic_model(1, {Scalar(rat(3)), Scalar(rat(5))}, 10);
    auto ctx = make_star_context(mo, StarKind::Weyl, 3);
    Jet f = lower_expr("x1^2", Frame::Real, 1, mo.base, 10);
    Jet g = lower_expr("x2^2", Frame::Real, 1, mo.base, 10);
    auto sp = star(ctx, f, g);

    SECTION("json fields and exact values") {
        Json out = star_result_to_json(ctx, sp, "x1^2", "x2^2");
        CHECK(out["kind"] == "weyl");
        CHECK(out["order"] == 3);
        CHECK(out["basePoint"][0]["re"] == "3");
        CHECK(out["coeffs"][0]["re"] == "225");
        CHECK(out["coeffs"][1]["im"] == "30");
        CHECK(out["coeffs"][2]["re"] == "-1/2");
        CHECK(out["mValues"][1]["re"] == "60");
        CHECK(out["mValues"][2]["re"] == "2");
        CHECK(out["mValues"][3]["re"] == "0");
    }
    SECTION("csv layout") {
        std::string csv = star_result_to_csv(sp);
        CHECK(csv.rfind("h,coeff_re,coeff_im,m_re,m_im\n0,225,0,225,0\n", 0) == 0);
        CHECK(csv.find("\n2,-1/2,0,2,0\n") != std::string::npos);
    }
    SECTION("byte-identical across repeated runs") {
        Json again = star_result_to_json(ctx, star(ctx, f, g), "x1^2", "x2^2");
        CHECK(star_result_to_json(ctx, sp, "x1^2", "x2^2").dump() == again.dump());
    }
}

TEST_CASE("report serialization") {
    Report rep;
    rep.add("a", true);
    rep.add("b", false, "defect 1/2");
    Json j = report_to_json(rep);
    CHECK(j["ok"] == false);
    CHECK(j["checks"][0]["pass"] == true);
    CHECK_FALSE(j["checks"][0].contains("detail"));
    CHECK(j["checks"][1]["detail"] == "defect 1/2");
}

TEST_CASE("model config files") {
    SECTION("kahler potential reproducing the flat hermitian chart") {
        Json cfg = Json::parse(R"json({
            "kind": "kahler",
            "n": 1,
            "basePoint": ["1/3 + i/7"],
            "kahlerPotential": "z1*zb1"
        })json");
        auto mo = load_model_config(cfg, 6);
        auto ref = flat_kaehler_model(1, {Scalar(rat(1, 3), rat(1, 7))}, 6);
        CHECK(mo.base == ref.base);
        for (std::size_t k = 0; k < mo.omega.size(); ++k) CHECK(mo.omega[k] == ref.omega[k]);
        CHECK(validate_model(mo).ok());
    }
    SECTION("quartic potential validates") {
        Json cfg = Json::parse(R"json({
            "kind": "kahler",
            "n": 1,
            "kahlerPotential": "z1*zb1 + (z1*zb1)^2",
            "name": "quartic"
        })json");
        auto mo = load_model_config(cfg, 6);
        CHECK(mo.name == "quartic");
        CHECK(validate_model(mo).ok());
    }
    SECTION("symplectic matrix reproducing the flat chart") {
        Json cfg = Json::parse(R"json({
            "kind": "symplectic",
            "n": 1,
            "basePoint": ["3", "5"],
            "omegaMatrix": [["0", "1"], ["-1", "0"]]
        })json");
        auto mo = load_model_config(cfg, 6);
        auto ref = flat_symplectic_model(1, {Scalar(rat(3)), Scalar(rat(5))}, 6);
        for (std::size_t k = 0; k < mo.omega.size(); ++k) CHECK(mo.omega[k] == ref.omega[k]);
        CHECK(validate_model(mo).ok());
    }
    SECTION("position dependent closed two-form") {
        Json cfg = Json::parse(R"json({
            "kind": "symplectic",
            "n": 1,
            "basePoint": ["1/2", "0"],
            "omegaMatrix": [["0", "1 + x1^2"], ["-1 - x1^2", "0"]]
        })json");
        auto mo = load_model_config(cfg, 5);
        CHECK(validate_model(mo).ok());
    }
    SECTION("missing and malformed fields raise structural errors") {
        CHECK_THROWS_AS(load_model_config(Json::parse(R"({"kind": "kahler", "n": 1})"), 4),
                        structural_error);
        CHECK_THROWS_AS(load_model_config(Json::parse(R"({"kind": "x", "n": 1})"), 4),
                        structural_error);
        CHECK_THROWS_AS(load_model_config(Json::parse(R"({"kind": "kahler", "n": 0})"), 4),
                        structural_error);
        CHECK_THROWS_AS(
            load_model_config(
                Json::parse(
                    R"({"kind": "symplectic", "n": 1, "omegaMatrix": [["0", "1"], ["-1"]]})"),
                4),
            structural_error);
        CHECK_THROWS_AS(load_model_config_file("/nonexistent/config.json", 4), structural_error);
    }
}

TEST_CASE("text file round trip") {
    std::string path = "io_roundtrip_test.txt";
    write_text_file(path, "exact\n");
    CHECK(read_text_file(path) == "exact\n");
    std::remove(path.c_str());
}
