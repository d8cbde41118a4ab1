// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#ifndef FEDSTAR_CLI_PATH
#error "FEDSTAR_CLI_PATH must point at the command line binary"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(FEDSTAR_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {};
    char buf[4096];
    std::string out;
    std::size_t nread;
    while ((nread = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, nread);
    int st = pclose(p);
    RunResult r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.out = out;
    return r;
}

}  // namespace

TEST_CASE("star subcommand") {
    const std::string base =
        "star --model flat-symplectic:1 --kind weyl --order 3 --f 'x1^2' --g 'x2^2' --at '3,5'";
    SECTION("json output with exact rationals") {
        RunResult r = run(base);
        CHECK(r.code == 0);
        CHECK(r.out.find("\"model\": \"flat-symplectic\"") != std::string::npos);
        CHECK(r.out.find("\"re\": \"225\"") != std::string::npos);
        CHECK(r.out.find("\"re\": \"60\"") != std::string::npos);
        CHECK(r.out.find("\"re\": \"-1/2\"") != std::string::npos);
    }
    SECTION("byte-identical across runs") {
        RunResult a = run(base);
        RunResult b = run(base);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
    SECTION("csv golden output") {
        RunResult r = run(base + " --format csv");
        CHECK(r.code == 0);
        CHECK(r.out ==
              "h,coeff_re,coeff_im,m_re,m_im\n"
              "0,225,0,225,0\n"
              "1,0,30,60,0\n"
              "2,-1/2,0,2,0\n"
              "3,0,0,0,0\n");
    }
    SECTION("output file") {
        std::string path = "cli_star_out.json";
        RunResult r = run(base + " --output " + path);
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        std::ifstream in(path);
        REQUIRE(in.good());
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(content.find("\"re\": \"225\"") != std::string::npos);
        std::remove(path.c_str());
    }
}

TEST_CASE("mtable subcommand") {
    RunResult r = run(
        "mtable --model flat-kaehler:1 --kind wick --order 2 --f 'z1' --g 'zb1' --at '1/2+i/3'");
    CHECK(r.code == 0);
    CHECK(r.out.find("M_0(f,g)(x0) = 13/36") != std::string::npos);
    CHECK(r.out.find("M_1(f,g)(x0) = -4i") != std::string::npos);
    CHECK(r.out.find("M_2(f,g)(x0) = 0") != std::string::npos);
}

TEST_CASE("verify subcommand") {
    SECTION("symmetric kind on the sphere") {
        RunResult r = run("verify --model fubini-study:1:2 --kind weyl --order 1");
        CHECK(r.code == 0);
        CHECK(r.out.find("pass  flatness-window") != std::string::npos);
        CHECK(r.out.find("pass  symmetry") != std::string::npos);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
    SECTION("normally ordered kind reports the differentiation pattern") {
        RunResult r = run("verify --model fubini-study --kind wick --order 1");
        CHECK(r.code == 0);
        CHECK(r.out.find("pass  holomorphic-absorption-right") != std::string::npos);
        CHECK(r.out.find("pass  perturbation-invariance") != std::string::npos);
    }
    SECTION("json format") {
        RunResult r = run("verify --model flat-kaehler --kind wick --order 1 --format json");
        CHECK(r.code == 0);
        CHECK(r.out.find("\"ok\": true") != std::string::npos);
    }
}

TEST_CASE("model validate subcommand") {
    SECTION("builtin passes") {
        RunResult r = run("model validate --model poincare-disc:3 --at '1/4+i/5'");
        CHECK(r.code == 0);
        CHECK(r.out.find("pass  connection-symplectic") != std::string::npos);
    }
    SECTION("failing configuration exits 1 with the exact defect") {
        std::string path = "cli_neg_model.json";
        std::ofstream(path) << R"({"kind": "kahler", "n": 1, "kahlerPotential": "-z1*zb1"})";
        RunResult r = run("model validate --model " + path);
        CHECK(r.code == 1);
        CHECK(r.out.find("FAIL  positive-at-base") != std::string::npos);
        CHECK(r.out.find("leading minor 1 is -1") != std::string::npos);
        std::remove(path.c_str());
    }
    SECTION("config file star product") {
        std::string path = "cli_model.json";
        std::ofstream(path) << R"({"kind": "kahler", "n": 1, "basePoint": ["1/3"],)"
                            << R"( "kahlerPotential": "z1*zb1"})";
        RunResult r = run("star --model " + path + " --kind wick --order 1 --f 'z1' --g 'zb1'");
        CHECK(r.code == 0);
        CHECK(r.out.find("\"kind\": \"wick\"") != std::string::npos);
        std::remove(path.c_str());
    }
}

TEST_CASE("configuration errors exit 2") {
    CHECK(run("star --model flat-symplectic --kind wick --order 1 --f 'x1' --g 'x2'").code == 2);
    CHECK(run("star --model flat-symplectic --order 1 --f 'x1 +' --g 'x2'").code == 2);
    CHECK(run("star --model no-such-model --order 1 --f 'x1' --g 'x2'").code == 2);
    CHECK(run("star --model flat-symplectic --order 1 --f 'z1' --g 'x2'").code == 2);
    CHECK(run("mtable --model poincare-disc --at '2' --order 1 --f 'z1' --g 'zb1'").code == 2);
    CHECK(run("star --model flat-symplectic --order 1 --f '1/x1' --g 'x2' --at '0,0'").code == 2);
    CHECK(run("nonsense").code == 2);
}
