// SPDX-License-Identifier: MIT

/**
 * \file
 * \brief Named pass/fail checks with exact defect strings.
 *
 * Every verification in this library reports what it checked and, on failure,
 * the exact symbolic defect, never a bare boolean.
 */

#ifndef FEDSTAR_REPORT_HPP
#define FEDSTAR_REPORT_HPP

#include <string>
#include <vector>

namespace fedstar {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail; // defect on failure, optional note on success
};

struct Report {
    std::vector<Check> checks;

    void add(std::string name, bool pass, std::string detail = "") {
        checks.push_back({std::move(name), pass, std::move(detail)});
    }

    bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    unsigned failures() const {
        unsigned n = 0;
        for (const auto& c : checks)
            if (!c.pass) ++n;
        return n;
    }

    std::string to_text() const {
        std::string out;
        for (const auto& c : checks) {
            out += c.pass ? "pass" : "FAIL";
            out += "  " + c.name;
            if (!c.detail.empty()) out += "  [" + c.detail + "]";
            out += "\n";
        }
        return out;
    }
};

} // namespace fedstar

#endif
