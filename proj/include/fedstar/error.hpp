// SPDX-License-Identifier: MIT

#ifndef FEDSTAR_ERROR_HPP
#define FEDSTAR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fedstar {

/// Shape or precondition violation: mismatched dimensions, orders, caps, frames.
struct structural_error : std::logic_error {
    explicit structural_error(const std::string& what) : std::logic_error(what) {}
};

/// Inversion of something whose constant term vanishes.
struct singularity_error : std::runtime_error {
    explicit singularity_error(const std::string& what) : std::runtime_error(what) {}
};

/// A derivative was requested from a jet whose reliable order is already zero.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// Division by the deformation parameter of a series with nonzero constant part.
struct divisibility_error : std::logic_error {
    explicit divisibility_error(const std::string& what) : std::logic_error(what) {}
};

/// Source text that does not parse; positions are 1-based.
struct parse_error : std::runtime_error {
    int line;
    int column;
    parse_error(const std::string& what, int line_, int column_)
        : std::runtime_error(what), line(line_), column(column_) {}
};

} // namespace fedstar

#endif
