#pragma once

#include <stdexcept>
#include <string>

namespace qpt {

// Input violates an operation's preconditions.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A file could not be read or written.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qpt
