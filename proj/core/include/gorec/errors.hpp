#pragma once

#include <stdexcept>
#include <string>

namespace gorec {

// Input that violates a documented precondition or schema. CLI maps this
// family to exit code 1; anything else escaping to main is exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : validation_error {
    explicit parse_error(const std::string& what) : validation_error(what) {}
};

struct schema_error : validation_error {
    explicit schema_error(const std::string& what) : validation_error(what) {}
};

struct domain_error : validation_error {
    explicit domain_error(const std::string& what) : validation_error(what) {}
};

// Requested configuration cannot be satisfied by the data (e.g. more
// clusters than distinct points, or filtering disconnected a model).
struct infeasible_error : validation_error {
    explicit infeasible_error(const std::string& what) : validation_error(what) {}
};

}  // namespace gorec
