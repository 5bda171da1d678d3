#pragma once

#include <stdexcept>
#include <string>

namespace coinknn {

/// Input violates a documented precondition (length mismatch, non-finite value, domain error).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// The coincidence index of two zero vectors is 0/0.
class UndefinedComparison : public std::domain_error {
public:
    explicit UndefinedComparison(const std::string& what) : std::domain_error(what) {}
};

/// A configuration that is well formed but not handled (e.g. unequal-sigma normal intersections).
class UnsupportedConfiguration : public std::runtime_error {
public:
    explicit UnsupportedConfiguration(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coinknn
