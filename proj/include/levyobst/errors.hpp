#pragma once

#include <stdexcept>
#include <string>

namespace levyobst {

/// Bad user input: parameter domains, config schema, incompatible data.
/// Maps to CLI exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical precondition does not hold for the requested computation
/// (divergent moment integral, violated stability bound, simulation blowup).
/// Maps to CLI exit code 3.
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

/// A verification-style check (dpp residual, cross-validation, regularity
/// probe in strict mode) failed. Maps to CLI exit code 4.
class check_failure : public std::runtime_error {
public:
    explicit check_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace levyobst
