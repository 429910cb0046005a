#pragma once

#include <stdexcept>
#include <string>

namespace corrfit {

// Bad input: shape/symmetry/range violations, unreadable files, unknown flags.
// Maps to CLI exit code 1.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative fit hit its cap or a failsafe. Maps to CLI exit code 2.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace corrfit
