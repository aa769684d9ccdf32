#pragma once

#include <stdexcept>
#include <string>

namespace diffagg {

// Invalid or inconsistent input data / configuration (CLI maps this to exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Time step violates a stability restriction of an explicit scheme.
struct step_size_error : std::runtime_error {
    explicit step_size_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace diffagg
