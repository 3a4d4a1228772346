#pragma once

#include <stdexcept>
#include <string>

namespace cda {

/* Bad or inconsistent input data: config files, invalid parameters. */
struct config_error : std::runtime_error {
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

/* Requested work exceeds a configured budget (point cap, codebook cap). */
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string &msg) : std::runtime_error(msg) {}
};

/* An internal cross-check failed; indicates a bug, not bad input. */
struct internal_error : std::logic_error {
    explicit internal_error(const std::string &msg) : std::logic_error(msg) {}
};

} // namespace cda
