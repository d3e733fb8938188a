#pragma once

#include <stdexcept>
#include <string>

namespace pmqkd {

// Invalid or inconsistent user-facing configuration (bad field order,
// non-prime dimension, malformed experiment grid, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Two field elements from different GF(p^r) instances were combined.
class FieldMismatchError : public std::invalid_argument {
public:
    explicit FieldMismatchError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A truncated Fock-space or photon-number computation lost more mass than
// the configured bound allows.
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Decoy-state linear inversion found the observed gains mutually inconsistent.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical guard tripped (negative probability beyond tolerance, ...).
class NumericGuardError : public std::runtime_error {
public:
    explicit NumericGuardError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pmqkd
