#pragma once

#include <stdexcept>
#include <string>

namespace potvid {

// Caller passed a value outside the operation's domain (bad window,
// mismatched dimensions, negative chi-squared input, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed file content: bad magic, truncated payload, illegal header.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration value: unknown operator tag, unknown config key,
// out-of-range parameter.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace potvid
