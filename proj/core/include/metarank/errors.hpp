#pragma once

#include <stdexcept>
#include <string>

namespace metarank {

/// Unreadable or unwritable file.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input that cannot be skipped (duplicate ids, empty corpus, ...).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or inconsistent configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Judge transport or decode failure that exhausted its retries.
struct JudgeError : std::runtime_error {
    explicit JudgeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace metarank
