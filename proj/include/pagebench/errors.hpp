// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <stdexcept>
#include <string>

namespace pagebench {

// Malformed bytes: bad magic, truncated payload, out-of-range values.
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid request or configuration supplied by the caller.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem or socket failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pagebench
