#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arraygain {

// Base of every error the library throws. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rejected input: bad geometry, out-of-range direction, malformed config.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Malformed pattern table or config document. Carries the offending row when known.
class ParseError : public InvalidInput {
public:
    explicit ParseError(const std::string& what, std::size_t row = 0)
        : InvalidInput(row ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// Gram matrix of the channel is singular (or too badly conditioned) for zero-forcing.
class DegenerateChannel : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(what + ": " + path), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

namespace detail {

inline void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidInput(message);
}

}  // namespace detail
}  // namespace arraygain
