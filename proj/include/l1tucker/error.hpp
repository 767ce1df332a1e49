#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace l1tucker {

/// Base class for every error raised by the library. Each subclass maps to a
/// stable process exit code used by the command-line front end.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual int exit_code() const noexcept = 0;
};

/// Precondition violated by the caller (bad shape, rank, mode, flag value).
class ArgumentError : public Error {
public:
    using Error::Error;
    [[nodiscard]] int exit_code() const noexcept override { return 2; }
};

/// Malformed binary or text input. Carries the byte offset where decoding
/// stopped, when one is meaningful.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    explicit FormatError(const std::string& what) : Error(what), offset_(0) {}

    [[nodiscard]] int exit_code() const noexcept override { return 3; }
    [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
    [[nodiscard]] int exit_code() const noexcept override { return 3; }
};

/// A numerical routine produced non-finite values or otherwise broke down.
class NumericalError : public Error {
public:
    using Error::Error;
    [[nodiscard]] int exit_code() const noexcept override { return 4; }
};

}  // namespace l1tucker
