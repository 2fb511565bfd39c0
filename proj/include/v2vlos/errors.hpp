#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace v2vlos {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (d <= 0 for a
/// log-normal curve, non-finite input, distance above the model range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Value outside a fixed tabulation range, e.g. a distance with no bin.
class RangeError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

/// Input has no usable spread (zero variance, all-zero samples).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. line() is 1-based; 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Collected per-item failures of a batch operation.
class BatchError : public Error {
public:
    using Failure = std::pair<std::size_t, std::string>;

    explicit BatchError(std::vector<Failure> failures)
        : Error(summarize(failures)), failures_(std::move(failures))
    {
    }

    const std::vector<Failure>& failures() const noexcept { return failures_; }

private:
    static std::string summarize(const std::vector<Failure>& failures)
    {
        std::string msg = std::to_string(failures.size()) + " trace(s) failed";
        if (!failures.empty())
            msg += "; first: #" + std::to_string(failures.front().first) + ": " + failures.front().second;
        return msg;
    }

    std::vector<Failure> failures_;
};

} // namespace v2vlos
