#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace apar {

/// Input file could not be understood. `line` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Bad key, value, or missing file in a run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A non-finite value showed up during optimization. iteration < 0 means
/// the failure happened outside a training loop.
class NumericError : public std::runtime_error {
public:
    NumericError(std::string term, long iteration, const std::string& message)
        : std::runtime_error((iteration >= 0 ? "iteration " + std::to_string(iteration) + ", " : "") +
                             "term '" + term + "': " + message),
          term_(std::move(term)),
          iteration_(iteration) {}

    const std::string& term() const noexcept { return term_; }
    long iteration() const noexcept { return iteration_; }

private:
    std::string term_;
    long iteration_;
};

}  // namespace apar
