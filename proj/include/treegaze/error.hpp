#pragma once

#include <stdexcept>
#include <string>

namespace treegaze {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (CoNLL-U, CSV). Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Dependency heads that do not form a single-rooted tree.
class TreeError : public Error {
public:
    TreeError(const std::string& sentence_id, const std::string& what)
        : Error("sentence " + sentence_id + ": " + what), sentence_id_(sentence_id) {}
    const std::string& sentence_id() const noexcept { return sentence_id_; }

private:
    std::string sentence_id_;
};

/// Data files that parse but violate a content contract (sizes, ranges, NaNs).
class IngestError : public Error {
public:
    using Error::Error;
};

/// Inputs a computation cannot be defined on (too few values, zero variance).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration or parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace treegaze
