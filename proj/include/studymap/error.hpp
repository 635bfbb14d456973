#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace studymap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or precondition violation by the caller.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A study id (or other identifier) that is not part of the corpus.
class UnknownId : public Error {
public:
    UnknownId(const std::string& what, std::vector<std::string> ids)
        : Error(what), ids_(std::move(ids)) {}

    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

/// Malformed bibtex input. Carries the byte offset and the zero-based index
/// of the entry being parsed when the problem was found.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset, std::size_t entry_index)
        : Error(what), offset_(offset), entry_index_(entry_index) {}

    std::size_t offset() const noexcept { return offset_; }
    std::size_t entry_index() const noexcept { return entry_index_; }

private:
    std::size_t offset_;
    std::size_t entry_index_;
};

/// Two entries share a citation key.
class DuplicateKeyError : public ParseError {
public:
    DuplicateKeyError(const std::string& what, std::size_t offset, std::size_t first_entry,
                      std::size_t second_entry)
        : ParseError(what, offset, second_entry), first_entry_(first_entry) {}

    std::size_t first_entry() const noexcept { return first_entry_; }

private:
    std::size_t first_entry_;
};

/// A decision timestamp earlier than the last recorded one.
class TimeRegression : public Error {
public:
    using Error::Error;
};

/// Operation requires state that has not been provided yet (e.g. a gold standard).
class StateError : public Error {
public:
    using Error::Error;
};

/// Non-fatal issue noticed while processing input. Rendered one per line on
/// the diagnostic stream.
struct Diagnostic {
    std::string entry_id;     // may be empty when no entry is involved
    std::size_t offset = 0;   // byte offset into the source, 0 if not applicable
    std::string message;

    std::string to_string() const;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace studymap
