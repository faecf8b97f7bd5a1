#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace inexa {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed OCEL document. `offset` is the byte position when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset = npos)
      : Error(what), offset_(offset) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A well-formed document or an operation argument that breaks a log invariant
/// (duplicate event id, inconsistent object type, unknown abstraction suffix, ...).
class LogInvariantError : public Error {
 public:
  using Error::Error;
};

struct Diagnostic {
  std::string event_id;
  std::string reason;

  bool operator==(const Diagnostic&) const = default;
};

/// Discovered model does not perfectly fit the log, or some labeled transition
/// is never covered by the replay.
class UnfitModelError : public Error {
 public:
  UnfitModelError(const std::string& what, std::vector<Diagnostic> diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class InadmissibleError : public Error {
 public:
  using Error::Error;
};

class StateSpaceExceeded : public Error {
 public:
  using Error::Error;
};

/// Client referenced a record that is not currently available for apply.
class NotAvailableError : public Error {
 public:
  using Error::Error;
};

/// Client asked to redo an abstraction object that is not redoable.
class NotRedoableError : public Error {
 public:
  using Error::Error;
};

}  // namespace inexa
