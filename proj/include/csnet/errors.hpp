#pragma once

#include <stdexcept>
#include <string>

namespace csnet {

// Base class for all errors thrown by the library. Contract violations
// (structural problems a validator can enumerate) are reported as Violation
// values instead; exceptions are reserved for broken preconditions.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class UnknownTransitionError : public Error {
 public:
  explicit UnknownTransitionError(const std::string& id)
      : Error("unknown transition: " + id) {}
};

class UnknownPlaceError : public Error {
 public:
  explicit UnknownPlaceError(const std::string& id)
      : Error("unknown place: " + id) {}
};

class NotEnabledError : public Error {
 public:
  NotEnabledError(const std::string& transition, const std::string& why)
      : Error("transition " + transition + " not enabled: " + why) {}
};

class AlreadyMemberError : public Error {
 public:
  AlreadyMemberError(const std::string& group, const std::string& agent)
      : Error("agent " + agent + " is already a member of group " + group) {}
};

class NotMemberError : public Error {
 public:
  NotMemberError(const std::string& group, const std::string& agent)
      : Error("agent " + agent + " is not a member of group " + group) {}
};

class SenderNotMemberError : public Error {
 public:
  SenderNotMemberError(const std::string& group, const std::string& sender)
      : Error("sender " + sender + " is not a member of group " + group) {}
};

class TruncatedGraphError : public Error {
 public:
  explicit TruncatedGraphError(const std::string& check)
      : Error("check '" + check + "' needs a complete graph but exploration was truncated") {}
};

class InvalidConfigError : public Error {
 public:
  InvalidConfigError(const std::string& field, const std::string& why)
      : Error("invalid config field '" + field + "': " + why), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ScriptExhaustedError : public Error {
 public:
  ScriptExhaustedError() : Error("scripted human policy ran out of decisions") {}
};

class InputClosedError : public Error {
 public:
  InputClosedError() : Error("interactive input channel closed") {}
};

// Raised by the net file parser; line/column refer to the source document.
class NetParseError : public Error {
 public:
  NetParseError(const std::string& what, int line, int column)
      : Error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace csnet
