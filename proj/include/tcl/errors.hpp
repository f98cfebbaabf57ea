#pragma once

#include <stdexcept>
#include <string>

namespace tcl {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SelfLoop : Error {
  explicit SelfLoop(const std::string& w) : Error(w) {}
};
struct DuplicateEdge : Error {
  explicit DuplicateEdge(const std::string& w) : Error(w) {}
};
struct DisconnectedGraph : Error {
  explicit DisconnectedGraph(const std::string& w) : Error(w) {}
};
struct OutOfRange : Error {
  explicit OutOfRange(const std::string& w) : Error(w) {}
};
struct EmptySet : Error {
  explicit EmptySet(const std::string& w) : Error(w) {}
};
struct NotConvex : Error {
  explicit NotConvex(const std::string& w) : Error(w) {}
};
struct NoGate : Error {
  explicit NoGate(const std::string& w) : Error(w) {}
};
struct NotAnEdge : Error {
  explicit NotAnEdge(const std::string& w) : Error(w) {}
};
struct NotMedianGraph : Error {
  explicit NotMedianGraph(const std::string& w) : Error(w) {}
};
struct AmbiguousMidpoint : Error {
  explicit AmbiguousMidpoint(const std::string& w) : Error(w) {}
};
struct InvalidSpec : Error {
  explicit InvalidSpec(const std::string& w) : Error(w) {}
};
struct IndivisibleRemainder : Error {
  explicit IndivisibleRemainder(const std::string& w) : Error(w) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(w) {}
};
struct SchemaError : Error {
  explicit SchemaError(const std::string& w) : Error(w) {}
};

}  // namespace tcl
