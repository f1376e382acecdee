#pragma once

#include <stdexcept>
#include <string>

namespace treepat {

/// Raised when a request exceeds one of the documented size guards
/// (enumeration caps, node-count limits). The message names the guard.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed tree / digraph / pattern documents.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace treepat
