#pragma once

#include <stdexcept>
#include <string>

namespace lightspan {

// bad user input: wrong dimension, duplicate points, eps out of range, ...
struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// a construction invariant broke; always a bug, never the caller's fault
struct invariant_violation : std::logic_error {
  using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw invalid_input(what);
}

// literal overloads: no string is built unless the check fails (some checks sit on hot paths)
inline void require(bool ok, const char* what) {
  if (!ok) throw invalid_input(what);
}

inline void ensure(bool ok, const std::string& what) {
  if (!ok) throw invariant_violation(what);
}

inline void ensure(bool ok, const char* what) {
  if (!ok) throw invariant_violation(what);
}

}  // namespace lightspan
