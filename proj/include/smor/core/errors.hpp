// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace smor {

enum class ErrorKind {
  InvalidInput,
  Dimension,
  Stiffness,      // step size underflow in the integrator
  Budget,         // step budget exhausted
  Divergence,     // non-finite state
  Selection,      // (s)DEIM point selection failed
  LinearSolve,
  Tracking,       // front tracking found no front
  Offline,
  Online,
  UndefinedError, // e.g. relative error against a zero reference
  Io,
  Format,
};

const char* to_string(ErrorKind kind) noexcept;

/// True for error kinds that originate in the numerics rather than in
/// bad input or I/O. The CLI maps these to exit code 2.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace smor
