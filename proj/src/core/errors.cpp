// Copyright 2026 The smor Authors
// SPDX-License-Identifier: Apache-2.0

#include "smor/core/errors.hpp"

namespace smor {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Dimension: return "dimension mismatch";
    case ErrorKind::Stiffness: return "step size underflow";
    case ErrorKind::Budget: return "step budget exceeded";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Selection: return "point selection failure";
    case ErrorKind::LinearSolve: return "linear solve failure";
    case ErrorKind::Tracking: return "front tracking failure";
    case ErrorKind::Offline: return "offline failure";
    case ErrorKind::Online: return "online failure";
    case ErrorKind::UndefinedError: return "undefined error measure";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Format: return "format error";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Stiffness:
    case ErrorKind::Budget:
    case ErrorKind::Divergence:
    case ErrorKind::Selection:
    case ErrorKind::LinearSolve:
    case ErrorKind::Tracking:
    case ErrorKind::Offline:
    case ErrorKind::Online:
    case ErrorKind::UndefinedError:
      return true;
    default:
      return false;
  }
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace smor
