// Copyright (c) 2026 ionmoc developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ionmoc {

// Error categories, aligned with the CLI exit codes: Config -> 1,
// Divergence -> 2, Io -> 3. Numeric failures surface as solver errors.
enum class ErrorKind {
  Config,
  Divergence,
  Io,
  Numeric,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  static Error config(std::string msg) {
    return Error(ErrorKind::Config, std::move(msg));
  }
  static Error io(std::string msg) {
    return Error(ErrorKind::Io, std::move(msg));
  }
  static Error divergence(std::string msg) {
    return Error(ErrorKind::Divergence, std::move(msg));
  }
  static Error numeric(std::string msg) {
    return Error(ErrorKind::Numeric, std::move(msg));
  }

 private:
  ErrorKind kind_;
};

inline void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) throw Error(kind, msg);
}

}  // namespace ionmoc
