#pragma once

#include <stdexcept>
#include <string>

namespace wetreg {

/// Failure categories. The C API maps these one-to-one onto status codes.
enum class ErrorKind {
  invalid_argument,
  config,
  not_converged,
  linear_solve,
  fit_failure,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_argument(const std::string& what) {
  return Error(ErrorKind::invalid_argument, what);
}

inline Error config_error(const std::string& what) {
  return Error(ErrorKind::config, what);
}

}  // namespace wetreg
