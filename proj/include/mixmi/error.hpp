#pragma once

#include <stdexcept>
#include <string>

namespace mixmi {

enum class ErrorKind {
  InvalidArgument,
  Validation,
  Parse,
  Io,
  Unsupported,
  Numerical,
};

/// Exception type thrown by every library routine. The kind maps one-to-one
/// onto the status codes of the C API.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mixmi
