#pragma once

#include <stdexcept>
#include <string>

namespace rhi {

// Coarse error category; the CLI maps each onto an exit status.
enum class ErrorKind {
  kInvalidArgument,  // caller broke a precondition
  kData,             // malformed or inconsistent input data / files
  kInvariant,        // an internal invariant failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void ThrowInvalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}

[[noreturn]] inline void ThrowData(const std::string& what) {
  throw Error(ErrorKind::kData, what);
}

[[noreturn]] inline void ThrowInvariant(const std::string& what) {
  throw Error(ErrorKind::kInvariant, what);
}

}  // namespace rhi
