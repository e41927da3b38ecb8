#pragma once

#include <stdexcept>
#include <string>

namespace stylescope {

/// Process exit codes shared by every CLI subcommand.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  validation = 2,
  numeric = 3,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::validation; }
};

/// Bad flags, bad config keys, out-of-range knobs.
class UsageError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::usage; }
};

/// Input data violates a documented invariant (also used for unreadable files).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numeric routine could not produce a finite result.
class NumericError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::numeric; }
};

[[noreturn]] void throw_io_error(const std::string& what, const std::string& path);

/// Rethrows `e` as the same error category with `context` prefixed.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context);

}  // namespace stylescope
