#include "stylescope/core/error.hpp"

namespace stylescope {

void throw_io_error(const std::string& what, const std::string& path) {
  throw ValidationError(what + ": " + path);
}

void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string message = context + ": " + e.what();
  switch (e.exit_code()) {
    case ExitCode::usage:
      throw UsageError(message);
    case ExitCode::numeric:
      throw NumericError(message);
    default:
      throw ValidationError(message);
  }
}

}  // namespace stylescope
