#pragma once

#include <stdexcept>
#include <string>

namespace cxgeo {

/// Raised when an operation's precondition is violated or a numeric kernel
/// cannot produce a meaningful result. The message is the stable diagnostic
/// string that callers and the CLI report verbatim.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cxgeo
