#pragma once

#include <stdexcept>
#include <string>

namespace hopf {

// Values double as CLI exit codes.
enum class ErrorKind : int {
    Parse = 2,
    Invariant = 3,
    Precondition = 4,
    Budget = 5,
    Singular = 6,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace hopf
