#pragma once

#include <stdexcept>
#include <string>

namespace kinavg {

// Bad parameters, malformed configs, violated preconditions. The CLI maps
// this to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not produce a trustworthy value (singular lattice
// point without regularisation, quadrature failure, degenerate data).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

}  // namespace kinavg
