#pragma once

#include <stdexcept>
#include <string>

namespace oscmono {

// Bad arguments: negative sizes, unknown names, nonpositive steps.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Values outside the physically admissible set.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Solver or quadrature did not converge, ambiguous lattice match.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace oscmono
