#pragma once

#include <stdexcept>
#include <utility>

#include <gmpxx.h>

namespace smoothsum {

/// Base parameter of the two-generator sequence: values are of the form
/// 2^x * p^y for an odd integer p > 1.
struct Params {
  mpz_class p;

  explicit Params(mpz_class p_in) : p(std::move(p_in)) {
    if (p <= 1 || mpz_even_p(p.get_mpz_t()))
      throw std::invalid_argument("p must be an odd integer greater than 1");
  }
};

/// Invariant the chain machinery is supposed to guarantee was violated;
/// indicates an inadmissible chain or an implementation bug, not bad input.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// A configured enumeration budget would be exceeded.
struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace smoothsum
