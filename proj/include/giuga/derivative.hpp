// derivative.hpp - the arithmetic derivative n' and the linear form n' = a*n + 1.
#pragma once

#include <optional>

#include "giuga/numtheory.hpp"

namespace giuga {

struct DerivativeResult {
  Natural n;
  Natural derivative;           // n * sum(r_i / p_i), an integer; 0 for n in {0, 1}
  Factorization factorization;
};

// Witness that derivative(n) = index * n + 1 with index >= 1.
struct LinearForm {
  Natural n;
  Natural index;
};

// n' computed as sum of r_i * (n / p_i) over the factorization - integer
// arithmetic only, no rational intermediates. 0' = 0 and 1' = 0 by
// convention. Propagates BudgetExceeded from factorize.
DerivativeResult derive(const Natural& n, FactorBudget budget = {});

// Same value with the factorization supplied by the caller; throws
// std::invalid_argument if the product of f differs from n.
Natural derive_factored(const Factorization& f, const Natural& n);

// The a with derivative(n) = a*n + 1, when it exists and a >= 1. Primes
// solve the a = 0 case and are deliberately excluded (a natural index
// starts at 1 here; composite solutions are exactly the Giuga numbers).
std::optional<LinearForm> linear_form(const Natural& n, FactorBudget budget = {});

}  // namespace giuga
