#include "giuga/derivative.hpp"

namespace giuga {

Natural derive_factored(const Factorization& f, const Natural& n) {
  if (f.value() != n)
    throw std::invalid_argument("factorization does not multiply to " + to_decimal(n));
  Natural d = 0;
  for (const auto& [p, e] : f.factors()) d += e * (n / p);
  return d;
}

DerivativeResult derive(const Natural& n, FactorBudget budget) {
  if (n < 0) throw std::invalid_argument("derivative domain is the naturals");
  if (n <= 1) return {n, 0, Factorization{}};
  Factorization f = factorize(n, budget);
  Natural d = 0;
  for (const auto& [p, e] : f.factors()) d += e * (n / p);
  return {n, std::move(d), std::move(f)};
}

std::optional<LinearForm> linear_form(const Natural& n, FactorBudget budget) {
  if (n <= 1) return std::nullopt;
  DerivativeResult r = derive(n, budget);
  Natural shifted = r.derivative - 1;
  if (shifted < n) return std::nullopt;       // a >= 1 requires n' >= n + 1
  if (!mpz_divisible_p(shifted.get_mpz_t(), n.get_mpz_t())) return std::nullopt;
  return LinearForm{n, shifted / n};
}

}  // namespace giuga
