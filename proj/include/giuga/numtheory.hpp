// numtheory.hpp - arbitrary-precision arithmetic, primality, factorization.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace giuga {

// Non-negative arbitrary-precision integer. Non-negativity is enforced at
// parse boundaries; internal arithmetic may pass through negative
// intermediates (mpz_class is signed).
using Natural = mpz_class;
using Integer = mpz_class;

// Exact fraction, always canonical: gcd(|num|, den) = 1, den >= 1.
using Rational = mpq_class;

// Parses a decimal string of digits. Throws std::invalid_argument on
// anything else (sign characters included).
Natural parse_natural(std::string_view text);

std::string to_decimal(const Natural& n);

// num/den in lowest terms; den must be nonzero.
Rational make_rational(const Integer& num, const Integer& den);

struct PrimePower {
  Natural prime;
  unsigned exponent = 1;

  bool operator==(const PrimePower&) const = default;
};

// Multiset of prime powers, strictly increasing by prime. Empty list
// represents 1. Construction validates ordering and positive exponents;
// primality of the entries is the producer's responsibility (factorize
// only emits tested primes, reconcile_entry re-tests).
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(std::vector<PrimePower> factors);

  const std::vector<PrimePower>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }
  std::size_t distinct_count() const { return factors_.size(); }

  Natural value() const;     // product of p^e
  Natural radical() const;   // product of distinct p
  unsigned total_multiplicity() const;
  bool squarefree() const;

  bool operator==(const Factorization&) const = default;

 private:
  std::vector<PrimePower> factors_;
};

// ---------------------------------------------------------------- primality

// Deterministic for n < 2^64 (Miller-Rabin over the first 12 prime bases).
bool is_prime_u64(std::uint64_t n);

// Exact below 2^64; above it, 64 rounds of random-base strong-probable-prime
// testing (error probability <= 4^-64). primality_is_deterministic tells a
// caller which regime applies.
bool is_prime(const Natural& n);
bool primality_is_deterministic(const Natural& n);

// ------------------------------------------------------------- factorization

// Operation budget for factorize: counts rho iterations and trial-division
// steps, so runs are reproducible independent of wall clock.
struct FactorBudget {
  std::uint64_t ops = 20'000'000;
};

// Factoring ran out of budget. Carries everything found so far; the caller
// reports an unfactored cofactor instead of a wrong answer.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::vector<PrimePower> factored, std::vector<Natural> unfactored);

  const std::vector<PrimePower>& factored() const { return factored_; }
  const std::vector<Natural>& unfactored() const { return unfactored_; }

 private:
  std::vector<PrimePower> factored_;
  std::vector<Natural> unfactored_;
};

// Complete factorization of n >= 1. Trial division by a fixed small-prime
// table, then Brent-cycle rho on remaining cofactors, recursing until every
// cofactor passes is_prime. n = 0 is rejected.
Factorization factorize(const Natural& n, FactorBudget budget = {});

// Euler's totient from a factorization: product of p^(e-1) * (p-1).
// The empty factorization (n = 1) gives 1.
Natural euler_phi(const Factorization& f);

// --------------------------------------------------------------- spf table

// Smallest-prime-factor table for 2..limit, built by a linear sieve.
// Memory is 4 bytes per entry, so limit is capped below 2^32; bigger
// inputs go through factorize.
class SpfTable {
 public:
  explicit SpfTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  std::uint32_t operator[](std::uint64_t n) const { return spf_[n]; }

  // primes <= limit, ascending (byproduct of the linear sieve)
  const std::vector<std::uint32_t>& primes() const { return primes_; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

// ------------------------------------------------------------ u64 helpers

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

}  // namespace giuga
