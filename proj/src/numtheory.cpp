#include "giuga/numtheory.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>

namespace giuga {

Natural parse_natural(std::string_view text) {
  if (text.empty())
    throw std::invalid_argument("empty string is not a natural number");
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("not a natural number: '" + std::string(text) + "'");
  return Natural(std::string(text), 10);
}

std::string to_decimal(const Natural& n) { return n.get_str(); }

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Factorization::Factorization(std::vector<PrimePower> factors)
    : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].exponent == 0)
      throw std::invalid_argument("zero exponent in factorization");
    if (factors_[i].prime < 2)
      throw std::invalid_argument("factorization entry below 2");
    if (i > 0 && factors_[i - 1].prime >= factors_[i].prime)
      throw std::invalid_argument("factorization not strictly increasing");
  }
}

Natural Factorization::value() const {
  Natural v = 1;
  Natural pe;
  for (const auto& [p, e] : factors_) {
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    v *= pe;
  }
  return v;
}

Natural Factorization::radical() const {
  Natural v = 1;
  for (const auto& [p, e] : factors_) v *= p;
  return v;
}

unsigned Factorization::total_multiplicity() const {
  unsigned total = 0;
  for (const auto& [p, e] : factors_) total += e;
  return total;
}

bool Factorization::squarefree() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

// ---------------------------------------------------------------- primality

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = m > 1 ? 1 : 0;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

namespace {

// Strong-probable-prime test to base a; n odd, n > 2, n - 1 = d * 2^s.
bool sprp_u64(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  std::uint64_t x = powmod_u64(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// First 12 primes: a deterministic witness set for all n < 3.3e24 > 2^64.
constexpr std::array<std::uint64_t, 12> kWitnesses = {2,  3,  5,  7,  11, 13,
                                                      17, 19, 23, 29, 31, 37};

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : kWitnesses) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  int s = 0;
  std::uint64_t d = n - 1;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kWitnesses)
    if (!sprp_u64(n, a, d, s)) return false;
  return true;
}

bool primality_is_deterministic(const Natural& n) {
  return n >= 0 && n.fits_ulong_p();  // 64-bit platform: ulong is 64 bits
}

namespace {

bool sprp_mpz(const mpz_class& n, const mpz_class& a, const mpz_class& d, unsigned long s) {
  mpz_class x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  mpz_class n1 = n - 1;
  if (x == 1 || x == n1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n1) return true;
  }
  return false;
}

// Random strong-probable-prime rounds above 2^64, seeded from n itself so
// a given input always sees the same bases.
constexpr int kProbableRounds = 64;

}  // namespace

bool is_prime(const Natural& n) {
  if (n < 2) return false;
  if (primality_is_deterministic(n)) return is_prime_u64(n.get_ui());

  // Quick rejection by the witness primes before the expensive rounds.
  for (std::uint64_t p : kWitnesses)
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;

  mpz_class d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  for (std::uint64_t a : kWitnesses)
    if (!sprp_mpz(n, a, d, s)) return false;

  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(0x9e3779b97f4a7c15ULL ^ mpz_fdiv_ui(n.get_mpz_t(), 0xfffffffbUL));
  mpz_class span = n - 4;
  for (int round = 0; round < kProbableRounds; ++round) {
    mpz_class a = rng.get_z_range(span) + 2;  // uniform in [2, n-2]
    if (!sprp_mpz(n, a, d, s)) return false;
  }
  return true;
}

// ------------------------------------------------------------- factorization

BudgetExceeded::BudgetExceeded(std::vector<PrimePower> factored,
                               std::vector<Natural> unfactored)
    : std::runtime_error("factorization budget exceeded"),
      factored_(std::move(factored)),
      unfactored_(std::move(unfactored)) {}

namespace {

// Fixed small-prime table for the trial-division pass.
const std::vector<std::uint32_t>& trial_primes() {
  static const std::vector<std::uint32_t> table = [] {
    SpfTable spf(10'000);
    return spf.primes();
  }();
  return table;
}

struct BudgetCounter {
  std::uint64_t remaining;
  bool spend(std::uint64_t ops) {
    if (ops > remaining) {
      remaining = 0;
      return false;
    }
    remaining -= ops;
    return true;
  }
};

std::uint64_t splitmix(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t addmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) + b) % m);
}

// Brent-cycle rho; returns a nontrivial factor of composite odd n, or 0 when
// the budget runs out. Deterministic for a given n.
std::uint64_t rho_brent_u64(std::uint64_t n, BudgetCounter& budget) {
  std::uint64_t seed = n ^ 0xD6E8FEB86659FD93ULL;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uint64_t y = splitmix(seed) % (n - 3) + 2;
    std::uint64_t c = splitmix(seed) % (n - 1) + 1;
    std::uint64_t g = 1, q = 1, x = 0, ys = 0;
    const std::uint64_t m = 128;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = addmod_u64(mulmod_u64(y, y, n), c, n);
      if (!budget.spend(r)) return 0;
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        std::uint64_t chunk = std::min(m, r - k);
        for (std::uint64_t i = 0; i < chunk; ++i) {
          y = addmod_u64(mulmod_u64(y, y, n), c, n);
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        if (!budget.spend(chunk)) return 0;
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = addmod_u64(mulmod_u64(ys, ys, n), c, n);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
        if (!budget.spend(1)) return 0;
      }
    }
    if (g != n) return g;
  }
  return 0;
}

std::uint64_t rho_u64(std::uint64_t n, BudgetCounter& budget) {
  if (n % 2 == 0) return 2;
  return rho_brent_u64(n, budget);
}

// Brent-cycle rho on mpz, gcds batched every 128 steps.
Natural rho_mpz(const Natural& n, BudgetCounter& budget) {
  std::uint64_t seed = mpz_fdiv_ui(n.get_mpz_t(), 0xffffffffffffffc5ULL) ^ 0xA24BAED4963EE407ULL;
  mpz_class x, y, ys, q, g, diff;
  for (int attempt = 0; attempt < 64; ++attempt) {
    y = splitmix(seed) % 1000003 + 2;
    unsigned long c = splitmix(seed) % 1000003 + 1;
    g = 1;
    q = 1;
    const std::uint64_t m = 128;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) {
        y = (y * y + c) % n;
      }
      if (!budget.spend(r)) return 0;
      for (std::uint64_t k = 0; k < r && g == 1; k += m) {
        ys = y;
        std::uint64_t chunk = std::min(m, r - k);
        for (std::uint64_t i = 0; i < chunk; ++i) {
          y = (y * y + c) % n;
          diff = x - y;
          q = (q * abs(diff)) % n;
        }
        if (!budget.spend(chunk)) return 0;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        if (!budget.spend(1)) return 0;
      }
    }
    if (g != n) return g;
  }
  return 0;
}

}  // namespace

Factorization factorize(const Natural& n, FactorBudget budget) {
  if (n < 1) throw std::invalid_argument("factorize requires n >= 1");
  if (n == 1) return Factorization{};

  BudgetCounter counter{budget.ops};
  std::vector<PrimePower> found;
  Natural rest = n;

  // Trial division by the fixed small-prime table.
  for (std::uint32_t p : trial_primes()) {
    if (rest == 1) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      unsigned e = 0;
      do {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
      found.push_back({Natural(p), e});
    }
    counter.spend(1);
  }

  // Rho on what's left, recursing through a work stack.
  std::vector<Natural> pending;
  if (rest > 1) pending.push_back(rest);
  std::vector<Natural> unfactored;

  auto give_up = [&](std::vector<Natural> leftovers) -> void {
    std::sort(found.begin(), found.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
    std::vector<PrimePower> merged;
    for (auto& pp : found) {
      if (!merged.empty() && merged.back().prime == pp.prime)
        merged.back().exponent += pp.exponent;
      else
        merged.push_back(std::move(pp));
    }
    throw BudgetExceeded(std::move(merged), std::move(leftovers));
  };

  while (!pending.empty()) {
    Natural c = pending.back();
    pending.pop_back();
    if (c == 1) continue;
    if (is_prime(c)) {
      found.push_back({c, 1});
      continue;
    }
    // c = b^k collapses to factoring b (rho converges poorly on prime powers).
    if (mpz_perfect_power_p(c.get_mpz_t())) {
      for (unsigned long k = 2; k <= mpz_sizeinbase(c.get_mpz_t(), 2); ++k) {
        Natural root;
        if (mpz_root(root.get_mpz_t(), c.get_mpz_t(), k)) {
          try {
            Factorization sub = factorize(root, FactorBudget{counter.remaining});
            for (const auto& [p, e] : sub.factors())
              found.push_back({p, static_cast<unsigned>(e * k)});
          } catch (const BudgetExceeded& inner) {
            counter.remaining = 0;
            for (const auto& [p, e] : inner.factored())
              found.push_back({p, static_cast<unsigned>(e * k)});
            std::vector<Natural> leftovers;
            for (const Natural& left : inner.unfactored()) {
              Natural lifted;  // leftover of the k-th root covers leftover^k of c
              mpz_pow_ui(lifted.get_mpz_t(), left.get_mpz_t(), k);
              leftovers.push_back(lifted);
            }
            for (const Natural& left : pending) leftovers.push_back(left);
            give_up(std::move(leftovers));
          }
          c = 1;
          break;
        }
      }
      if (c == 1) continue;
    }
    Natural divisor;
    if (c.fits_ulong_p()) {
      std::uint64_t d64 = rho_u64(c.get_ui(), counter);
      divisor = Natural(static_cast<unsigned long>(d64));
    } else {
      divisor = rho_mpz(c, counter);
    }
    if (divisor == 0) {
      unfactored.push_back(c);
      for (const Natural& left : pending) unfactored.push_back(left);
      give_up(std::move(unfactored));
    }
    pending.push_back(divisor);
    pending.push_back(c / divisor);
  }

  // Merge duplicate primes from separate rho splits.
  std::sort(found.begin(), found.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  std::vector<PrimePower> merged;
  for (auto& pp : found) {
    if (!merged.empty() && merged.back().prime == pp.prime)
      merged.back().exponent += pp.exponent;
    else
      merged.push_back(std::move(pp));
  }
  return Factorization(std::move(merged));
}

Natural euler_phi(const Factorization& f) {
  Natural result = 1;
  Natural pe;
  for (const auto& [p, e] : f.factors()) {
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e - 1);
    result *= pe * (p - 1);
  }
  return result;
}

// --------------------------------------------------------------- spf table

SpfTable::SpfTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 2) throw std::invalid_argument("spf table needs limit >= 2");
  if (limit >= (1ULL << 32))
    throw std::invalid_argument("spf table capped below 2^32 entries (4 bytes each); "
                                "factor larger values through factorize");
  try {
    spf_.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw std::runtime_error("spf table allocation failed for " +
                             std::to_string((limit + 1) * sizeof(std::uint32_t)) +
                             " bytes");
  }
  // Linear sieve: each composite is struck once, by its smallest prime.
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes_) {
      if (p > spf_[i] || i * p > limit) break;
      spf_[i * p] = p;
    }
  }
}

}  // namespace giuga
