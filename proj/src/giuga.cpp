#include "giuga/giuga.hpp"

#include <mutex>
#include <string>

#include "giuga/derivative.hpp"

namespace giuga {

const char* method_name(Method m) {
  switch (m) {
    case Method::definition: return "definition";
    case Method::index: return "index";
    case Method::power_sum: return "power_sum";
    case Method::bernoulli: return "bernoulli";
  }
  return "unknown";
}

CharacterizationDisagreement::CharacterizationDisagreement(const std::string& what)
    : std::logic_error(what) {}

namespace {

// The shared-factorization cores. Each public check_* factorizes once and
// delegates here; check_all reuses one factorization across all of them.

GiugaCertificate definition_core(const Natural& n, const Factorization& f) {
  GiugaCertificate cert;
  cert.n = n;
  cert.composite = f.total_multiplicity() >= 2;
  cert.squarefree = f.squarefree();

  bool all_zero = true;
  Natural quotient, residue;
  for (const auto& [p, e] : f.factors()) {
    quotient = n / p - 1;
    mpz_mod(residue.get_mpz_t(), quotient.get_mpz_t(), p.get_mpz_t());
    if (residue != 0) all_zero = false;
    cert.per_prime.push_back({p, residue});
  }
  cert.is_giuga = cert.composite && all_zero;

  if (cert.is_giuga) {
    // p | n/p - 1 for every p forces n' == 1 (mod n) and n' > n, so the
    // division is exact and the index is at least 1.
    Natural d = derive_factored(f, n);
    cert.index = (d - 1) / n;
  }
  return cert;
}

std::optional<Natural> index_core(const Factorization& f) {
  if (!f.squarefree()) return std::nullopt;
  Rational sum = 0;
  Rational product = 1;
  for (const auto& [p, e] : f.factors()) {
    Rational inv = make_rational(1, p);
    sum += inv;
    product *= inv;
  }
  Rational gap = sum - product;
  if (gap.get_den() != 1 || gap.get_num() < 1) return std::nullopt;
  return Natural(gap.get_num());
}

bool power_sum_core(std::uint64_t n, std::uint64_t phi) {
  std::uint64_t acc = 0;
  for (std::uint64_t j = 1; j < n; ++j) {
    acc = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(acc) + powmod_u64(j, phi, n)) % n);
  }
  return acc == n - 1;
}

bool bernoulli_core(const Natural& n, const Factorization& f) {
  if (f.total_multiplicity() < 2) return false;  // the congruence also holds
                                                 // for every prime, so gate
                                                 // the verdict on compositeness
  if (!f.squarefree()) return false;
  Natural phi = euler_phi(f);
  Natural sum = 0, pm1;
  for (const auto& [p, e] : f.factors()) {
    pm1 = p - 1;
    if (mpz_divisible_p(phi.get_mpz_t(), pm1.get_mpz_t())) sum += n / p;
  }
  // n*B_phi(n) == -sum (mod n) by von Staudt-Clausen, so == -1 iff sum == 1.
  return sum % n == 1;
}

void audit_vsc_denominator(unsigned m, const Rational& b) {
  static const SpfTable table(1002);
  Natural expected = 1;
  for (std::uint32_t p : table.primes()) {
    if (p > m + 1) break;
    if (m % (p - 1) == 0) expected *= p;
  }
  if (b.get_den() != expected)
    throw std::logic_error("Bernoulli denominator audit failed at m = " +
                           std::to_string(m) + ": got " + b.get_den().get_str() +
                           ", von Staudt-Clausen demands " + expected.get_str());
}

}  // namespace

GiugaCertificate check_definition(const Natural& n, FactorBudget budget) {
  GiugaCertificate cert;
  cert.n = n;
  if (n < 2) {
    cert.squarefree = (n == 1);
    return cert;
  }
  return definition_core(n, factorize(n, budget));
}

std::optional<Natural> check_index(const Natural& n, FactorBudget budget) {
  if (n < 2) return std::nullopt;
  return index_core(factorize(n, budget));
}

std::optional<bool> check_power_sum(const Natural& n, std::uint64_t limit) {
  if (n < 2) return std::nullopt;
  if (!n.fits_ulong_p() || n.get_ui() > limit) return std::nullopt;
  std::uint64_t nn = n.get_ui();
  Natural phi = euler_phi(factorize(n));
  return power_sum_core(nn, phi.get_ui());
}

BernoulliValue bernoulli_exact(unsigned m) {
  if (m % 2 != 0)
    throw std::invalid_argument("odd Bernoulli numbers beyond B_1 vanish; ask for even m");
  if (m > 1000) throw std::invalid_argument("Bernoulli recurrence capped at m = 1000");

  static std::mutex cache_mutex;
  static std::vector<Rational> cache{Rational(1)};  // cache[k] holds B_{2k}

  std::lock_guard<std::mutex> lock(cache_mutex);
  const unsigned k = m / 2;
  while (cache.size() <= k) {
    // sum_{j=0}^{mm} C(mm+1, j) B_j = 0, odd j > 1 dropped, B_1 = -1/2 split out.
    const unsigned mm = 2 * static_cast<unsigned>(cache.size());
    Rational acc = Rational(mm + 1) * make_rational(-1, 2);
    Natural binom;
    for (unsigned j = 0; j < mm; j += 2) {
      mpz_bin_uiui(binom.get_mpz_t(), mm + 1, j);
      acc += Rational(binom) * cache[j / 2];
    }
    Rational b = -acc / Rational(mm + 1);
    audit_vsc_denominator(mm, b);
    cache.push_back(std::move(b));
  }
  return {m, cache[k]};
}

bool check_bernoulli(const Natural& n, FactorBudget budget) {
  if (n < 2) return false;
  return bernoulli_core(n, factorize(n, budget));
}

bool check_squarefree_lemma(const Natural& n, FactorBudget budget) {
  if (n < 2) return true;  // vacuous: 0' = 1' = 0
  Factorization f = factorize(n, budget);
  Natural d = derive_factored(f, n);
  Natural shifted = d - 1;
  if (!mpz_divisible_p(shifted.get_mpz_t(), n.get_mpz_t())) return true;
  return f.squarefree();
}

GiugaCertificate check_all(const Natural& n, std::uint64_t power_sum_limit,
                           FactorBudget budget) {
  GiugaCertificate cert;
  cert.n = n;
  if (n < 2) {
    cert.squarefree = (n == 1);
    return cert;
  }

  Factorization f = factorize(n, budget);
  cert = definition_core(n, f);
  const bool verdict = cert.is_giuga;
  cert.methods_agreeing.push_back(Method::definition);

  if (f.squarefree()) {
    std::optional<Natural> idx = index_core(f);
    if (idx.has_value() != verdict)
      throw CharacterizationDisagreement(
          "definition and index verdicts differ at n = " + to_decimal(n));
    if (idx && cert.index && *idx != *cert.index)
      throw CharacterizationDisagreement(
          "index value mismatch at n = " + to_decimal(n) + ": " +
          to_decimal(*idx) + " vs " + to_decimal(*cert.index));
    cert.methods_agreeing.push_back(Method::index);
  }

  if (cert.composite && n.fits_ulong_p() && n.get_ui() <= power_sum_limit) {
    Natural phi = euler_phi(f);
    if (power_sum_core(n.get_ui(), phi.get_ui()) != verdict)
      throw CharacterizationDisagreement(
          "definition and power-sum verdicts differ at n = " + to_decimal(n));
    cert.methods_agreeing.push_back(Method::power_sum);
  }

  if (bernoulli_core(n, f) != verdict)
    throw CharacterizationDisagreement(
        "definition and Bernoulli verdicts differ at n = " + to_decimal(n));
  cert.methods_agreeing.push_back(Method::bernoulli);

  return cert;
}

}  // namespace giuga
