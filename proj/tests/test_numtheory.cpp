#include <doctest.h>

#include "giuga/numtheory.hpp"

using namespace giuga;

TEST_CASE("parse_natural accepts digit strings of any length") {
  CHECK(parse_natural("0") == 0);
  CHECK(parse_natural("30") == 30);
  CHECK(parse_natural("002") == 2);
  Natural big = parse_natural(
      "420001794970774706203871150967065663240419575375163060922876441614255721"
      "1582098432545190323474818");
  CHECK(mpz_sizeinbase(big.get_mpz_t(), 10) == 97);
}

TEST_CASE("parse_natural rejects everything that is not a digit string") {
  CHECK_THROWS_AS(parse_natural(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_natural("-5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_natural("+5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_natural("3.14"), std::invalid_argument);
  CHECK_THROWS_AS(parse_natural("12a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_natural(" 12"), std::invalid_argument);
}

TEST_CASE("to_decimal round-trips") {
  CHECK(to_decimal(parse_natural("2214408306")) == "2214408306");
  CHECK(to_decimal(Natural(0)) == "0");
}

TEST_CASE("make_rational canonicalizes and rejects zero denominators") {
  CHECK(make_rational(2, 4) == make_rational(1, 2));
  CHECK(make_rational(2, 4).get_den() == 2);
  CHECK(make_rational(-3, 6).get_num() == -1);
  CHECK_THROWS_AS(make_rational(1, 0), std::invalid_argument);
}

TEST_CASE("Factorization validates its invariants") {
  CHECK_THROWS_AS(Factorization({{Natural(3), 1}, {Natural(2), 1}}),
                  std::invalid_argument);  // not increasing
  CHECK_THROWS_AS(Factorization({{Natural(2), 1}, {Natural(2), 1}}),
                  std::invalid_argument);  // duplicate prime
  CHECK_THROWS_AS(Factorization({{Natural(2), 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Factorization({{Natural(1), 1}}), std::invalid_argument);
}

TEST_CASE("Factorization accessors on 12 = 2^2 * 3") {
  Factorization f({{Natural(2), 2}, {Natural(3), 1}});
  CHECK(f.value() == 12);
  CHECK(f.radical() == 6);
  CHECK(f.total_multiplicity() == 3);
  CHECK(f.distinct_count() == 2);
  CHECK_FALSE(f.squarefree());
  CHECK_FALSE(f.empty());
}

TEST_CASE("the empty factorization is 1") {
  Factorization one;
  CHECK(one.value() == 1);
  CHECK(one.radical() == 1);
  CHECK(one.total_multiplicity() == 0);
  CHECK(one.squarefree());
  CHECK(one.empty());
}

TEST_CASE("is_prime_u64 agrees with the classics") {
  CHECK_FALSE(is_prime_u64(0));
  CHECK_FALSE(is_prime_u64(1));
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(3));
  CHECK_FALSE(is_prime_u64(4));
  CHECK(is_prime_u64(1381));
  CHECK(is_prime_u64(47057));
  CHECK(is_prime_u64(775807));
  CHECK(is_prime_u64(1456230512169437ULL));
  CHECK_FALSE(is_prime_u64(561));         // Carmichael
  CHECK_FALSE(is_prime_u64(3215031751ULL));  // strong pseudoprime to 2,3,5,7
  CHECK(is_prime_u64((1ULL << 61) - 1));  // Mersenne
  CHECK_FALSE(is_prime_u64((1ULL << 61) + 1));
}

TEST_CASE("is_prime_u64 matches trial division over a dense range") {
  auto naive = [](std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  };
  for (std::uint64_t n = 0; n < 2000; ++n) CHECK(is_prime_u64(n) == naive(n));
}

TEST_CASE("is_prime handles the catalog primes beyond 64 bits") {
  Natural a = parse_natural("58254480569119734123541298976556403");
  Natural b = parse_natural("8491659218261819498490029296021");
  CHECK(is_prime(a));
  CHECK(is_prime(b));
  CHECK_FALSE(is_prime(a * b));
  CHECK_FALSE(is_prime(a * 3));
  CHECK(is_prime(Natural(47057)));
  CHECK_FALSE(is_prime(Natural(1)));
}

TEST_CASE("primality_is_deterministic tracks the 64-bit boundary") {
  CHECK(primality_is_deterministic(Natural(2)));
  Natural edge(1);
  edge <<= 64;
  CHECK(primality_is_deterministic(edge - 1));
  CHECK_FALSE(primality_is_deterministic(edge));
}

TEST_CASE("powmod and mulmod near the word boundary") {
  CHECK(powmod_u64(2, 10, 1000) == 24);
  CHECK(powmod_u64(7, 0, 13) == 1);
  const std::uint64_t m = 0xFFFFFFFFFFFFFFC5ULL;  // largest prime below 2^64
  CHECK(mulmod_u64(m - 1, m - 1, m) == 1);
  CHECK(powmod_u64(m - 1, 2, m) == 1);
  CHECK(powmod_u64(2, m - 1, m) == 1);  // Fermat
}

TEST_CASE("factorize reproduces known factorizations") {
  CHECK(factorize(1).empty());
  CHECK(factorize(2) == Factorization({{Natural(2), 1}}));
  CHECK(factorize(12) == Factorization({{Natural(2), 2}, {Natural(3), 1}}));
  CHECK(factorize(30) ==
        Factorization({{Natural(2), 1}, {Natural(3), 1}, {Natural(5), 1}}));
  CHECK(factorize(2214408306) ==
        Factorization({{Natural(2), 1},
                       {Natural(3), 1},
                       {Natural(11), 1},
                       {Natural(23), 1},
                       {Natural(31), 1},
                       {Natural(47057), 1}}));
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize handles perfect powers and large semiprimes") {
  CHECK(factorize(1024) == Factorization({{Natural(2), 10}}));
  Natural p6;
  mpz_ui_pow_ui(p6.get_mpz_t(), 1000003, 3);
  CHECK(factorize(p6) == Factorization({{Natural(1000003), 3}}));
  // two medium primes, beyond the trial table, cracked by rho
  Natural semi = Natural(1000003) * Natural(1000033);
  Factorization f = factorize(semi);
  CHECK(f == Factorization({{Natural(1000003), 1}, {Natural(1000033), 1}}));
}

TEST_CASE("factorize agrees with its own product over a range") {
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    Factorization f = factorize(n);
    CHECK(f.value() == n);
    for (const auto& [p, e] : f.factors()) CHECK(is_prime(p));
  }
}

TEST_CASE("an exhausted budget carries partial results") {
  Natural a = parse_natural("58254480569119734123541298976556403");
  Natural b = parse_natural("8491659218261819498490029296021");
  Natural n = a * b * 4;
  try {
    factorize(n, FactorBudget{1000});
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    Natural rebuilt = 1;
    for (const auto& [p, exp] : e.factored()) {
      Natural pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), exp);
      rebuilt *= pe;
    }
    for (const Natural& c : e.unfactored()) rebuilt *= c;
    CHECK(rebuilt == n);  // nothing lost, nothing invented
    CHECK(e.factored().size() == 1);  // the 2^2 from trial division
    CHECK(e.factored()[0].prime == 2);
    CHECK(e.unfactored().size() == 1);
    CHECK(e.unfactored()[0] == a * b);
  }
}

TEST_CASE("euler_phi from factorizations") {
  CHECK(euler_phi(factorize(1)) == 1);
  CHECK(euler_phi(factorize(2)) == 1);
  CHECK(euler_phi(factorize(9)) == 6);
  CHECK(euler_phi(factorize(30)) == 8);
  CHECK(euler_phi(factorize(66198)) == 18560);
}

TEST_CASE("SpfTable gives smallest prime factors and the prime list") {
  SpfTable spf(1000);
  CHECK(spf[2] == 2);
  CHECK(spf[45] == 3);
  CHECK(spf[97] == 97);
  CHECK(spf[999] == 3);
  CHECK(spf.primes().front() == 2);
  CHECK(spf.primes().back() == 997);
  CHECK(spf.primes().size() == 168);  // pi(1000)
  CHECK_THROWS_AS(SpfTable(1), std::invalid_argument);
}

TEST_CASE("SpfTable prime count at one million") {
  SpfTable spf(1'000'000);
  CHECK(spf.primes().size() == 78498);  // pi(10^6)
}
