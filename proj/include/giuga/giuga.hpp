// giuga.hpp - the four Giuga characterizations, cross-checked.
//
//   definition:  p divides n/p - 1 for every prime p | n  (n composite)
//   index:       sum of 1/p minus product of 1/p over p | n is an integer >= 1
//   power_sum:   sum_{j=1}^{n-1} j^phi(n) == -1 (mod n)
//   bernoulli:   n * B_phi(n) == -1 (mod n), evaluated through the
//                von Staudt-Clausen reduction, never through B itself
//
// The four agree on every composite input (the index form is guarded to
// squarefree n, where its sum-minus-product reading is actually equivalent;
// see check_index). Divergence between computed verdicts is a bug, reported
// as CharacterizationDisagreement rather than papered over.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "giuga/numtheory.hpp"

namespace giuga {

enum class Method { definition, index, power_sum, bernoulli };

const char* method_name(Method m);

struct PrimeResidue {
  Natural prime;
  Natural residue;  // (n/prime - 1) mod prime; zero for every prime iff Giuga

  bool operator==(const PrimeResidue&) const = default;
};

struct GiugaCertificate {
  Natural n;
  bool composite = false;
  bool squarefree = false;
  bool is_giuga = false;
  std::vector<PrimeResidue> per_prime;
  std::optional<Natural> index;  // the a with n' = a*n + 1, present iff is_giuga
  std::vector<Method> methods_agreeing;
};

struct BernoulliValue {
  unsigned m = 0;
  Rational value;
};

// Two characterization verdicts differ - an implementation bug by
// construction, since their equivalence is a theorem.
class CharacterizationDisagreement : public std::logic_error {
 public:
  explicit CharacterizationDisagreement(const std::string& what);
};

// Characterization by definition: per-prime residues (n/p - 1) mod p.
GiugaCertificate check_definition(const Natural& n, FactorBudget budget = {});

// Characterization by index: the exact rational sum(1/p) - prod(1/p) when it
// is an integer >= 1. Non-squarefree n returns absent: with a square factor
// the sum-minus-product form stops tracking n' = a*n + 1 (prod 1/p is no
// longer 1/n) and admits false positives such as 60, so the verdict is
// pinned to the squarefree domain where the equivalence is proved.
std::optional<Natural> check_index(const Natural& n, FactorBudget budget = {});

// Characterization by power sum, cost Theta(n log phi(n)); absent when
// n > limit. Meaningful for composite n only - every prime satisfies the
// congruence via Fermat, so callers gate on compositeness.
std::optional<bool> check_power_sum(const Natural& n, std::uint64_t limit);

// Exact rational B_m for even m <= 1000, by the binomial recurrence.
// Every computed value has its denominator audited against the
// von Staudt-Clausen product before it is returned.
BernoulliValue bernoulli_exact(unsigned m);

// Characterization by Bernoulli number, via the von Staudt-Clausen
// reduction n*B_m == -sum{p | n, (p-1) | m} n/p (mod n) with m = phi(n).
// B_phi(n) itself is never computed (phi(66198) = 18560 already puts it far
// out of reach). Non-squarefree n returns false immediately.
bool check_bernoulli(const Natural& n, FactorBudget budget = {});

// True iff "n' == 1 (mod n) implies n squarefree" holds for this n.
// Provably always true; exists to be falsified by sweeps.
bool check_squarefree_lemma(const Natural& n, FactorBudget budget = {});

// Runs definition, index and bernoulli (and power_sum for composite
// n <= power_sum_limit) on one shared factorization, raises
// CharacterizationDisagreement if any two verdicts differ, and reports
// which methods agreed.
GiugaCertificate check_all(const Natural& n, std::uint64_t power_sum_limit,
                           FactorBudget budget = {});

}  // namespace giuga
