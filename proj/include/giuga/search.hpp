// search.hpp - two engines for n' = a*n + 1: an exhaustive derivative sieve
// over [2, limit], and branch-and-bound enumeration of prime tuples with the
// last factor in closed form.
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "giuga/numtheory.hpp"

namespace giuga {

struct Hit {
  Natural n;
  Natural index;  // the a with n' = a*n + 1
  Factorization factorization;

  bool operator==(const Hit&) const = default;
};

struct SearchReport {
  std::vector<Hit> hits;  // deduplicated, ascending by n
  std::uint64_t nodes_explored = 0;
  std::uint64_t nodes_pruned = 0;
  bool complete = true;  // false when cancelled or truncated by a bound
  std::chrono::duration<double> elapsed{};
};

struct SieveConfig {
  std::uint64_t limit = 0;
  std::uint64_t segment_size = 1u << 20;
  std::optional<Natural> index_filter;  // absent = any a >= 1
  unsigned worker_count = 1;
  const std::atomic<bool>* cancel = nullptr;
  std::function<void(const Hit&)> on_hit;  // streaming, called as found
};

struct TupleSearchConfig {
  unsigned max_factors = 6;  // k ranges over [3, max_factors]; ceiling 12
  Natural index = 1;         // a >= 1
  // Cap on enumerated prefix primes; 0 = no cap beyond the per-depth
  // deficit bound. A truncating cap flags the report incomplete.
  std::uint64_t prefix_prime_bound = 10'000'000;
  unsigned worker_count = 1;
  std::string checkpoint_path;  // empty = no checkpointing
  const std::atomic<bool>* cancel = nullptr;
  std::function<void(const Hit&)> on_hit;
};

// Derivatives for every n in [2, limit] by segmented bulk factorization,
// O(segment_size) memory. Emits each composite n with n | n' - 1 and
// quotient a >= 1 (matching index_filter when set). Hit set, counters and
// ordering are independent of segment_size and worker_count.
SearchReport sieve_search(const SieveConfig& cfg);

// Streams (n, n') over [2, limit] in ascending order through fn - the sieve
// engine's core; also the substrate for the exhaustive property sweeps.
void for_each_derivative(std::uint64_t limit, std::uint64_t segment_size,
                         const std::function<void(std::uint64_t n, std::uint64_t d)>& fn);

// Closed-form last factor: with P the product of the prefix and
// s = sum of P/p_i, the only possible completion is q = (P-1)/(a*P - s).
// Returns q when a*P - s > 0, the division is exact, q is prime and exceeds
// the prefix; the completed tuple then has index exactly a (re-verified
// before returning).
std::optional<Natural> last_prime_candidate(const std::vector<Natural>& prefix,
                                            const Natural& index);

// Depth-first enumeration of strictly increasing prime prefixes for each
// factor count k in [3, max_factors], closing viable prefixes with
// last_prime_candidate. Pruning is exact-rational, never floating point:
//   (a) a prefix dies when the remaining factors cannot lift the reciprocal
//       sum above a - equivalently the next prime would need to be at least
//       (k-j)/deficit;
//   (b) overshoot: sum of 1/p_i >= a + 1;
//   (c) the prefix_prime_bound cap.
// Every emitted hit is re-verified against the per-prime definition.
SearchReport tuple_search(const TupleSearchConfig& cfg);

// Least k whose first-k-primes reciprocal sum exceeds a: a necessary lower
// bound on the prime count of any solution with index a (sum of 1/p must
// exceed a). odd_primes_only restricts the pool to odd primes.
unsigned min_prime_count(const Natural& index, bool odd_primes_only = false);

}  // namespace giuga
