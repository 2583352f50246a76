#include "giuga/search.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace giuga {

namespace {

// Plain Eratosthenes; cheap enough to rebuild on demand.
std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

// Grow-by-doubling prime list; each search worker owns one.
class PrimeSupply {
 public:
  const std::vector<std::uint64_t>& covering(std::uint64_t bound) {
    if (bound > limit_) {
      std::uint64_t next = std::max<std::uint64_t>(limit_ ? limit_ * 2 : 1024, bound);
      primes_ = small_primes(next);
      limit_ = next;
    }
    return primes_;
  }
  std::uint64_t limit() const { return limit_; }

 private:
  std::vector<std::uint64_t> primes_;
  std::uint64_t limit_ = 0;
};

// Smallest prime strictly above c (Bertrand guarantees the doubling stops).
std::uint64_t next_prime_above(PrimeSupply& supply, std::uint64_t c) {
  const std::vector<std::uint64_t>* primes =
      &supply.covering(std::max<std::uint64_t>(c + 2, 1024));
  auto it = std::upper_bound(primes->begin(), primes->end(), c);
  while (it == primes->end()) {
    primes = &supply.covering(supply.limit() * 2);
    it = std::upper_bound(primes->begin(), primes->end(), c);
  }
  return *it;
}

std::uint64_t nth_prime(PrimeSupply& supply, std::size_t i) {
  const std::vector<std::uint64_t>* primes = &supply.covering(1024);
  while (primes->size() <= i) primes = &supply.covering(supply.limit() * 2);
  return (*primes)[i];
}

// Derivatives for one segment [lo, hi]: divide every n by the base primes,
// crediting m/p once per exponent unit; whatever remains is a single prime
// above sqrt(hi) and credits m/rem once.
void segment_derivatives(std::uint64_t lo, std::uint64_t hi,
                         const std::vector<std::uint64_t>& base,
                         std::vector<std::uint64_t>& rem,
                         std::vector<std::uint64_t>& acc) {
  const std::size_t size = static_cast<std::size_t>(hi - lo + 1);
  rem.resize(size);
  acc.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    rem[i] = lo + i;
    acc[i] = 0;
  }
  for (std::uint64_t p : base) {
    if (p * p > hi) break;
    for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
      std::size_t i = static_cast<std::size_t>(m - lo);
      while (rem[i] % p == 0) {
        rem[i] /= p;
        acc[i] += m / p;
      }
    }
  }
  for (std::size_t i = 0; i < size; ++i)
    if (rem[i] > 1) acc[i] += (lo + i) / rem[i];
}

constexpr std::uint64_t kSieveLimitCap = 1ULL << 52;  // keeps n' inside uint64

}  // namespace

void for_each_derivative(
    std::uint64_t limit, std::uint64_t segment_size,
    const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  if (limit < 2) return;
  if (limit > kSieveLimitCap)
    throw std::invalid_argument("derivative sieve limit capped at 2^52");
  if (segment_size == 0) segment_size = 1u << 20;

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
  const std::vector<std::uint64_t> base = small_primes(root);

  std::vector<std::uint64_t> rem, acc;
  for (std::uint64_t lo = 2; lo <= limit; lo += segment_size) {
    const std::uint64_t hi = std::min(lo + segment_size - 1, limit);
    segment_derivatives(lo, hi, base, rem, acc);
    for (std::uint64_t n = lo; n <= hi; ++n) fn(n, acc[n - lo]);
  }
}

SearchReport sieve_search(const SieveConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SearchReport report;
  if (cfg.limit < 2) {
    report.elapsed = std::chrono::steady_clock::now() - start;
    return report;
  }
  if (cfg.limit > kSieveLimitCap)
    throw std::invalid_argument("derivative sieve limit capped at 2^52");

  const std::uint64_t segment = cfg.segment_size ? cfg.segment_size : 1u << 20;
  const auto root =
      static_cast<std::uint64_t>(std::sqrt(static_cast<double>(cfg.limit))) + 2;
  const std::vector<std::uint64_t> base = small_primes(root);

  const std::uint64_t segments = (cfg.limit - 2) / segment + 1;
  std::vector<std::vector<Hit>> per_segment(segments);
  std::atomic<std::uint64_t> next_segment{0};
  std::atomic<std::uint64_t> explored{0};
  std::atomic<bool> stopped{false};

  auto worker = [&] {
    std::vector<std::uint64_t> rem, acc;
    for (;;) {
      if (cfg.cancel && cfg.cancel->load()) {
        stopped = true;
        return;
      }
      const std::uint64_t s = next_segment.fetch_add(1);
      if (s >= segments) return;
      const std::uint64_t lo = 2 + s * segment;
      const std::uint64_t hi = std::min(lo + segment - 1, cfg.limit);
      segment_derivatives(lo, hi, base, rem, acc);
      for (std::uint64_t n = lo; n <= hi; ++n) {
        const std::uint64_t d = acc[n - lo];
        if (d <= 1 || (d - 1) % n != 0) continue;
        Natural a((d - 1) / n);
        if (cfg.index_filter && a != *cfg.index_filter) continue;
        per_segment[s].push_back(Hit{Natural(n), std::move(a), factorize(n)});
      }
      explored.fetch_add(hi - lo + 1);
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.worker_count,
                                      static_cast<unsigned>(segments)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (std::vector<Hit>& hits : per_segment)
    for (Hit& h : hits) {
      if (cfg.on_hit) cfg.on_hit(h);
      report.hits.push_back(std::move(h));
    }
  report.nodes_explored = explored.load();
  report.complete = !stopped.load();
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

// ------------------------------------------------------------ tuple search

std::optional<Natural> last_prime_candidate(const std::vector<Natural>& prefix,
                                            const Natural& index) {
  if (prefix.empty()) return std::nullopt;
  if (index < 1) throw std::invalid_argument("index must be at least 1");
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] < 2) throw std::invalid_argument("prefix entries must be >= 2");
    if (i > 0 && prefix[i - 1] >= prefix[i])
      throw std::invalid_argument("prefix must be strictly increasing");
  }

  Natural product = 1;
  for (const Natural& p : prefix) product *= p;
  Natural s = 0;
  for (const Natural& p : prefix) s += product / p;

  // q must satisfy q * (index * product - s) = product - 1.
  Natural t = index * product - s;
  if (t <= 0) return std::nullopt;
  Natural numerator = product - 1;
  if (!mpz_divisible_p(numerator.get_mpz_t(), t.get_mpz_t())) return std::nullopt;
  Natural q = numerator / t;
  if (q <= prefix.back()) return std::nullopt;
  if (!is_prime(q)) return std::nullopt;

  // Re-verify with the whole tuple: sum of n/p over all k primes = a*n + 1.
  Natural n = product * q;
  Natural check = s * q + product;
  if (check != index * n + 1) return std::nullopt;
  return q;
}

namespace {

struct UnitKey {
  unsigned k;
  std::uint64_t p1, p2;

  bool operator<(const UnitKey& o) const {
    if (k != o.k) return k < o.k;
    if (p1 != o.p1) return p1 < o.p1;
    return p2 < o.p2;
  }
};

struct UnitResult {
  std::vector<Hit> hits;
  std::uint64_t explored = 0;
  std::uint64_t pruned = 0;
  bool truncated = false;
};

struct DfsState {
  unsigned k = 0;
  Natural index;
  std::uint64_t cap = 0;  // 0 = uncapped
  const std::atomic<bool>* cancel = nullptr;
  PrimeSupply* supply = nullptr;

  std::vector<Natural> prefix;
  Rational sum;
  UnitResult* out = nullptr;

  bool cancelled() const { return cancel && cancel->load(); }

  // Enumerates the next prime and recurses; prefix holds j >= 1 primes.
  void descend() {
    ++out->explored;
    const unsigned j = static_cast<unsigned>(prefix.size());
    if (j == k - 1) {
      if (std::optional<Natural> q = last_prime_candidate(prefix, index)) {
        std::vector<PrimePower> pps;
        for (const Natural& p : prefix) pps.push_back({p, 1});
        pps.push_back({*q, 1});
        Factorization f{std::move(pps)};
        Natural n = f.value();
        // Belt and braces: the per-prime divisibility property itself.
        Natural quotient, residue;
        for (const auto& [p, e] : f.factors()) {
          quotient = n / p - 1;
          mpz_mod(residue.get_mpz_t(), quotient.get_mpz_t(), p.get_mpz_t());
          if (residue != 0)
            throw std::logic_error("closed-form completion failed re-verification");
        }
        out->hits.push_back(Hit{std::move(n), index, std::move(f)});
      }
      return;
    }

    Rational deficit = Rational(index) - sum;
    if (deficit <= 0) {  // overshot: the remaining reciprocals only add more
      ++out->pruned;
      return;
    }
    // The k-j future reciprocals sum to less than (k-j)/c for the next
    // candidate c, so candidates need c * num(deficit) < (k-j) * den(deficit).
    const Natural bound_rhs = Natural(k - j) * deficit.get_den();
    const Natural bound_scale = deficit.get_num();

    std::uint64_t c = prefix.back().get_ui();
    for (;;) {
      c = next_prime_above(*supply, c);
      if (Natural(c) * bound_scale >= bound_rhs) {
        ++out->pruned;
        return;  // rule (a): no further prime can rescue the deficit
      }
      if (cap && c > cap) {
        out->truncated = true;  // rule (c): artificial cap, not a proof
        ++out->pruned;
        return;
      }
      if (cancelled()) return;
      prefix.push_back(Natural(c));
      Rational inv = make_rational(1, Natural(c));
      sum += inv;
      descend();
      sum -= inv;
      prefix.pop_back();
    }
  }
};

std::string unit_line_key(const UnitKey& u) {
  return std::to_string(u.k) + " " + std::to_string(u.p1) + " " +
         std::to_string(u.p2);
}

std::string config_line(const TupleSearchConfig& cfg) {
  return "config max_factors=" + std::to_string(cfg.max_factors) +
         " index=" + to_decimal(cfg.index) +
         " bound=" + std::to_string(cfg.prefix_prime_bound);
}

struct CheckpointData {
  std::set<std::string> done;
  std::vector<Hit> hits;
};

// Checkpoint file: one "unit <k> <p1> <p2> hits=..." line per finished work
// unit, hits encoded n:a:p*p*...; first two lines pin format and config.
CheckpointData read_checkpoint(const std::string& path,
                               const TupleSearchConfig& cfg) {
  CheckpointData data;
  std::ifstream in(path);
  if (!in) return data;  // nothing saved yet
  std::string line;
  if (!std::getline(in, line)) return data;  // empty file: treat as fresh
  if (line != "giuga-checkpoint v1")
    throw std::runtime_error(path + ": not a checkpoint file");
  if (!std::getline(in, line) || line != config_line(cfg))
    throw std::runtime_error(path + ": checkpoint belongs to a different search (" +
                             line + ")");
  while (std::getline(in, line)) {
    if (line.rfind("unit ", 0) != 0) continue;
    auto eq = line.find(" hits=");
    if (eq == std::string::npos) continue;  // torn write: redo this unit
    data.done.insert(line.substr(5, eq - 5));
    std::stringstream hits(line.substr(eq + 6));
    std::string token;
    while (std::getline(hits, token, ',')) {
      auto c1 = token.find(':');
      auto c2 = token.find(':', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::runtime_error(path + ": malformed hit '" + token + "'");
      Hit h;
      h.n = parse_natural(token.substr(0, c1));
      h.index = parse_natural(token.substr(c1 + 1, c2 - c1 - 1));
      std::vector<PrimePower> pps;
      std::stringstream ps(token.substr(c2 + 1));
      std::string prime;
      while (std::getline(ps, prime, '*'))
        pps.push_back({parse_natural(prime), 1});
      h.factorization = Factorization(std::move(pps));
      if (h.factorization.value() != h.n)
        throw std::runtime_error(path + ": corrupt hit for n=" + to_decimal(h.n));
      data.hits.push_back(std::move(h));
    }
  }
  return data;
}

std::string hit_encoding(const std::vector<Hit>& hits) {
  std::string out;
  for (const Hit& h : hits) {
    if (!out.empty()) out += ",";
    out += to_decimal(h.n) + ":" + to_decimal(h.index) + ":";
    bool first = true;
    for (const auto& [p, e] : h.factorization.factors()) {
      if (!first) out += "*";
      out += to_decimal(p);
      first = false;
    }
  }
  return out;
}

}  // namespace

SearchReport tuple_search(const TupleSearchConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.max_factors > 12)
    throw std::invalid_argument("tuple search ceiling is 12 factors");
  if (cfg.index < 1) throw std::invalid_argument("index must be at least 1");

  SearchReport report;
  CheckpointData resumed;
  const bool checkpointing = !cfg.checkpoint_path.empty();
  if (checkpointing) resumed = read_checkpoint(cfg.checkpoint_path, cfg);
  report.hits = resumed.hits;

  // Work units are (k, p1, p2) prefixes, enumerated with the same deficit
  // bound the full DFS uses.
  PrimeSupply gen_supply;
  std::vector<UnitKey> units;
  bool gen_truncated = false;
  const Rational index_q(cfg.index);
  for (unsigned k = 3; k <= cfg.max_factors; ++k) {
    // p1: deficit is the full index, k slots remain.
    const Natural b1_rhs = Natural(k) * index_q.get_den();
    for (std::size_t i1 = 0;; ++i1) {
      const std::uint64_t p1 = nth_prime(gen_supply, i1);
      if (Natural(p1) * index_q.get_num() >= b1_rhs) break;
      if (cfg.prefix_prime_bound && p1 > cfg.prefix_prime_bound) {
        gen_truncated = true;
        break;
      }
      const Rational deficit1 = index_q - make_rational(1, Natural(p1));
      if (deficit1 <= 0) continue;  // unreachable for index >= 1, kept defensive
      const Natural b2_rhs = Natural(k - 1) * deficit1.get_den();
      for (std::size_t i2 = i1 + 1;; ++i2) {
        const std::uint64_t p2 = nth_prime(gen_supply, i2);
        if (Natural(p2) * deficit1.get_num() >= b2_rhs) break;
        if (cfg.prefix_prime_bound && p2 > cfg.prefix_prime_bound) {
          gen_truncated = true;
          break;
        }
        units.push_back(UnitKey{k, p1, p2});
      }
    }
  }

  std::vector<UnitKey> todo;
  for (const UnitKey& u : units)
    if (!resumed.done.count(unit_line_key(u))) todo.push_back(u);

  std::mutex out_mutex;
  std::ofstream ckpt;
  if (checkpointing) {
    const bool fresh = resumed.done.empty() && resumed.hits.empty();
    ckpt.open(cfg.checkpoint_path, fresh ? std::ios::trunc : std::ios::app);
    if (!ckpt)
      throw std::runtime_error("cannot open checkpoint file " + cfg.checkpoint_path);
    if (fresh) {
      ckpt << "giuga-checkpoint v1\n" << config_line(cfg) << "\n";
      ckpt.flush();
    }
  }

  std::atomic<std::size_t> next_unit{0};
  std::atomic<std::uint64_t> explored{0}, pruned{0};
  std::atomic<bool> truncated{gen_truncated}, stopped{false};

  auto worker = [&] {
    PrimeSupply supply;
    for (;;) {
      if (cfg.cancel && cfg.cancel->load()) {
        stopped = true;
        return;
      }
      const std::size_t i = next_unit.fetch_add(1);
      if (i >= todo.size()) return;
      const UnitKey& unit = todo[i];

      UnitResult result;
      DfsState state;
      state.k = unit.k;
      state.index = cfg.index;
      state.cap = cfg.prefix_prime_bound;
      state.cancel = cfg.cancel;
      state.supply = &supply;
      state.prefix = {Natural(unit.p1), Natural(unit.p2)};
      state.sum = make_rational(1, Natural(unit.p1)) +
                  make_rational(1, Natural(unit.p2));
      state.out = &result;
      state.descend();

      explored.fetch_add(result.explored);
      pruned.fetch_add(result.pruned);
      if (result.truncated) truncated = true;
      if (state.cancelled()) {
        stopped = true;  // unit incomplete: do not record it
        return;
      }

      std::lock_guard<std::mutex> lock(out_mutex);
      for (const Hit& h : result.hits)
        if (cfg.on_hit) cfg.on_hit(h);
      if (checkpointing) {
        ckpt << "unit " << unit_line_key(unit) << " hits=" << hit_encoding(result.hits)
             << "\n";
        ckpt.flush();
      }
      for (Hit& h : result.hits) report.hits.push_back(std::move(h));
    }
  };

  const unsigned workers = std::max(
      1u, std::min<unsigned>(cfg.worker_count ? cfg.worker_count : 1,
                             std::max<std::size_t>(todo.size(), 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  report.nodes_explored += explored.load();
  report.nodes_pruned += pruned.load();
  report.complete = !stopped.load() && !truncated.load();

  std::sort(report.hits.begin(), report.hits.end(),
            [](const Hit& a, const Hit& b) { return a.n < b.n; });
  report.hits.erase(std::unique(report.hits.begin(), report.hits.end()),
                    report.hits.end());
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

// ------------------------------------------------------- reciprocal bound

namespace {

// Exact sum of 1/p over pool[lo, hi) by a product tree; numerator and
// denominator stay unreduced (the primes are pairwise coprime anyway).
void reciprocal_sum(const std::vector<std::uint64_t>& pool, std::size_t lo,
                    std::size_t hi, mpz_class& num, mpz_class& den) {
  if (hi - lo == 1) {
    num = 1;
    den = static_cast<unsigned long>(pool[lo]);
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  mpz_class n1, d1, n2, d2;
  reciprocal_sum(pool, lo, mid, n1, d1);
  reciprocal_sum(pool, mid, hi, n2, d2);
  num = n1 * d2 + n2 * d1;
  den = d1 * d2;
}

}  // namespace

unsigned min_prime_count(const Natural& index, bool odd_primes_only) {
  if (index < 1) throw std::invalid_argument("index must be at least 1");

  // Pass 1: 512-bit float scan to locate the crossing. The final exactness
  // comes from pass 2; the float pass only has to land within a step or two.
  std::vector<std::uint64_t> pool;
  std::uint64_t limit = 1024;
  unsigned k = 0;
  const mpf_class target(index, 512);
  for (;;) {
    pool.clear();
    for (std::uint64_t p : small_primes(limit))
      if (!(odd_primes_only && p == 2)) pool.push_back(p);
    mpf_class sum(0, 512);
    k = 0;
    bool crossed = false;
    for (std::uint64_t p : pool) {
      sum += mpf_class(1.0, 512) / mpf_class(static_cast<unsigned long>(p), 512);
      ++k;
      if (sum > target) {
        crossed = true;
        break;
      }
    }
    if (crossed && k + 2 <= pool.size()) break;
    limit *= 2;
  }

  // Pass 2: exact rational confirmation of the boundary.
  auto ensure_pool = [&](unsigned count) {
    while (pool.size() < count) {
      limit *= 2;
      pool.clear();
      for (std::uint64_t p : small_primes(limit))
        if (!(odd_primes_only && p == 2)) pool.push_back(p);
    }
  };
  auto exceeds = [&](unsigned count) {
    if (count == 0) return false;
    ensure_pool(count);
    mpz_class num, den;
    reciprocal_sum(pool, 0, count, num, den);
    return num > index * den;
  };
  while (!exceeds(k)) ++k;
  while (k > 1 && exceeds(k - 1)) --k;
  return k;
}

}  // namespace giuga
