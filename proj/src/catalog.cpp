#include "giuga/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "giuga/derivative.hpp"

namespace giuga {

CatalogError::CatalogError(const std::string& what) : std::runtime_error(what) {}

IrreconcilableEntry::IrreconcilableEntry(const std::string& what)
    : CatalogError(what) {}

VerificationFailure::VerificationFailure(const std::string& what,
                                         std::vector<VerificationReport> reports)
    : CatalogError(what), reports_(std::move(reports)) {}

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

Natural parse_field(const std::string& text, const std::string& path, int lineno) {
  try {
    return parse_natural(trim(text));
  } catch (const std::invalid_argument& e) {
    throw CatalogError(path + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

// Groups a sorted multiset of primes into a Factorization.
Factorization group_primes(const std::vector<Natural>& primes) {
  std::vector<PrimePower> grouped;
  for (const Natural& p : primes) {
    if (!grouped.empty() && grouped.back().prime == p)
      ++grouped.back().exponent;
    else
      grouped.push_back({p, 1});
  }
  return Factorization(std::move(grouped));
}

std::string join(const std::vector<Natural>& values) {
  std::string out;
  for (const Natural& v : values) {
    if (!out.empty()) out += ", ";
    out += to_decimal(v);
  }
  return out;
}

}  // namespace

std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog file: " + path);

  std::vector<CatalogEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    auto first = line.find(':');
    if (first == std::string::npos)
      throw CatalogError(path + ":" + std::to_string(lineno) +
                         ": expected <decimal>:<p1>,<p2>,...[:note]");
    auto second = line.find(':', first + 1);

    CatalogEntry entry;
    entry.value = parse_field(line.substr(0, first), path, lineno);

    std::string prime_part =
        second == std::string::npos ? line.substr(first + 1)
                                    : line.substr(first + 1, second - first - 1);
    std::stringstream primes(prime_part);
    std::string token;
    while (std::getline(primes, token, ','))
      entry.listed_primes.push_back(parse_field(token, path, lineno));
    if (entry.listed_primes.empty())
      throw CatalogError(path + ":" + std::to_string(lineno) + ": no primes listed");

    entry.factor_count_claimed = static_cast<int>(entry.listed_primes.size());
    if (second != std::string::npos) {
      std::string note = trim(line.substr(second + 1));
      if (note.rfind("factors=", 0) == 0) {
        auto semi = note.find(';');
        std::string count = note.substr(8, semi == std::string::npos
                                               ? std::string::npos
                                               : semi - 8);
        try {
          entry.factor_count_claimed = std::stoi(trim(count));
        } catch (const std::exception&) {
          throw CatalogError(path + ":" + std::to_string(lineno) +
                             ": bad factors= count '" + count + "'");
        }
        note = semi == std::string::npos ? "" : trim(note.substr(semi + 1));
      }
      entry.source_note = note;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

CatalogEntry reconcile_entry(const CatalogEntry& e, FactorBudget budget) {
  CatalogEntry out = e;
  std::vector<Natural> kept, dropped, inserted;
  Natural rest = e.value;

  for (const Natural& p : e.listed_primes) {
    if (p >= 2 && mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t()) && is_prime(p)) {
      kept.push_back(p);
      rest /= p;
    } else {
      dropped.push_back(p);
    }
  }

  if (rest != 1) {
    // The cofactor left after dividing out the surviving listed primes is
    // small by construction; the big factors arrived through the list.
    Factorization extra;
    try {
      extra = factorize(rest, budget);
    } catch (const BudgetExceeded&) {
      throw IrreconcilableEntry("entry " + to_decimal(e.value) +
                                ": cofactor " + to_decimal(rest) +
                                " resists factoring within budget");
    }
    for (const auto& [p, exp] : extra.factors())
      for (unsigned i = 0; i < exp; ++i) {
        kept.push_back(p);
        inserted.push_back(p);
      }
  }

  std::sort(kept.begin(), kept.end());
  std::sort(inserted.begin(), inserted.end());
  out.listed_primes = std::move(kept);

  if (!dropped.empty() || !inserted.empty()) {
    std::string what;
    if (!dropped.empty()) what += "dropped " + join(dropped);
    if (!inserted.empty()) {
      if (!what.empty()) what += "; ";
      what += "inserted " + join(inserted);
    }
    out.reconciliation = what;
  }
  return out;
}

std::vector<VerificationReport> verify_catalog(
    const std::vector<CatalogEntry>& reconciled, FactorBudget budget) {
  (void)budget;  // verification works off the reconciled prime lists alone
  std::vector<VerificationReport> reports;
  bool all_passed = true;

  for (const CatalogEntry& e : reconciled) {
    VerificationReport r;
    r.entry = e;
    r.reconciliation_applied = e.reconciliation;

    r.all_prime = std::all_of(e.listed_primes.begin(), e.listed_primes.end(),
                              [](const Natural& p) { return is_prime(p); });

    std::vector<Natural> sorted = e.listed_primes;
    std::sort(sorted.begin(), sorted.end());
    Factorization f = group_primes(sorted);
    r.product_matches = (f.value() == e.value);

    if (r.product_matches) {
      const Natural& n = e.value;
      bool composite = f.total_multiplicity() >= 2;
      bool all_zero = true;
      Natural quotient, residue;
      for (const auto& [p, exp] : f.factors()) {
        quotient = n / p - 1;
        mpz_mod(residue.get_mpz_t(), quotient.get_mpz_t(), p.get_mpz_t());
        if (residue != 0) all_zero = false;
      }
      r.giuga_confirmed = composite && all_zero;

      Natural d = derive_factored(f, n);
      r.derivative_is_n_plus_1 = (d == n + 1);

      if (f.squarefree()) {
        Rational sum = 0, product = 1;
        for (const auto& [p, exp] : f.factors()) {
          Rational inv = make_rational(1, p);
          sum += inv;
          product *= inv;
        }
        Rational gap = sum - product;
        if (gap.get_den() == 1 && gap.get_num() >= 1) r.index = gap.get_num();
      }
    }

    all_passed = all_passed && r.passed();
    reports.push_back(std::move(r));
  }

  if (!all_passed) {
    std::string what = "catalog verification failed:";
    for (const VerificationReport& r : reports)
      if (!r.passed()) what += " " + to_decimal(r.entry.value);
    throw VerificationFailure(what, std::move(reports));
  }
  return reports;
}

std::string default_catalog_path() {
#ifdef GIUGA_DATA_DIR
  return std::string(GIUGA_DATA_DIR) + "/giuga_catalog.txt";
#else
  return "data/giuga_catalog.txt";
#endif
}

}  // namespace giuga
