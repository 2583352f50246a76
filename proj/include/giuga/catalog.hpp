// catalog.hpp - the thirteen known Giuga numbers, reloaded from a data file
// and re-verified from scratch on every run.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "giuga/numtheory.hpp"

namespace giuga {

struct CatalogEntry {
  Natural value;
  std::vector<Natural> listed_primes;
  int factor_count_claimed = 0;
  std::string source_note;
  // Filled by reconcile_entry when the listed primes needed repair.
  std::optional<std::string> reconciliation;
};

struct VerificationReport {
  CatalogEntry entry;
  bool product_matches = false;
  bool all_prime = false;
  bool giuga_confirmed = false;
  bool derivative_is_n_plus_1 = false;
  Natural index;  // check_index value; 1 for every known entry
  std::optional<std::string> reconciliation_applied;

  bool passed() const {
    return product_matches && all_prime && giuga_confirmed &&
           derivative_is_n_plus_1;
  }
};

class CatalogError : public std::runtime_error {
 public:
  explicit CatalogError(const std::string& what);
};

// Listed primes cannot be squared with the decimal value (cofactor neither 1
// nor factorable within budget).
class IrreconcilableEntry : public CatalogError {
 public:
  explicit IrreconcilableEntry(const std::string& what);
};

// A reconciled entry failed re-verification. Carries all reports so the
// caller can show which entry broke.
class VerificationFailure : public CatalogError {
 public:
  VerificationFailure(const std::string& what, std::vector<VerificationReport> reports);
  const std::vector<VerificationReport>& reports() const { return reports_; }

 private:
  std::vector<VerificationReport> reports_;
};

// File format, one entry per line:
//   <decimal>:<p1>,<p2>,...[:note]
// '#' starts a comment line. A note beginning "factors=N;" declares the
// claimed factor count when it differs from the number of listed primes.
std::vector<CatalogEntry> load_catalog(const std::string& path);

// Squares the listed primes with the decimal value: primes that fail to
// divide the value are dropped, the value is divided by the survivors, and
// any cofactor left over is factored (within budget) and inserted. Every
// repair is described in the returned entry's reconciliation field; an
// already-consistent entry comes back unchanged.
CatalogEntry reconcile_entry(const CatalogEntry& e, FactorBudget budget = {});

// Re-verifies every reconciled entry: factor primality, product identity,
// the per-prime Giuga property, index exactly 1, and n' = n + 1. Throws
// VerificationFailure if any entry fails.
std::vector<VerificationReport> verify_catalog(
    const std::vector<CatalogEntry>& reconciled, FactorBudget budget = {});

// Compiled-in location of the shipped data file.
std::string default_catalog_path();

}  // namespace giuga
