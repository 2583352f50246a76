#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "giuga/catalog.hpp"

using namespace giuga;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

const char* kBogusPrime = "658254480569119734123541298976556403";
const char* kTruePrime = "58254480569119734123541298976556403";

// Runs fn, which must throw E, and hands back the exception message.
template <class E, class Fn>
std::string message_of(Fn&& fn) {
  try {
    fn();
  } catch (const E& e) {
    return e.what();
  }
  return "<no exception thrown>";
}

}  // namespace

TEST_CASE("load_catalog reads the shipped file verbatim") {
  std::vector<CatalogEntry> entries = load_catalog(default_catalog_path());
  REQUIRE(entries.size() == 13);

  CHECK(entries[0].value == 30);
  CHECK(entries[0].listed_primes == std::vector<Natural>{2, 3, 5});
  CHECK(entries[0].factor_count_claimed == 3);
  CHECK(entries[0].source_note.empty());
  CHECK_FALSE(entries[0].reconciliation.has_value());

  CHECK(entries[4].value == 2214408306);
  CHECK(entries[11].value == parse_natural("1910667181420507984555759916338506"));

  // The last entry is printed with nine primes but claims ten, and one of
  // the nine is a transcription defect. The loader keeps all of that as-is.
  const CatalogEntry& last = entries[12];
  CHECK(to_decimal(last.value).size() == 97);
  CHECK(last.listed_primes.size() == 9);
  CHECK(last.factor_count_claimed == 10);
  CHECK(last.listed_primes.back() == parse_natural(kBogusPrime));
  CHECK(last.source_note == "found by Frederick Schneider in 2006");
}

TEST_CASE("load_catalog rejects malformed files with located errors") {
  CHECK_THROWS_AS(load_catalog("/nonexistent/giuga_catalog.txt"), CatalogError);

  auto missing_colon = write_temp("giuga_t1.txt", "12345\n");
  std::string msg =
      message_of<CatalogError>([&] { load_catalog(missing_colon); });
  CHECK(msg.find(":1: expected") != std::string::npos);

  auto no_primes = write_temp("giuga_t2.txt", "# fine\n30:\n");
  msg = message_of<CatalogError>([&] { load_catalog(no_primes); });
  CHECK(msg.find(":2: no primes listed") != std::string::npos);

  auto bad_digit = write_temp("giuga_t3.txt", "30:2,x,5\n");
  CHECK_THROWS_AS(load_catalog(bad_digit), CatalogError);

  auto bad_count = write_temp("giuga_t4.txt", "30:2,3,5:factors=ten; legacy\n");
  msg = message_of<CatalogError>([&] { load_catalog(bad_count); });
  CHECK(msg.find("bad factors= count") != std::string::npos);
}

TEST_CASE("load_catalog handles comments, blanks, and plain notes") {
  auto path = write_temp("giuga_t5.txt",
                         "# header\n"
                         "\n"
                         "30:2,3,5:hand-checked 1995  # trailing comment\n");
  std::vector<CatalogEntry> entries = load_catalog(path);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].factor_count_claimed == 3);
  CHECK(entries[0].source_note == "hand-checked 1995");
}

TEST_CASE("reconcile_entry leaves consistent entries untouched") {
  CatalogEntry e;
  e.value = 858;
  e.listed_primes = {2, 3, 11, 13};
  e.factor_count_claimed = 4;
  CatalogEntry r = reconcile_entry(e);
  CHECK(r.listed_primes == e.listed_primes);
  CHECK_FALSE(r.reconciliation.has_value());
}

TEST_CASE("reconcile_entry repairs a wrong prime against the value") {
  CatalogEntry e;
  e.value = 30;
  e.listed_primes = {2, 3, 7};  // 7 does not divide the cofactor 5
  CatalogEntry r = reconcile_entry(e);
  CHECK(r.listed_primes == std::vector<Natural>{2, 3, 5});
  REQUIRE(r.reconciliation.has_value());
  CHECK(*r.reconciliation == "dropped 7; inserted 5");
}

TEST_CASE("reconcile_entry repairs the two defects in the largest entry") {
  std::vector<CatalogEntry> entries = load_catalog(default_catalog_path());
  CatalogEntry r = reconcile_entry(entries[12]);

  REQUIRE(r.listed_primes.size() == 10);  // now matching factor_count_claimed
  CHECK(static_cast<int>(r.listed_primes.size()) == r.factor_count_claimed);
  CHECK(std::find(r.listed_primes.begin(), r.listed_primes.end(), Natural(31)) !=
        r.listed_primes.end());
  CHECK(r.listed_primes.back() == parse_natural(kTruePrime));

  REQUIRE(r.reconciliation.has_value());
  CHECK(*r.reconciliation == std::string("dropped ") + kBogusPrime +
                                 "; inserted 31, " + kTruePrime);

  Natural product = 1;
  for (const Natural& p : r.listed_primes) product *= p;
  CHECK(product == r.value);
}

TEST_CASE("reconcile_entry gives up when the leftover cofactor resists") {
  CatalogEntry e;
  e.value = Natural(30) * parse_natural(kTruePrime) *
            parse_natural("8491659218261819498490029296021");
  e.listed_primes = {2, 3, 5};
  CHECK_THROWS_AS(reconcile_entry(e, FactorBudget{1000}), IrreconcilableEntry);
}

TEST_CASE("verify_catalog passes all thirteen reconciled entries") {
  std::vector<CatalogEntry> entries = load_catalog(default_catalog_path());
  std::vector<CatalogEntry> reconciled;
  for (const CatalogEntry& e : entries) reconciled.push_back(reconcile_entry(e));

  std::vector<VerificationReport> reports = verify_catalog(reconciled);
  REQUIRE(reports.size() == 13);
  for (const VerificationReport& r : reports) {
    CHECK(r.passed());
    CHECK(r.index == 1);
  }
  CHECK_FALSE(reports[0].reconciliation_applied.has_value());
  CHECK(reports[12].reconciliation_applied.has_value());
}

TEST_CASE("verify_catalog rejects a correctly-factored non-example") {
  CatalogEntry e;
  e.value = 42;
  e.listed_primes = {2, 3, 7};
  try {
    verify_catalog({e});
    FAIL("expected VerificationFailure");
  } catch (const VerificationFailure& failure) {
    REQUIRE(failure.reports().size() == 1);
    const VerificationReport& r = failure.reports()[0];
    CHECK(r.product_matches);
    CHECK(r.all_prime);
    CHECK_FALSE(r.giuga_confirmed);
    CHECK_FALSE(r.derivative_is_n_plus_1);
    CHECK_FALSE(r.passed());
  }
}

TEST_CASE("verify_catalog rejects a product mismatch") {
  CatalogEntry e;
  e.value = 31;
  e.listed_primes = {2, 3, 5};
  CHECK_THROWS_AS(verify_catalog({e}), VerificationFailure);
}
