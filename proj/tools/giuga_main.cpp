// giuga_main.cpp - command-line front end for the derivative / Giuga toolkit.
//
// Exit codes: 0 positive verdict (or plain success), 1 negative verdict,
// 2 bad input, 3 budget or limit hit, 4 characterization disagreement,
// 5 catalog verification failure.
#include <atomic>
#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "giuga/json_io.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitDisagreement = 4;
constexpr int kExitCatalog = 5;

std::atomic<bool> g_cancel{false};

void on_sigint(int) { g_cancel.store(true); }

struct Options {
  bool json = false;
  bool verbose = false;
  unsigned jobs = 1;
  std::uint64_t powersum_limit = 1'000'000;
  std::uint64_t factor_budget = 20'000'000;
  std::string catalog_path;
};

std::string factor_string(const giuga::Factorization& f) {
  if (f.empty()) return "1";
  std::string out;
  for (const auto& [p, e] : f.factors()) {
    if (!out.empty()) out += " * ";
    out += giuga::to_decimal(p);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int run_derive(const std::string& n_text, const Options& opt) {
  giuga::Natural n = giuga::parse_natural(n_text);
  giuga::DerivativeResult r = giuga::derive(n, {opt.factor_budget});

  std::optional<giuga::LinearForm> form;
  if (n >= 2) {
    giuga::Natural shifted = r.derivative - 1;
    if (shifted >= n && mpz_divisible_p(shifted.get_mpz_t(), n.get_mpz_t()))
      form = giuga::LinearForm{n, shifted / n};
  }

  if (opt.json) {
    emit(giuga::to_json(r, form));
  } else {
    std::cout << giuga::to_decimal(n) << " = " << factor_string(r.factorization)
              << "\n";
    std::cout << giuga::to_decimal(n) << "' = " << giuga::to_decimal(r.derivative)
              << "\n";
    if (form)
      std::cout << "n' = " << giuga::to_decimal(form->index) << "*n + 1\n";
  }
  return kExitYes;
}

int run_check(const std::string& n_text, const Options& opt) {
  giuga::Natural n = giuga::parse_natural(n_text);
  giuga::GiugaCertificate cert =
      giuga::check_all(n, opt.powersum_limit, {opt.factor_budget});

  if (opt.json) {
    emit(giuga::to_json(cert));
  } else {
    std::cout << giuga::to_decimal(n)
              << (cert.is_giuga ? " is a Giuga number" : " is not a Giuga number")
              << "\n";
    if (cert.index)
      std::cout << "n' = " << giuga::to_decimal(*cert.index) << "*n + 1\n";
    if (opt.verbose) {
      for (const giuga::PrimeResidue& pr : cert.per_prime)
        std::cout << "  p = " << giuga::to_decimal(pr.prime)
                  << ": (n/p - 1) mod p = " << giuga::to_decimal(pr.residue)
                  << "\n";
      std::cout << "  methods agreeing:";
      for (giuga::Method m : cert.methods_agreeing)
        std::cout << " " << giuga::method_name(m);
      std::cout << "\n";
    }
  }
  return cert.is_giuga ? kExitYes : kExitNo;
}

int run_catalog_verify(const Options& opt) {
  const std::string path =
      opt.catalog_path.empty() ? giuga::default_catalog_path() : opt.catalog_path;
  std::vector<giuga::CatalogEntry> entries = giuga::load_catalog(path);
  std::vector<giuga::CatalogEntry> reconciled;
  for (const giuga::CatalogEntry& e : entries)
    reconciled.push_back(giuga::reconcile_entry(e, {opt.factor_budget}));
  std::vector<giuga::VerificationReport> reports =
      giuga::verify_catalog(reconciled, {opt.factor_budget});

  if (opt.json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const giuga::VerificationReport& r : reports)
      arr.push_back(giuga::to_json(r));
    emit(arr);
  } else {
    for (const giuga::VerificationReport& r : reports) {
      std::cout << "ok " << giuga::to_decimal(r.entry.value) << " ("
                << r.entry.listed_primes.size() << " prime factors, index "
                << giuga::to_decimal(r.index) << ")";
      if (r.reconciliation_applied)
        std::cout << " [reconciled: " << *r.reconciliation_applied << "]";
      std::cout << "\n";
    }
    std::cout << reports.size() << " catalog entries verified\n";
  }
  return kExitYes;
}

int report_outcome(const giuga::SearchReport& report, const Options& opt) {
  if (opt.json) {
    emit(giuga::to_json(report));
  } else {
    std::cout << report.hits.size() << " solutions, "
              << report.nodes_explored << " nodes explored, "
              << report.nodes_pruned << " pruned, "
              << (report.complete ? "complete" : "incomplete") << ", "
              << report.elapsed.count() << "s\n";
  }
  if (!report.complete) return kExitBudget;
  return report.hits.empty() ? kExitNo : kExitYes;
}

int run_sieve(std::uint64_t limit, std::uint64_t segment,
              const std::string& index_text, const Options& opt) {
  giuga::SieveConfig cfg;
  cfg.limit = limit;
  cfg.segment_size = segment;
  cfg.worker_count = opt.jobs;
  cfg.cancel = &g_cancel;
  if (!index_text.empty()) cfg.index_filter = giuga::parse_natural(index_text);
  if (!opt.json)
    cfg.on_hit = [](const giuga::Hit& h) {
      std::cout << "n = " << giuga::to_decimal(h.n) << " = "
                << factor_string(h.factorization) << "  (n' = "
                << giuga::to_decimal(h.index) << "*n + 1)\n";
    };
  return report_outcome(giuga::sieve_search(cfg), opt);
}

int run_tuples(unsigned max_factors, const std::string& index_text,
               std::uint64_t prefix_bound, const std::string& checkpoint,
               const Options& opt) {
  giuga::TupleSearchConfig cfg;
  cfg.max_factors = max_factors;
  cfg.index = giuga::parse_natural(index_text);
  cfg.prefix_prime_bound = prefix_bound;
  cfg.worker_count = opt.jobs;
  cfg.checkpoint_path = checkpoint;
  cfg.cancel = &g_cancel;
  if (!opt.json)
    cfg.on_hit = [](const giuga::Hit& h) {
      std::cout << "n = " << giuga::to_decimal(h.n) << " = "
                << factor_string(h.factorization) << "  (n' = "
                << giuga::to_decimal(h.index) << "*n + 1)\n";
    };
  return report_outcome(giuga::tuple_search(cfg), opt);
}

int run_bound(const std::string& index_text, bool odd_only, const Options& opt) {
  giuga::Natural a = giuga::parse_natural(index_text);
  unsigned k = giuga::min_prime_count(a, odd_only);
  if (opt.json) {
    nlohmann::json j;
    j["index"] = giuga::to_decimal(a);
    j["odd_primes_only"] = odd_only;
    j["min_prime_count"] = k;
    emit(j);
  } else {
    std::cout << "any solution of n' = " << giuga::to_decimal(a)
              << "*n + 1 has at least " << k << " prime factors"
              << (odd_only ? " (odd primes only)" : "") << "\n";
  }
  return kExitYes;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const giuga::IrreconcilableEntry& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCatalog;
  } catch (const giuga::VerificationFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const giuga::VerificationReport& r : e.reports())
      if (!r.passed())
        std::cerr << "  failed: " << giuga::to_decimal(r.entry.value)
                  << " product_matches=" << r.product_matches
                  << " all_prime=" << r.all_prime
                  << " giuga=" << r.giuga_confirmed
                  << " derivative=" << r.derivative_is_n_plus_1 << "\n";
    return kExitCatalog;
  } catch (const giuga::CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const giuga::CharacterizationDisagreement& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDisagreement;
  } catch (const giuga::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "  factored so far:";
    for (const auto& [p, exp] : e.factored()) {
      std::cerr << " " << giuga::to_decimal(p);
      if (exp > 1) std::cerr << "^" << exp;
    }
    std::cerr << "\n  unfactored:";
    for (const giuga::Natural& c : e.unfactored())
      std::cerr << " " << giuga::to_decimal(c);
    std::cerr << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arithmetic derivative and Giuga number toolkit"};
  app.require_subcommand(1);

  Options opt;
  app.add_flag("--json", opt.json, "emit JSON on stdout");
  app.add_flag("-v,--verbose", opt.verbose, "more per-item detail");
  app.add_option("--jobs", opt.jobs, "worker threads")->check(CLI::Range(1u, 64u));
  app.add_option("--powersum-limit", opt.powersum_limit,
                 "largest n the power-sum characterization is evaluated for");
  app.add_option("--factor-budget", opt.factor_budget,
                 "operation budget for factorization");
  app.add_option("--catalog", opt.catalog_path, "catalog data file");

  std::string derive_n;
  CLI::App* derive_cmd = app.add_subcommand("derive", "compute n' and its linear form");
  derive_cmd->add_option("n", derive_n, "decimal natural number")->required();

  std::string check_n;
  CLI::App* giuga_cmd = app.add_subcommand("giuga", "Giuga characterizations");
  giuga_cmd->require_subcommand(1);
  CLI::App* check_cmd =
      giuga_cmd->add_subcommand("check", "run all characterizations on n");
  check_cmd->add_option("n", check_n, "decimal natural number")->required();

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "known-solution catalog");
  catalog_cmd->require_subcommand(1);
  CLI::App* verify_cmd = catalog_cmd->add_subcommand(
      "verify", "reconcile and re-verify every catalog entry");

  CLI::App* search_cmd = app.add_subcommand("search", "solution search engines");
  search_cmd->require_subcommand(1);

  std::uint64_t sieve_limit = 0;
  std::uint64_t sieve_segment = 1u << 20;
  std::string sieve_index;
  CLI::App* sieve_cmd =
      search_cmd->add_subcommand("sieve", "exhaustive derivative sieve over [2, limit]");
  sieve_cmd->add_option("--limit", sieve_limit, "inclusive upper bound")->required();
  sieve_cmd->add_option("--segment-size", sieve_segment, "sieve segment length");
  sieve_cmd->add_option("--index", sieve_index, "only report hits with this index");

  unsigned tuples_max = 6;
  std::string tuples_index = "1";
  std::uint64_t tuples_bound = 10'000'000;
  std::string tuples_checkpoint;
  CLI::App* tuples_cmd = search_cmd->add_subcommand(
      "tuples", "prime-tuple enumeration with closed-form last factor");
  tuples_cmd->add_option("--max-factors", tuples_max, "largest factor count tried");
  tuples_cmd->add_option("--index", tuples_index, "target index a");
  tuples_cmd->add_option("--prefix-bound", tuples_bound,
                         "cap on enumerated prefix primes (0 = uncapped)");
  tuples_cmd->add_option("--checkpoint", tuples_checkpoint,
                         "resumable progress file");

  std::string bound_index;
  bool bound_odd = false;
  CLI::App* bound_cmd = app.add_subcommand(
      "bound", "least prime count compatible with an index");
  bound_cmd->add_option("--index", bound_index, "target index a")->required();
  bound_cmd->add_flag("--odd", bound_odd, "restrict to odd primes");

  for (CLI::App* sub : {derive_cmd, giuga_cmd, check_cmd, catalog_cmd, verify_cmd,
                        search_cmd, sieve_cmd, tuples_cmd, bound_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  std::signal(SIGINT, on_sigint);

  if (derive_cmd->parsed()) return guarded([&] { return run_derive(derive_n, opt); });
  if (check_cmd->parsed()) return guarded([&] { return run_check(check_n, opt); });
  if (verify_cmd->parsed()) return guarded([&] { return run_catalog_verify(opt); });
  if (sieve_cmd->parsed())
    return guarded([&] { return run_sieve(sieve_limit, sieve_segment, sieve_index, opt); });
  if (tuples_cmd->parsed())
    return guarded([&] {
      return run_tuples(tuples_max, tuples_index, tuples_bound, tuples_checkpoint, opt);
    });
  if (bound_cmd->parsed())
    return guarded([&] { return run_bound(bound_index, bound_odd, opt); });
  return kExitInput;
}
