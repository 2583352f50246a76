// End-to-end tests driving the installed binary through a shell, pinning
// exit codes and output shapes.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "giuga/numtheory.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GIUGA_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
    r.output.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("derive prints the factorization, derivative and linear form") {
  RunResult r = run_cli("derive 30");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "30 = 2 * 3 * 5"));
  CHECK(contains(r.output, "30' = 31"));
  CHECK(contains(r.output, "n' = 1*n + 1"));

  r = run_cli("derive 60");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "60 = 2^2 * 3 * 5"));
  CHECK(contains(r.output, "60' = 92"));
  CHECK_FALSE(contains(r.output, "*n + 1"));
}

TEST_CASE("derive --json is machine-readable") {
  RunResult r = run_cli("--json derive 30");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["n"] == "30");
  CHECK(j["derivative"] == "31");
  CHECK(j["linear_index"] == "1");
  REQUIRE(j["factorization"].size() == 3);
  CHECK(j["factorization"][0][0] == "2");
  CHECK(j["factorization"][0][1] == 1);

  r = run_cli("--json derive 7");
  nlohmann::json prime = nlohmann::json::parse(r.output);
  CHECK(prime["derivative"] == "1");
  CHECK(prime["linear_index"].is_null());
}

TEST_CASE("derive rejects garbage input with exit code 2") {
  RunResult r = run_cli("derive xyz");
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "error:"));
  CHECK(run_cli("derive -- -5").exit_code == 2);
}

TEST_CASE("derive reports an out-of-budget factorization with exit code 3") {
  giuga::Natural hard =
      giuga::parse_natural("58254480569119734123541298976556403") *
      giuga::parse_natural("8491659218261819498490029296021");
  RunResult r =
      run_cli("--factor-budget 1000 derive " + giuga::to_decimal(hard));
  CHECK(r.exit_code == 3);
  CHECK(contains(r.output, "unfactored:"));
}

TEST_CASE("giuga check separates members from non-members by exit code") {
  RunResult r = run_cli("giuga check 30");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "30 is a Giuga number"));
  CHECK(contains(r.output, "n' = 1*n + 1"));

  CHECK(run_cli("giuga check 31").exit_code == 1);
  CHECK(run_cli("giuga check 60").exit_code == 1);
  CHECK(run_cli("giuga check 4").exit_code == 1);
  CHECK(run_cli("giuga check 0").exit_code == 1);
  CHECK(contains(run_cli("giuga check 31").output, "is not a Giuga number"));
}

TEST_CASE("giuga check --verbose shows residues and agreeing methods") {
  RunResult r = run_cli("-v giuga check 30");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "p = 5: (n/p - 1) mod p = 0"));
  CHECK(contains(r.output,
                 "methods agreeing: definition index power_sum bernoulli"));
}

TEST_CASE("giuga check --json carries the whole certificate") {
  RunResult r = run_cli("--json giuga check 858");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["n"] == "858");
  CHECK(j["is_giuga"] == true);
  CHECK(j["composite"] == true);
  CHECK(j["squarefree"] == true);
  CHECK(j["index"] == "1");
  REQUIRE(j["per_prime"].size() == 4);
  CHECK(j["per_prime"][3]["prime"] == "13");
  CHECK(j["per_prime"][3]["residue"] == "0");
  CHECK(j["methods_agreeing"].size() == 4);
  CHECK(j["methods_agreeing"][0] == "definition");
}

TEST_CASE("catalog verify passes the shipped file") {
  RunResult r = run_cli("catalog verify");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "ok 30 (3 prime factors, index 1)"));
  CHECK(contains(r.output, "13 catalog entries verified"));
  CHECK(contains(r.output, "[reconciled: dropped"));
}

TEST_CASE("catalog verify exit codes distinguish parse from verification") {
  auto corrupt = write_temp("giuga_cli_corrupt.txt", "nonsense\n");
  RunResult r = run_cli("--catalog " + corrupt + " catalog verify");
  CHECK(r.exit_code == 2);

  auto tampered = write_temp("giuga_cli_tampered.txt", "42:2,3,7\n");
  r = run_cli("--catalog " + tampered + " catalog verify");
  CHECK(r.exit_code == 5);
  CHECK(contains(r.output, "failed: 42"));
}

TEST_CASE("search sieve prints hits and exits by outcome") {
  RunResult r = run_cli("search sieve --limit 100000");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "n = 30 = 2 * 3 * 5  (n' = 1*n + 1)"));
  CHECK(contains(r.output, "n = 66198 = 2 * 3 * 11 * 17 * 59  (n' = 1*n + 1)"));
  CHECK(contains(r.output, "4 solutions"));
  CHECK(contains(r.output, "complete"));

  CHECK(run_cli("search sieve --limit 25").exit_code == 1);
}

TEST_CASE("search sieve --json reports hits and counters") {
  RunResult r = run_cli("--json search sieve --limit 1000");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.output);
  REQUIRE(j["hits"].size() == 2);
  CHECK(j["hits"][0]["n"] == "30");
  CHECK(j["hits"][1]["n"] == "858");
  CHECK(j["complete"] == true);
  CHECK(j["nodes_explored"] == 999);
}

TEST_CASE("search tuples enumerates and honors the prefix bound") {
  RunResult r = run_cli("search tuples --max-factors 4");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "3 solutions"));

  r = run_cli("--json search tuples --max-factors 6");
  nlohmann::json j = nlohmann::json::parse(r.output);
  REQUIRE(j["hits"].size() == 6);
  CHECK(j["hits"][5]["n"] == "24423128562");
  CHECK(j["complete"] == true);

  // A cap tight enough to cut branches is reported as incomplete work.
  r = run_cli("search tuples --max-factors 6 --prefix-bound 10");
  CHECK(r.exit_code == 3);
  CHECK(contains(r.output, "incomplete"));
}

TEST_CASE("bound reports the least compatible prime count") {
  RunResult r = run_cli("bound --index 1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "at least 3 prime factors"));

  r = run_cli("bound --index 1 --odd");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "at least 9 prime factors"));

  r = run_cli("--json bound --index 2");
  nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["min_prime_count"] == 59);
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("search").exit_code == 2);
  CHECK(run_cli("derive").exit_code == 2);  // missing argument
  CHECK(run_cli("--no-such-flag derive 30").exit_code == 2);

  RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(contains(help.output, "derive"));
  CHECK(contains(help.output, "search"));
}
