#include "giuga/json_io.hpp"

namespace giuga {

using nlohmann::json;

json to_json(const Factorization& f) {
  json arr = json::array();
  for (const auto& [p, e] : f.factors())
    arr.push_back(json::array({to_decimal(p), e}));
  return arr;
}

json to_json(const DerivativeResult& r, const std::optional<LinearForm>& form) {
  json j;
  j["n"] = to_decimal(r.n);
  j["derivative"] = to_decimal(r.derivative);
  j["factorization"] = to_json(r.factorization);
  j["linear_index"] = form ? json(to_decimal(form->index)) : json(nullptr);
  return j;
}

json to_json(const GiugaCertificate& cert) {
  json j;
  j["n"] = to_decimal(cert.n);
  j["composite"] = cert.composite;
  j["squarefree"] = cert.squarefree;
  j["is_giuga"] = cert.is_giuga;
  json residues = json::array();
  for (const PrimeResidue& pr : cert.per_prime) {
    json row;
    row["prime"] = to_decimal(pr.prime);
    row["residue"] = to_decimal(pr.residue);
    residues.push_back(row);
  }
  j["per_prime"] = residues;
  j["index"] = cert.index ? json(to_decimal(*cert.index)) : json(nullptr);
  json methods = json::array();
  for (Method m : cert.methods_agreeing) methods.push_back(method_name(m));
  j["methods_agreeing"] = methods;
  return j;
}

json to_json(const VerificationReport& report) {
  json j;
  j["value"] = to_decimal(report.entry.value);
  json primes = json::array();
  for (const Natural& p : report.entry.listed_primes) primes.push_back(to_decimal(p));
  j["primes"] = primes;
  j["factor_count_claimed"] = report.entry.factor_count_claimed;
  j["source_note"] = report.entry.source_note;
  j["product_matches"] = report.product_matches;
  j["all_prime"] = report.all_prime;
  j["giuga_confirmed"] = report.giuga_confirmed;
  j["derivative_is_n_plus_1"] = report.derivative_is_n_plus_1;
  j["index"] = to_decimal(report.index);
  j["reconciliation"] = report.reconciliation_applied
                            ? json(*report.reconciliation_applied)
                            : json(nullptr);
  j["passed"] = report.passed();
  return j;
}

json to_json(const Hit& hit) {
  json j;
  j["n"] = to_decimal(hit.n);
  j["index"] = to_decimal(hit.index);
  j["factorization"] = to_json(hit.factorization);
  return j;
}

json to_json(const SearchReport& report) {
  json j;
  json hits = json::array();
  for (const Hit& h : report.hits) hits.push_back(to_json(h));
  j["hits"] = hits;
  j["nodes_explored"] = report.nodes_explored;
  j["nodes_pruned"] = report.nodes_pruned;
  j["complete"] = report.complete;
  j["elapsed_seconds"] = report.elapsed.count();
  return j;
}

}  // namespace giuga
