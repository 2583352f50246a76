// json_io.hpp - JSON serialization. Big integers always travel as decimal
// strings; factorizations as arrays of [prime_string, exponent].
#pragma once

#include <json.hpp>

#include "giuga/catalog.hpp"
#include "giuga/derivative.hpp"
#include "giuga/giuga.hpp"
#include "giuga/search.hpp"

namespace giuga {

nlohmann::json to_json(const Factorization& f);
nlohmann::json to_json(const DerivativeResult& r,
                       const std::optional<LinearForm>& form);
nlohmann::json to_json(const GiugaCertificate& cert);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const Hit& hit);
nlohmann::json to_json(const SearchReport& report);

}  // namespace giuga
