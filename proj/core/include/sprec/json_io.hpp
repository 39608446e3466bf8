#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "sprec/copula.hpp"
#include "sprec/dist.hpp"
#include "sprec/precedence.hpp"
#include "sprec/tba.hpp"

// JSON codecs. Parsers throw SchemaError on malformed documents, including
// values the constructors reject.
namespace sprec {

using Json = nlohmann::json;

Distribution parse_distribution(const Json& j);
Copula parse_copula(const Json& j);
Prospect parse_prospect(const Json& j);

Json to_json(const Distribution& d);
Json to_json(const Copula& c);
Json to_json(const PrecedenceReport& r);
Json to_json(const ClassVerdict& v);
Json to_json(const OrderCheckResult& r);
Json to_json(const RankingTable& t);

/// Required member of an object, with a SchemaError naming `where` if absent.
const Json& require(const Json& j, const char* key, const char* where);
double require_number(const Json& j, const char* key, const char* where);

}  // namespace sprec
