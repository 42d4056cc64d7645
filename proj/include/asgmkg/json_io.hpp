#pragma once

#include <json.hpp>

#include "asgmkg/clients.hpp"
#include "asgmkg/das.hpp"
#include "asgmkg/extract.hpp"
#include "asgmkg/triple.hpp"

// JSON encodings shared by the on-disk logs, the CLI and the HTTP API.
namespace asgmkg {

using Json = nlohmann::json;

void to_json(Json& j, const SourceRef& s);
void from_json(const Json& j, SourceRef& s);

void to_json(Json& j, const SearchHit& h);
void from_json(const Json& j, SearchHit& h);

Json triple_to_json(const Triple& t);
Triple triple_from_json(const Json& j);

void to_json(Json& j, const EvidencePage& p);
void from_json(const Json& j, EvidencePage& p);
void to_json(Json& j, const ValidationRecord& r);
void from_json(const Json& j, ValidationRecord& r);

Json candidate_to_json(const CandidateDecision& d);
CandidateDecision candidate_from_json(const Json& j);

}  // namespace asgmkg
