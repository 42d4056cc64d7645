#include "asgmkg/json_io.hpp"

#include "asgmkg/error.hpp"

namespace asgmkg {

void to_json(Json& j, const SourceRef& s) {
  j = Json{{"document_id", s.document_id}, {"page", s.page}, {"chunk_index", s.chunk_index}};
}

void from_json(const Json& j, SourceRef& s) {
  s.document_id = j.at("document_id").get<std::string>();
  s.page = j.at("page").get<int>();
  s.chunk_index = j.value("chunk_index", 0);
}

void to_json(Json& j, const SearchHit& h) {
  j = Json{{"url", h.url}, {"title", h.title}, {"snippet", h.snippet}};
}

void from_json(const Json& j, SearchHit& h) {
  h.url = j.at("url").get<std::string>();
  h.title = j.value("title", "");
  h.snippet = j.value("snippet", "");
}

Json triple_to_json(const Triple& t) {
  return Json{{"id", t.id},
              {"subject", t.subject.text()},
              {"predicate", t.predicate.text()},
              {"object", t.object.text()},
              {"negated", t.negated},
              {"status", std::string(to_string(t.status))},
              {"provenance", t.provenance}};
}

Triple triple_from_json(const Json& j) {
  Triple t = make_triple(j.at("subject").get<std::string>(), j.at("predicate").get<std::string>(),
                         j.at("object").get<std::string>(), j.value("negated", false));
  if (j.contains("provenance")) t.provenance = j.at("provenance").get<std::vector<SourceRef>>();
  if (j.contains("status")) {
    auto st = status_from_string(j.at("status").get<std::string>());
    if (!st) throw InvalidArgument("unknown status " + j.at("status").dump());
    t.status = *st;
  }
  return t;
}

void to_json(Json& j, const EvidencePage& p) {
  j = Json{{"url", p.url}, {"relevance_score", p.relevance_score}, {"reason", p.reason}};
  j["verdict"] = p.verdict ? Json(std::string(to_string(*p.verdict))) : Json(nullptr);
}

void from_json(const Json& j, EvidencePage& p) {
  p.url = j.at("url").get<std::string>();
  p.relevance_score = j.at("relevance_score").get<double>();
  p.reason = j.value("reason", "");
  p.content.clear();
  p.verdict.reset();
  if (j.contains("verdict") && j.at("verdict").is_string()) {
    const auto v = j.at("verdict").get<std::string>();
    if (v == "yes") p.verdict = Verdict::yes;
    else if (v == "no") p.verdict = Verdict::no;
    else throw InvalidArgument("unknown verdict " + v);
  }
}

void to_json(Json& j, const ValidationRecord& r) {
  Json hits = Json::array();
  for (const auto& h : r.hits) {
    Json hj = h.hit;
    hj["relevance_score"] = h.score;
    hits.push_back(std::move(hj));
  }
  Json degr = Json::array();
  for (const auto& d : r.degradations) degr.push_back(Json{{"stage", d.stage}, {"detail", d.detail}});
  j = Json{{"triple_id", r.triple_id},
           {"query", r.query},
           {"hits", std::move(hits)},
           {"judged_pages", r.judged_pages},
           {"excluded_pages", r.excluded_pages},
           {"yes_count", r.yes_count},
           {"no_count", r.no_count},
           {"outcome", std::string(to_string(r.outcome))},
           {"degradations", std::move(degr)}};
}

void from_json(const Json& j, ValidationRecord& r) {
  r.triple_id = j.at("triple_id").get<std::string>();
  r.query = j.at("query").get<std::string>();
  r.hits.clear();
  for (const auto& hj : j.at("hits")) {
    r.hits.push_back(ScoredHit{hj.get<SearchHit>(), hj.value("relevance_score", 0.0)});
  }
  r.judged_pages = j.at("judged_pages").get<std::vector<EvidencePage>>();
  r.excluded_pages = j.value("excluded_pages", std::vector<EvidencePage>{});
  r.yes_count = j.at("yes_count").get<std::size_t>();
  r.no_count = j.at("no_count").get<std::size_t>();
  auto o = outcome_from_string(j.at("outcome").get<std::string>());
  if (!o) throw InvalidArgument("unknown outcome " + j.at("outcome").dump());
  r.outcome = *o;
  r.degradations.clear();
  if (j.contains("degradations")) {
    for (const auto& d : j.at("degradations")) {
      r.degradations.push_back({d.at("stage").get<std::string>(), d.at("detail").get<std::string>()});
    }
  }
}

Json candidate_to_json(const CandidateDecision& d) {
  const auto& c = d.candidate;
  Json j{{"fields",
          {{"subject", c.subject_raw},
           {"predicate", c.predicate_raw},
           {"object", c.object_raw},
           {"negated", c.negated}}},
         {"accepted", d.triple_id.has_value()},
         {"source", c.source}};
  j["rejection_reason"] = c.rejection_reason ? Json(*c.rejection_reason) : Json(nullptr);
  j["triple_id"] = d.triple_id ? Json(*d.triple_id) : Json(nullptr);
  return j;
}

CandidateDecision candidate_from_json(const Json& j) {
  CandidateDecision d;
  const auto& f = j.at("fields");
  d.candidate.subject_raw = f.at("subject").get<std::string>();
  d.candidate.predicate_raw = f.at("predicate").get<std::string>();
  d.candidate.object_raw = f.at("object").get<std::string>();
  d.candidate.negated = f.value("negated", false);
  d.candidate.source = j.at("source").get<SourceRef>();
  if (j.contains("rejection_reason") && j.at("rejection_reason").is_string()) {
    d.candidate.rejection_reason = j.at("rejection_reason").get<std::string>();
  }
  const bool accepted = j.at("accepted").get<bool>();
  if (accepted) {
    if (!j.contains("triple_id") || !j.at("triple_id").is_string()) {
      throw InvalidArgument("accepted candidate without triple_id");
    }
    d.triple_id = j.at("triple_id").get<std::string>();
  }
  return d;
}

}  // namespace asgmkg
