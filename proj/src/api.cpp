#include "asgmkg/api.hpp"

#include <ctime>
#include <httplib.h>

#include "asgmkg/error.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

Json stats_payload(const Snapshot& snapshot) {
  const auto stats = compute_stats(snapshot.graph);
  Json histogram = Json::object();
  for (Status s : kAllStatuses) histogram[std::string(to_string(s))] = 0;
  for (const auto& [_, t] : snapshot.graph.triples()) {
    histogram[std::string(to_string(t.status))] = histogram[std::string(to_string(t.status))].get<std::size_t>() + 1;
  }
  return Json{{"triple_count", stats.triple_count},
              {"unique_entity_count", stats.unique_entity_count},
              {"unique_relation_count", stats.unique_relation_count},
              {"status_histogram", histogram},
              {"validated_count", snapshot.validation.size()},
              {"reviewed_count", snapshot.reviews.size()},
              {"review_event_count", snapshot.review_event_count}};
}

namespace {

Json optional_label(const std::optional<Label>& l) {
  return l ? Json(l->text()) : Json(nullptr);
}

Json triples_array(const KnowledgeGraph& graph, const auto& ids) {
  Json arr = Json::array();
  for (const auto& id : ids) arr.push_back(triple_to_json(*graph.find(id)));
  return arr;
}

}  // namespace

Json query_payload(const KnowledgeGraph& graph, const Pattern& pattern) {
  Json arr = Json::array();
  for (const auto& t : match_pattern(graph, pattern)) arr.push_back(triple_to_json(t));
  Json p{{"subject", optional_label(pattern.subject)},
         {"predicate", optional_label(pattern.predicate)},
         {"object", optional_label(pattern.object)},
         {"negated", pattern.negated ? Json(*pattern.negated) : Json(nullptr)}};
  return Json{{"pattern", p}, {"count", arr.size()}, {"triples", arr}};
}

Json khop_payload(const KnowledgeGraph& graph, const Subgraph& subgraph) {
  return Json{{"source", subgraph.source},
              {"k", subgraph.k},
              {"entities", subgraph.distance},
              {"triple_count", subgraph.triples.size()},
              {"triples", triples_array(graph, subgraph.triples)},
              {"summary", render_summary(graph, subgraph)}};
}

Json paths_payload(const KnowledgeGraph& graph, const PathResult& paths) {
  Json arr = Json::array();
  std::set<TripleId> used;
  for (const auto& p : paths.paths) {
    arr.push_back(Json{{"length", p.triples.size()}, {"entities", p.entities}, {"triples", p.triples}});
    used.insert(p.triples.begin(), p.triples.end());
  }
  Json defs = Json::object();
  for (const auto& id : used) defs[id] = triple_to_json(*graph.find(id));
  return Json{{"source", paths.source},
              {"target", paths.target},
              {"count", paths.paths.size()},
              {"truncated", paths.truncated},
              {"paths", arr},
              {"triples", defs},
              {"summary", render_summary(graph, paths)}};
}

AgreementReport snapshot_agreement(const Snapshot& snapshot) {
  std::map<TripleId, Outcome> machine;
  for (const auto& [id, rec] : snapshot.validation) machine.emplace(id, rec.outcome);
  std::map<TripleId, Status> expert;
  for (const auto& [id, e] : snapshot.reviews) expert.emplace(id, e.expert_label);
  return agreement(machine, expert);
}

Json agreement_payload(const Snapshot& snapshot) {
  try {
    const auto r = snapshot_agreement(snapshot);
    return Json{{"agreement", r.agreement}, {"compared", r.compared}, {"matches", r.matches},
                {"excluded", r.excluded}, {"reviewed_count", snapshot.reviews.size()}};
  } catch (const NoOverlap&) {
    const std::size_t excluded = [&] {
      std::set<TripleId> ids;
      for (const auto& [id, _] : snapshot.validation) ids.insert(id);
      for (const auto& [id, _] : snapshot.reviews) ids.insert(id);
      return ids.size();
    }();
    return Json{{"agreement", nullptr}, {"compared", 0}, {"matches", 0}, {"excluded", excluded},
                {"reviewed_count", snapshot.reviews.size()},
                {"message", snapshot.reviews.empty() ? "no reviews yet"
                                                     : "no reviewed triple has a definite machine outcome"}};
  }
}

Json api_spec_payload() {
  auto ep = [](const char* method, const char* path, Json params, const char* description) {
    return Json{{"method", method}, {"path", path}, {"params", std::move(params)}, {"description", description}};
  };
  return Json{
      {"endpoints",
       Json::array({
           ep("GET", "/stats", Json::array(), "Triple, entity and relation counts with a status histogram."),
           ep("GET", "/triples", {"status", "page", "page_size"}, "Paged triples ordered by id."),
           ep("GET", "/triples/{id}", Json::array(), "One triple with its latest validation record and review."),
           ep("POST", "/triples/{id}/review", {"expert_label", "reviewer", "note"},
              "Records an expert verdict (JSON body)."),
           ep("GET", "/query", {"subject", "predicate", "object"}, "Pattern match; absent fields are wildcards."),
           ep("GET", "/graph/khop", {"source", "k", "direction"}, "Subgraph within k hops of an entity."),
           ep("GET", "/graph/paths", {"source", "target", "max_hops", "direction"},
              "Simple paths between two entities."),
           ep("GET", "/agreement", Json::array(), "Machine versus expert agreement."),
           ep("POST", "/chat", {"question"}, "Answer grounded in retrieved triples (JSON body)."),
           ep("GET", "/export.nt", Json::array(), "Published graph as N-Triples."),
           ep("GET", "/api/spec", Json::array(), "This listing."),
       })}};
}

std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

ApiResponse json_response(int status, const Json& j) { return ApiResponse{status, j.dump(), "application/json"}; }

ApiResponse error_response(int status, std::string_view kind, std::string_view message) {
  return json_response(status, Json{{"error", kind}, {"message", message}});
}

std::string param(const Params& params, const std::string& key) {
  auto it = params.find(key);
  return it == params.end() ? std::string() : it->second;
}

std::size_t size_param(const Params& params, const std::string& key, std::size_t fallback) {
  const auto raw = param(params, key);
  if (raw.empty()) return fallback;
  std::size_t n = 0;
  for (char c : raw) {
    if (c < '0' || c > '9' || n > 1'000'000'000) throw InvalidArgument(key + " must be a non-negative integer");
    n = n * 10 + static_cast<std::size_t>(c - '0');
  }
  return n;
}

Direction direction_param(const Params& params) {
  const auto raw = param(params, "direction");
  if (raw.empty()) return Direction::both;
  auto d = direction_from_string(raw);
  if (!d) throw InvalidArgument("direction must be out, in or both");
  return *d;
}

Label label_param(const Params& params, const std::string& key) {
  const auto raw = param(params, key);
  if (text::trim_ascii(raw).empty()) throw InvalidArgument("missing parameter: " + key);
  return Label::normalize(raw);
}

Json parse_body(const std::string& body) {
  try {
    auto j = Json::parse(body);
    if (!j.is_object()) throw InvalidArgument("request body must be a JSON object");
    return j;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("invalid JSON body: ") + e.what());
  }
}

}  // namespace

ApiService::ApiService(ProjectStore store, ClientSet clients, std::size_t chat_budget, Clock clock)
    : store_(std::move(store)),
      clients_(std::move(clients)),
      chat_budget_(chat_budget),
      clock_(clock ? std::move(clock) : Clock(utc_now_iso8601)) {
  reload();
}

std::shared_ptr<const Snapshot> ApiService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void ApiService::reload() {
  auto fresh = std::make_shared<const Snapshot>(store_.load());
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(fresh);
}

ApiResponse ApiService::handle(const std::string& method, const std::string& path, const Params& params,
                               const std::string& body) {
  try {
    if (method == "GET") {
      if (path == "/stats") return stats();
      if (path == "/triples") return triples(params);
      if (path == "/query") return query(params);
      if (path == "/graph/khop") return khop(params);
      if (path == "/graph/paths") return paths(params);
      if (path == "/agreement") return agreement();
      if (path == "/export.nt") return export_nt();
      if (path == "/api/spec") return json_response(200, api_spec_payload());
      if (path.starts_with("/triples/")) {
        const auto id = path.substr(9);
        if (!id.empty() && id.find('/') == std::string::npos) return triple(id);
      }
    } else if (method == "POST") {
      if (path == "/chat") return chat(body);
      if (path.starts_with("/triples/") && path.ends_with("/review")) {
        const auto id = path.substr(9, path.size() - 9 - 7);
        if (!id.empty() && id.find('/') == std::string::npos) return review(id, body);
      }
    }
    return error_response(404, "NotFound", "no route for " + method + " " + path);
  } catch (const Error& e) {
    const auto kind = e.kind();
    int status = 500;
    if (kind == "InvalidArgument" || kind == "EmptyLabel") status = 400;
    else if (kind == "UnknownEntity" || kind == "UnknownTripleId") status = 404;
    else if (kind == "LlmUnavailable" || kind == "LlmMalformedOutput" || kind == "ReplayMiss") status = 503;
    return error_response(status, kind, e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

ApiResponse ApiService::stats() const { return json_response(200, stats_payload(*snapshot())); }

ApiResponse ApiService::triples(const Params& params) const {
  const auto snap = snapshot();
  std::optional<Status> filter;
  if (const auto raw = param(params, "status"); !raw.empty()) {
    filter = status_from_string(raw);
    if (!filter) throw InvalidArgument("unknown status: " + raw);
  }
  const std::size_t page = size_param(params, "page", 1);
  if (page == 0) throw InvalidArgument("page starts at 1");
  std::size_t page_size = size_param(params, "page_size", kDefaultPageSize);
  if (page_size == 0) throw InvalidArgument("page_size must be positive");
  page_size = std::min(page_size, kMaxPageSize);

  std::vector<const Triple*> selected;
  for (const auto& [_, t] : snap->graph.triples()) {
    if (!filter || t.status == *filter) selected.push_back(&t);
  }
  Json items = Json::array();
  const std::size_t begin = (page - 1) * page_size;
  for (std::size_t i = begin; i < selected.size() && i < begin + page_size; ++i) {
    items.push_back(triple_to_json(*selected[i]));
  }
  return json_response(200, Json{{"page", page},
                                 {"page_size", page_size},
                                 {"total", selected.size()},
                                 {"page_count", (selected.size() + page_size - 1) / page_size},
                                 {"triples", items}});
}

ApiResponse ApiService::triple(const std::string& id) const {
  const auto snap = snapshot();
  const Triple* t = snap->graph.find(id);
  if (!t) return error_response(404, "UnknownTripleId", "no triple with id " + id);
  Json out{{"triple", triple_to_json(*t)}, {"validation", nullptr}, {"review", nullptr}};
  if (auto v = snap->validation.find(id); v != snap->validation.end()) out["validation"] = v->second;
  if (auto r = snap->reviews.find(id); r != snap->reviews.end()) {
    out["review"] = Json{{"expert_label", std::string(to_string(r->second.expert_label))},
                         {"reviewer", r->second.reviewer},
                         {"note", r->second.note},
                         {"timestamp", r->second.timestamp}};
  }
  return json_response(200, out);
}

ApiResponse ApiService::review(const std::string& id, const std::string& body) {
  const auto j = parse_body(body);
  if (!j.contains("expert_label") || !j.at("expert_label").is_string()) {
    throw InvalidArgument("expert_label is required");
  }
  const auto raw = j.at("expert_label").get<std::string>();
  std::optional<Status> label;
  if (raw == "expert-factual" || raw == "factual") label = Status::expert_factual;
  else if (raw == "expert-non-factual" || raw == "non-factual") label = Status::expert_non_factual;
  if (!label) throw InvalidArgument("expert_label must be expert-factual or expert-non-factual");

  ReviewEvent event;
  event.triple_id = id;
  event.expert_label = *label;
  event.reviewer = j.value("reviewer", "");
  event.note = j.value("note", "");

  std::lock_guard writer(writer_mutex_);
  const auto current = snapshot();
  if (!current->graph.contains(id)) return error_response(409, "UnknownTripleId", "no triple with id " + id);
  event.timestamp = clock_();
  store_.append_review(event);
  auto next = std::make_shared<Snapshot>(*current);
  next->graph.apply_expert_status(id, event.expert_label);
  next->reviews.insert_or_assign(id, event);
  ++next->review_event_count;
  const Json out{{"triple", triple_to_json(*next->graph.find(id))},
                 {"review", Json{{"expert_label", std::string(to_string(event.expert_label))},
                                 {"reviewer", event.reviewer},
                                 {"note", event.note},
                                 {"timestamp", event.timestamp}}}};
  {
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = std::move(next);
  }
  return json_response(200, out);
}

ApiResponse ApiService::query(const Params& params) const {
  const auto pattern = Pattern::from_raw(param(params, "subject"), param(params, "predicate"), param(params, "object"));
  return json_response(200, query_payload(snapshot()->graph, pattern));
}

ApiResponse ApiService::khop(const Params& params) const {
  const auto snap = snapshot();
  const auto source = label_param(params, "source");
  const auto sub = k_hop(snap->graph, source, size_param(params, "k", 1), direction_param(params));
  return json_response(200, khop_payload(snap->graph, sub));
}

ApiResponse ApiService::paths(const Params& params) const {
  const auto snap = snapshot();
  const auto source = label_param(params, "source");
  const auto target = label_param(params, "target");
  const auto result =
      enumerate_paths(snap->graph, source, target, size_param(params, "max_hops", 3), direction_param(params));
  return json_response(200, paths_payload(snap->graph, result));
}

ApiResponse ApiService::agreement() const { return json_response(200, agreement_payload(*snapshot())); }

ApiResponse ApiService::chat(const std::string& body) const {
  const auto j = parse_body(body);
  if (!j.contains("question") || !j.at("question").is_string()) throw InvalidArgument("question is required");
  const auto question = j.at("question").get<std::string>();
  if (text::trim_ascii(question).empty()) throw InvalidArgument("question is empty");
  if (!clients_.llm) throw LlmUnavailable("no language model configured");
  const auto snap = snapshot();
  const auto answer = chat_answer(question, snap->graph, *clients_.llm, chat_budget_);
  return json_response(200, Json{{"answer", answer.answer},
                                 {"cited", answer.cited},
                                 {"statements", triples_array(snap->graph, answer.cited)}});
}

ApiResponse ApiService::export_nt() const {
  return ApiResponse{200, export_ntriples(*snapshot()), "application/n-triples"};
}

struct HttpServer::Impl {
  ApiService& service;
  std::string cors_origin;
  httplib::Server server;

  Impl(ApiService& s, std::string origin) : service(s), cors_origin(std::move(origin)) {
    server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
      Params params;
      for (const auto& [k, v] : req.params) params.emplace(k, v);
      const auto r = service.handle(req.method, req.path, params, req.body);
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
    server.Get(".*", dispatch);
    server.Post(".*", dispatch);
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
};

HttpServer::HttpServer(ApiService& service, std::string cors_origin)
    : impl_(std::make_unique<Impl>(service, std::move(cors_origin))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("IoError", "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace asgmkg
