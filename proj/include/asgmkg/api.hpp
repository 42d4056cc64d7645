#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "asgmkg/bench.hpp"
#include "asgmkg/json_io.hpp"
#include "asgmkg/query.hpp"
#include "asgmkg/store.hpp"

namespace asgmkg {

// Payload builders shared by the CLI and the HTTP API so both return the
// same bytes for the same parameters.
Json stats_payload(const Snapshot& snapshot);
Json query_payload(const KnowledgeGraph& graph, const Pattern& pattern);
Json khop_payload(const KnowledgeGraph& graph, const Subgraph& subgraph);
Json paths_payload(const KnowledgeGraph& graph, const PathResult& paths);
Json agreement_payload(const Snapshot& snapshot);
AgreementReport snapshot_agreement(const Snapshot& snapshot);
Json api_spec_payload();

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using Params = std::map<std::string, std::string>;

inline constexpr std::size_t kDefaultPageSize = 50;
inline constexpr std::size_t kMaxPageSize = 500;

// Request handling over an immutable snapshot. Reviews funnel through one
// writer that appends to the log and swaps in a new snapshot.
class ApiService {
 public:
  using Clock = std::function<std::string()>;

  ApiService(ProjectStore store, ClientSet clients, std::size_t chat_budget = 10,
             Clock clock = {});

  std::shared_ptr<const Snapshot> snapshot() const;
  void reload();

  ApiResponse handle(const std::string& method, const std::string& path, const Params& params,
                     const std::string& body = {});

  ApiResponse stats() const;
  ApiResponse triples(const Params& params) const;
  ApiResponse triple(const std::string& id) const;
  ApiResponse review(const std::string& id, const std::string& body);
  ApiResponse query(const Params& params) const;
  ApiResponse khop(const Params& params) const;
  ApiResponse paths(const Params& params) const;
  ApiResponse agreement() const;
  ApiResponse chat(const std::string& body) const;
  ApiResponse export_nt() const;

 private:
  ProjectStore store_;
  ClientSet clients_;
  std::size_t chat_budget_;
  Clock clock_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::mutex writer_mutex_;
};

// cpp-httplib front end with CORS headers.
class HttpServer {
 public:
  explicit HttpServer(ApiService& service, std::string cors_origin = "*");
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread;
  // returns the bound port.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  bool listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

std::string utc_now_iso8601();

}  // namespace asgmkg
