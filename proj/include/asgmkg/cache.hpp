#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "asgmkg/clients.hpp"

namespace asgmkg {

enum class ClientMode { live, record, replay, fixture };

std::string_view to_string(ClientMode mode);
// Throws ConfigError.
ClientMode client_mode_from_string(std::string_view name);

struct ClientRequest {
  std::string role;     // llm | search | pagerank
  std::string payload;  // canonical text form

  std::string cache_key() const;
};

struct CacheEntry {
  std::string cache_key;
  std::string role;
  std::string payload;
  std::string response;
  std::string fetched_at;
  std::string source;  // live | replay | fixture
};

// One JSON file per cache key under `dir`. Entries are immutable once
// written.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<CacheEntry> get(const std::string& key) const;
  // No-op if the key already exists.
  void put(const CacheEntry& entry);

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& key) const;
  std::filesystem::path dir_;
};

class CachedCaller {
 public:
  using Producer = std::function<std::string()>;

  CachedCaller(ClientMode mode, std::shared_ptr<ResponseCache> cache);

  // live = `live()` with no cache; record = cache hit or `live()` persisted
  // (at most one live call per key); replay = cache only, ReplayMiss
  // otherwise; fixture = `fixture()`.
  std::string call(const ClientRequest& request, const Producer& live, const Producer& fixture);

  ClientMode mode() const noexcept { return mode_; }

 private:
  std::mutex& key_mutex(const std::string& key);

  ClientMode mode_;
  std::shared_ptr<ResponseCache> cache_;
  std::mutex table_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> key_mutexes_;
};

// Role decorators that route every call through a CachedCaller. Either inner
// client may be null when the mode never reaches it.
class CachedLlm : public LlmClient {
 public:
  CachedLlm(std::shared_ptr<CachedCaller> caller, std::shared_ptr<LlmClient> live,
            std::shared_ptr<LlmClient> fixture);
  std::string complete(const std::string& prompt) override;

 private:
  std::shared_ptr<CachedCaller> caller_;
  std::shared_ptr<LlmClient> live_;
  std::shared_ptr<LlmClient> fixture_;
};

class CachedSearch : public SearchClient {
 public:
  CachedSearch(std::shared_ptr<CachedCaller> caller, std::shared_ptr<SearchClient> live,
               std::shared_ptr<SearchClient> fixture);
  std::vector<SearchHit> search(const std::string& query, std::size_t n) override;
  std::string fetch(const std::string& url) override;

 private:
  std::shared_ptr<CachedCaller> caller_;
  std::shared_ptr<SearchClient> live_;
  std::shared_ptr<SearchClient> fixture_;
};

class CachedPageRank : public PageRankClient {
 public:
  CachedPageRank(std::shared_ptr<CachedCaller> caller, std::shared_ptr<PageRankClient> live,
                 std::shared_ptr<PageRankClient> fixture);
  PageRankResult page_rank(const std::string& domain) override;

 private:
  std::shared_ptr<CachedCaller> caller_;
  std::shared_ptr<PageRankClient> live_;
  std::shared_ptr<PageRankClient> fixture_;
};

}  // namespace asgmkg
