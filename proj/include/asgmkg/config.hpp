#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "asgmkg/cache.hpp"
#include "asgmkg/das.hpp"
#include "asgmkg/extract.hpp"

namespace asgmkg {

// `[section]` headers and `key = value` lines; `#` starts a comment, values
// may be double-quoted. Keys come back as "section.key". Throws ConfigError.
std::map<std::string, std::string> parse_config_text(std::string_view text);

struct ServiceEndpoints {
  std::string llm_endpoint;
  std::string llm_key;
  std::string llm_model = "gpt-4";
  std::string search_endpoint = "https://api.duckduckgo.com/";
  std::string search_key;
  std::string pagerank_endpoint = "https://openpagerank.com/api/v1.0/getPageRank";
  std::string pagerank_key;
};

struct ProjectConfig {
  DasConfig das;
  ExtractionOptions extract;
  ClientMode mode = ClientMode::fixture;
  std::filesystem::path fixtures;   // fixture tables (JSON)
  std::filesystem::path cache_dir;  // record/replay cache
  ServiceEndpoints endpoints;
  double search_rate = 1.0;    // requests per second
  double pagerank_rate = 1.0;
  std::size_t chat_budget = 10;
};

inline constexpr std::string_view kConfigFileName = "asgmkg.toml";

// Defaults, then `<root>/asgmkg.toml` if present, then the SEARCH_ENDPOINT,
// SEARCH_KEY, PAGERANK_ENDPOINT, PAGERANK_KEY, LLM_ENDPOINT, LLM_KEY
// environment variables.
ProjectConfig load_config(const std::filesystem::path& root);
void apply_config_entries(ProjectConfig& config, const std::map<std::string, std::string>& entries);
void apply_environment(ProjectConfig& config);

// Wires the clients for `config.mode`: fixture tables, the response cache
// and HTTP adapters as the mode requires.
ClientSet build_clients(const ProjectConfig& config);

}  // namespace asgmkg
