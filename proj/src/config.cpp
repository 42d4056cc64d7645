#include "asgmkg/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "asgmkg/error.hpp"
#include "asgmkg/fixture_clients.hpp"
#include "asgmkg/http_clients.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

std::map<std::string, std::string> parse_config_text(std::string_view body) {
  std::map<std::string, std::string> out;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(body)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = text::trim_ascii(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": bad section header");
      section = std::string(text::trim_ascii(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const auto key = std::string(text::trim_ascii(line.substr(0, eq)));
    auto value = std::string(text::trim_ascii(line.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    out[section.empty() ? key : section + "." + key] = value;
  }
  return out;
}

namespace {

std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(v, &pos);
    if (pos != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got \"" + v + "\"");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got \"" + v + "\"");
  }
}

}  // namespace

void apply_config_entries(ProjectConfig& c, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, v] : entries) {
    if (key == "das.n_hits") c.das.n_hits = to_size(key, v);
    else if (key == "das.k_pages") c.das.k_pages = to_size(key, v);
    else if (key == "das.tau" || key == "das.relevance_threshold") c.das.relevance_threshold = to_double(key, v);
    else if (key == "das.min_evidence") c.das.min_evidence = to_size(key, v);
    else if (key == "das.content_words") c.das.content_word_budget = to_size(key, v);
    else if (key == "das.parallelism") c.das.parallelism = to_size(key, v);
    else if (key == "das.judge_mode") {
      if (v == "truncate") c.das.judge_mode = JudgeMode::truncate;
      else if (v == "summarize") c.das.judge_mode = JudgeMode::summarize;
      else throw ConfigError("das.judge_mode: expected truncate or summarize");
    }
    else if (key == "extract.chunk_words") c.extract.max_words = to_size(key, v);
    else if (key == "extract.parallelism") c.extract.parallelism = to_size(key, v);
    else if (key == "clients.mode") c.mode = client_mode_from_string(v);
    else if (key == "clients.fixtures") c.fixtures = v;
    else if (key == "clients.cache_dir") c.cache_dir = v;
    else if (key == "clients.search_rate") c.search_rate = to_double(key, v);
    else if (key == "clients.pagerank_rate") c.pagerank_rate = to_double(key, v);
    else if (key == "clients.llm_endpoint") c.endpoints.llm_endpoint = v;
    else if (key == "clients.llm_model") c.endpoints.llm_model = v;
    else if (key == "clients.search_endpoint") c.endpoints.search_endpoint = v;
    else if (key == "clients.pagerank_endpoint") c.endpoints.pagerank_endpoint = v;
    else if (key == "chat.budget") c.chat_budget = to_size(key, v);
    else throw ConfigError("unknown configuration key: " + key);
  }
}

void apply_environment(ProjectConfig& c) {
  auto env = [](const char* name, std::string& into) {
    if (const char* v = std::getenv(name); v && *v) into = v;
  };
  env("SEARCH_ENDPOINT", c.endpoints.search_endpoint);
  env("SEARCH_KEY", c.endpoints.search_key);
  env("PAGERANK_ENDPOINT", c.endpoints.pagerank_endpoint);
  env("PAGERANK_KEY", c.endpoints.pagerank_key);
  env("LLM_ENDPOINT", c.endpoints.llm_endpoint);
  env("LLM_KEY", c.endpoints.llm_key);
}

ProjectConfig load_config(const std::filesystem::path& root) {
  ProjectConfig c;
  const auto file = root / kConfigFileName;
  if (std::filesystem::exists(file)) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_entries(c, parse_config_text(ss.str()));
  }
  if (c.fixtures.empty()) c.fixtures = "fixtures.json";
  if (c.cache_dir.empty()) c.cache_dir = "cache";
  if (c.fixtures.is_relative()) c.fixtures = root / c.fixtures;
  if (c.cache_dir.is_relative()) c.cache_dir = root / c.cache_dir;
  apply_environment(c);
  return c;
}

ClientSet build_clients(const ProjectConfig& config) {
  auto cache = std::make_shared<ResponseCache>(config.cache_dir);
  auto caller = std::make_shared<CachedCaller>(config.mode, cache);
  ClientSet fixture;
  ClientSet live;
  if (config.mode == ClientMode::fixture) {
    fixture = make_fixture_clients(std::make_shared<const FixtureTables>(load_fixture_tables(config.fixtures)));
  }
  if (config.mode == ClientMode::live || config.mode == ClientMode::record) {
    auto transport = std::make_shared<HttplibTransport>();
    const auto& e = config.endpoints;
    live.llm = std::make_shared<HttpLlmClient>(transport, e.llm_endpoint, e.llm_key, e.llm_model);
    live.search = std::make_shared<HttpSearchClient>(transport, e.search_endpoint,
                                                     std::make_shared<TokenBucket>(config.search_rate));
    live.pagerank = std::make_shared<HttpPageRankClient>(
        transport, e.pagerank_endpoint, e.pagerank_key, std::make_shared<TokenBucket>(config.pagerank_rate));
  }
  return ClientSet{std::make_shared<CachedLlm>(caller, live.llm, fixture.llm),
                   std::make_shared<CachedSearch>(caller, live.search, fixture.search),
                   std::make_shared<CachedPageRank>(caller, live.pagerank, fixture.pagerank)};
}

}  // namespace asgmkg
