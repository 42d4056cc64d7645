#include "asgmkg/clients.hpp"

#include <cmath>

#include "asgmkg/error.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

std::vector<PageRankResult> PageRankClient::page_rank_batch(std::span<const std::string> domains) {
  std::vector<PageRankResult> out;
  out.reserve(domains.size());
  for (const auto& d : domains) out.push_back(page_rank(d));
  return out;
}

double checked_score(double raw) {
  if (!std::isfinite(raw) || raw < 0.0 || raw > 10.0) {
    throw ProtocolError("page-rank score out of range [0,10]: " + std::to_string(raw));
  }
  return raw;
}

std::string domain_of(const std::string& url) {
  std::string_view rest = url;
  if (auto p = rest.find("://"); p != std::string_view::npos) rest.remove_prefix(p + 3);
  const auto end = rest.find_first_of("/?#");
  auto host = rest.substr(0, end);
  if (auto at = host.rfind('@'); at != std::string_view::npos) host.remove_prefix(at + 1);
  if (auto colon = host.rfind(':'); colon != std::string_view::npos && host.find(']') == host.npos) {
    host = host.substr(0, colon);
  }
  auto lower = text::to_lower(host);
  if (lower.starts_with("www.")) lower.erase(0, 4);
  return lower;
}

}  // namespace asgmkg
