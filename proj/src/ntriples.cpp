#include "asgmkg/ntriples.hpp"

#include <algorithm>
#include <vector>

#include "asgmkg/error.hpp"
#include "asgmkg/iri.hpp"

namespace asgmkg {

namespace {

std::string predicate_iri(const Triple& t) {
  return mint_iri(Label::normalize(t.predicate_surface()), IriKind::relation);
}

bool is_blank(char c) { return c == ' ' || c == '\t'; }

// Reads `<...>` at `pos`, advancing past it.
std::string_view read_iri(std::string_view line, std::size_t& pos, std::size_t line_no) {
  while (pos < line.size() && is_blank(line[pos])) ++pos;
  if (pos >= line.size() || line[pos] != '<') throw ParseError(line_no, "expected '<'");
  const auto end = line.find('>', pos + 1);
  if (end == std::string_view::npos) throw ParseError(line_no, "unterminated IRI");
  auto iri = line.substr(pos + 1, end - pos - 1);
  pos = end + 1;
  if (pos < line.size() && !is_blank(line[pos])) {
    throw ParseError(line_no, "missing whitespace after IRI");
  }
  return iri;
}

}  // namespace

std::string serialize_ntriples(const KnowledgeGraph& graph) {
  std::vector<std::string> lines;
  lines.reserve(graph.size());
  for (const auto& [_, t] : graph.triples()) {
    std::string line = "<";
    line += mint_iri(t.subject, IriKind::entity);
    line += "> <";
    line += predicate_iri(t);
    line += "> <";
    line += mint_iri(t.object, IriKind::entity);
    line += "> .";
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

KnowledgeGraph parse_ntriples(std::string_view text) {
  KnowledgeGraph graph;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;

    std::size_t pos = 0;
    const auto s_iri = read_iri(line, pos, line_no);
    const auto p_iri = read_iri(line, pos, line_no);
    const auto o_iri = read_iri(line, pos, line_no);
    while (pos < line.size() && is_blank(line[pos])) ++pos;
    if (pos >= line.size() || line[pos] != '.') throw ParseError(line_no, "missing terminal ' .'");
    ++pos;
    while (pos < line.size() && is_blank(line[pos])) ++pos;
    if (pos != line.size()) throw ParseError(line_no, "trailing content after '.'");

    auto s = parse_iri(s_iri);
    auto p = parse_iri(p_iri);
    auto o = parse_iri(o_iri);
    if (s.kind != IriKind::entity || o.kind != IriKind::entity) {
      throw ParseError(line_no, "subject and object must be entity IRIs");
    }
    if (p.kind != IriKind::relation) throw ParseError(line_no, "predicate must be a relation IRI");
    graph.upsert(make_triple(s.label, p.label, o.label));
  }
  return graph;
}

}  // namespace asgmkg
