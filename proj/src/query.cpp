#include "asgmkg/query.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "asgmkg/error.hpp"
#include "asgmkg/text.hpp"

namespace asgmkg {

Pattern Pattern::from_raw(std::string_view subject, std::string_view predicate,
                          std::string_view object) {
  Pattern p;
  auto opt = [](std::string_view raw) -> std::optional<Label> {
    if (text::trim_ascii(raw).empty()) return std::nullopt;
    try {
      return Label::normalize(raw);
    } catch (const EmptyLabel&) {
      return std::nullopt;
    }
  };
  p.subject = opt(subject);
  p.object = opt(object);
  if (auto pred = opt(predicate)) {
    auto parts = split_negation(*pred);
    p.predicate = parts.predicate;
    if (parts.negated) p.negated = true;
  }
  if (!p.subject && !p.predicate && !p.object) {
    throw InvalidArgument("a pattern needs at least one of subject, predicate, object");
  }
  return p;
}

std::vector<Triple> match_pattern(const KnowledgeGraph& graph, const Pattern& pattern) {
  std::vector<const std::set<TripleId>*> sets;
  if (pattern.subject) sets.push_back(&graph.with_subject(pattern.subject->text()));
  if (pattern.predicate) sets.push_back(&graph.with_predicate(pattern.predicate->text()));
  if (pattern.object) sets.push_back(&graph.with_object(pattern.object->text()));
  std::vector<Triple> out;
  if (sets.empty()) return out;
  const auto* smallest = *std::min_element(
      sets.begin(), sets.end(), [](const auto* a, const auto* b) { return a->size() < b->size(); });
  for (const auto& id : *smallest) {
    const Triple* t = graph.find(id);
    if (!t) continue;
    if (pattern.subject && t->subject != *pattern.subject) continue;
    if (pattern.predicate && t->predicate != *pattern.predicate) continue;
    if (pattern.object && t->object != *pattern.object) continue;
    if (pattern.negated && t->negated != *pattern.negated) continue;
    out.push_back(*t);
  }
  return out;
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::out: return "out";
    case Direction::in: return "in";
    case Direction::both: return "both";
  }
  return "both";
}

std::optional<Direction> direction_from_string(std::string_view s) {
  if (s == "out") return Direction::out;
  if (s == "in") return Direction::in;
  if (s == "both") return Direction::both;
  return std::nullopt;
}

namespace {

struct Step {
  const TripleId* triple;
  const std::string* next;
};

// Edges leaving `entity` under `direction`, ordered by triple id.
std::vector<Step> steps_from(const KnowledgeGraph& graph, const std::string& entity, Direction direction) {
  std::vector<Step> out;
  auto add = [&](const std::set<TripleId>& ids, bool from_subject) {
    for (const auto& id : ids) {
      const Triple* t = graph.find(id);
      out.push_back({&t->id, from_subject ? &t->object.text() : &t->subject.text()});
    }
  };
  if (direction != Direction::in) add(graph.with_subject(entity), true);
  if (direction != Direction::out) add(graph.with_object(entity), false);
  std::stable_sort(out.begin(), out.end(), [](const Step& a, const Step& b) { return *a.triple < *b.triple; });
  return out;
}

Direction reversed(Direction d) {
  if (d == Direction::out) return Direction::in;
  if (d == Direction::in) return Direction::out;
  return d;
}

}  // namespace

Subgraph k_hop(const KnowledgeGraph& graph, const Label& source, std::size_t k, Direction direction) {
  if (!graph.has_entity(source.text())) throw UnknownEntity("unknown entity: " + source.text());
  Subgraph sg;
  sg.source = source.text();
  sg.k = k;
  sg.distance[sg.source] = 0;
  std::vector<std::string> frontier{sg.source};
  for (std::size_t d = 0; d < k && !frontier.empty(); ++d) {
    std::vector<std::string> next;
    for (const auto& e : frontier) {
      for (const auto& step : steps_from(graph, e, direction)) {
        sg.triples.insert(*step.triple);
        if (sg.distance.emplace(*step.next, d + 1).second) next.push_back(*step.next);
      }
    }
    frontier = std::move(next);
  }
  return sg;
}

PathResult enumerate_paths(const KnowledgeGraph& graph, const Label& source, const Label& target,
                           std::size_t max_hops, Direction direction, const PathLimits& limits) {
  if (source == target) throw InvalidArgument("source and target must differ");
  if (max_hops == 0) throw InvalidArgument("max_hops must be positive");
  if (max_hops > limits.max_hops_ceiling) {
    throw InvalidArgument("max_hops exceeds the ceiling of " + std::to_string(limits.max_hops_ceiling));
  }
  if (!graph.has_entity(source.text())) throw UnknownEntity("unknown entity: " + source.text());
  if (!graph.has_entity(target.text())) throw UnknownEntity("unknown entity: " + target.text());

  PathResult result;
  result.source = source.text();
  result.target = target.text();

  // Distance of every entity to the target, for pruning.
  std::map<std::string, std::size_t> to_target{{result.target, 0}};
  {
    std::deque<std::string> queue{result.target};
    while (!queue.empty()) {
      const auto e = queue.front();
      queue.pop_front();
      const auto d = to_target[e];
      if (d >= max_hops) continue;
      for (const auto& step : steps_from(graph, e, reversed(direction))) {
        if (to_target.emplace(*step.next, d + 1).second) queue.push_back(*step.next);
      }
    }
  }
  if (!to_target.count(result.source)) return result;

  std::map<std::string, std::vector<Step>> adjacency;
  auto adj = [&](const std::string& e) -> const std::vector<Step>& {
    auto it = adjacency.find(e);
    if (it == adjacency.end()) it = adjacency.emplace(e, steps_from(graph, e, direction)).first;
    return it->second;
  };

  std::vector<TripleId> triples;
  std::vector<std::string> entities{result.source};
  std::set<std::string> on_path{result.source};
  bool stop = false;
  std::function<void(const std::string&, std::size_t)> dfs = [&](const std::string& at, std::size_t length) {
    if (stop) return;
    if (triples.size() == length) {
      if (at == result.target) {
        if (result.paths.size() == limits.result_cap) {
          result.truncated = true;
          stop = true;
          return;
        }
        result.paths.push_back(Path{triples, entities});
      }
      return;
    }
    if (at == result.target) return;
    const std::size_t remaining = length - triples.size() - 1;
    for (const auto& step : adj(at)) {
      const auto& next = *step.next;
      if (on_path.count(next)) continue;
      auto it = to_target.find(next);
      if (it == to_target.end() || it->second > remaining) continue;
      triples.push_back(*step.triple);
      entities.push_back(next);
      on_path.insert(next);
      dfs(next, length);
      on_path.erase(next);
      entities.pop_back();
      triples.pop_back();
      if (stop) return;
    }
  };
  for (std::size_t length = 1; length <= max_hops && !stop; ++length) dfs(result.source, length);
  return result;
}

std::string triple_sentence(const Triple& t) {
  return t.subject.text() + " " + t.predicate_surface() + " " + t.object.text() + ".";
}

std::string render_summary(const KnowledgeGraph& graph, const Subgraph& subgraph) {
  if (subgraph.triples.empty()) {
    return "No statements within " + std::to_string(subgraph.k) + (subgraph.k == 1 ? " hop." : " hops.");
  }
  std::vector<std::pair<std::size_t, const Triple*>> rows;
  for (const auto& id : subgraph.triples) {
    const Triple* t = graph.find(id);
    if (!t) continue;
    std::size_t hop = subgraph.k;
    for (const auto* e : {&t->subject.text(), &t->object.text()}) {
      auto it = subgraph.distance.find(*e);
      if (it != subgraph.distance.end()) hop = std::min(hop, it->second);
    }
    rows.emplace_back(hop, t);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second->id < b.second->id;
  });
  std::vector<std::string> lines;
  for (const auto& [_, t] : rows) lines.push_back(triple_sentence(*t));
  return text::join(lines, "\n");
}

std::string render_summary(const KnowledgeGraph& graph, const PathResult& paths) {
  if (paths.paths.empty()) return "No paths found between " + paths.source + " and " + paths.target + ".";
  std::ostringstream out;
  for (std::size_t i = 0; i < paths.paths.size(); ++i) {
    const auto& p = paths.paths[i];
    if (i) out << "\n\n";
    out << "Path " << (i + 1) << " (" << p.triples.size() << (p.triples.size() == 1 ? " hop" : " hops")
        << "): " << text::join(p.entities, " -> ");
    for (const auto& id : p.triples) {
      if (const Triple* t = graph.find(id)) out << "\n" << triple_sentence(*t);
    }
  }
  if (paths.truncated) out << "\n\n(results truncated)";
  return out.str();
}

std::string paraphrase_summary(const std::string& summary, LlmClient& llm) {
  return llm.complete(
      "### TASK: summarize-statements\n"
      "Rewrite the statements below as a short, readable paragraph. Do not add facts.\n"
      "Summary:\n" + summary + "\n");
}

std::vector<TripleId> retrieve_for_chat(const std::string& question, const KnowledgeGraph& graph,
                                        std::size_t budget) {
  const auto q = text::keyword_tokens(question);
  const std::set<std::string> qset(q.begin(), q.end());
  std::vector<std::pair<std::size_t, const TripleId*>> scored;
  for (const auto& [id, t] : graph.triples()) {
    const auto toks = text::keyword_tokens(t.subject.text() + " " + t.predicate.text() + " " + t.object.text());
    const std::set<std::string> tset(toks.begin(), toks.end());
    std::size_t overlap = 0;
    for (const auto& tok : tset) overlap += qset.count(tok);
    if (overlap > 0) scored.emplace_back(overlap, &id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : *a.second < *b.second;
  });
  std::vector<TripleId> out;
  for (std::size_t i = 0; i < scored.size() && i < budget; ++i) out.push_back(*scored[i].second);
  return out;
}

std::string build_chat_prompt(const std::string& question, const KnowledgeGraph& graph,
                              const std::vector<TripleId>& context) {
  std::ostringstream p;
  p << "### TASK: chat\n"
       "Answer the question using only the statements listed below. If they do not answer it,\n"
       "say so.\n"
       "Statements:\n";
  for (const auto& id : context) {
    if (const Triple* t = graph.find(id)) p << "- [" << id << "] " << triple_sentence(*t) << "\n";
  }
  p << "\nQuestion: " << question << "\n";
  return p.str();
}

ChatAnswer chat_answer(const std::string& question, const KnowledgeGraph& graph, LlmClient& llm,
                       std::size_t retrieval_budget) {
  ChatAnswer a;
  a.cited = retrieve_for_chat(question, graph, retrieval_budget);
  if (a.cited.empty()) {
    a.answer = std::string(kNoSupportReply);
    return a;
  }
  a.answer = llm.complete(build_chat_prompt(question, graph, a.cited));
  return a;
}

}  // namespace asgmkg
