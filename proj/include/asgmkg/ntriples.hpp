#pragma once

#include <string>
#include <string_view>

#include "asgmkg/graph.hpp"

namespace asgmkg {

// One `<s> <p> <o> .` line per triple, LF-terminated, lines sorted.
std::string serialize_ntriples(const KnowledgeGraph& graph);

// Statuses come back pending and provenance empty. Blank lines and `#`
// comments are skipped. Throws ParseError / MalformedIri.
KnowledgeGraph parse_ntriples(std::string_view text);

}  // namespace asgmkg
