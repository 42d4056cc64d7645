#pragma once

#include <string>
#include <string_view>

#include "asgmkg/label.hpp"

namespace asgmkg {

enum class IriKind { entity, relation };

inline constexpr std::string_view kIriPrefix = "urn:asgmkg:";

// `urn:asgmkg:<kind>:<slug>`; spaces become `_`, every byte outside
// [a-z0-9-] (including a literal `_`) is percent-encoded.
std::string mint_iri(const Label& label, IriKind kind);

struct ParsedIri {
  IriKind kind;
  Label label;
};

// Inverse of mint_iri. Throws MalformedIri.
ParsedIri parse_iri(std::string_view iri);

std::string_view to_string(IriKind kind);

}  // namespace asgmkg
