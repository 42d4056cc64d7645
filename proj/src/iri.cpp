#include "asgmkg/iri.hpp"

#include "asgmkg/error.hpp"

namespace asgmkg {

namespace {

bool is_unreserved(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string_view to_string(IriKind kind) {
  return kind == IriKind::entity ? "entity" : "relation";
}

std::string mint_iri(const Label& label, IriKind kind) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string iri(kIriPrefix);
  iri += to_string(kind);
  iri += ':';
  for (unsigned char c : label.text()) {
    if (c == ' ') {
      iri += '_';
    } else if (is_unreserved(c)) {
      iri += static_cast<char>(c);
    } else {
      iri += '%';
      iri += kHex[c >> 4];
      iri += kHex[c & 0xF];
    }
  }
  return iri;
}

ParsedIri parse_iri(std::string_view iri) {
  if (iri.substr(0, kIriPrefix.size()) != kIriPrefix) {
    throw MalformedIri("IRI outside the urn:asgmkg: scheme: " + std::string(iri));
  }
  auto rest = iri.substr(kIriPrefix.size());
  IriKind kind;
  if (rest.starts_with("entity:")) {
    kind = IriKind::entity;
    rest.remove_prefix(7);
  } else if (rest.starts_with("relation:")) {
    kind = IriKind::relation;
    rest.remove_prefix(9);
  } else {
    throw MalformedIri("unknown IRI kind: " + std::string(iri));
  }
  std::string decoded;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const char c = rest[i];
    if (c == '_') {
      decoded += ' ';
    } else if (c == '%') {
      const int hi = i + 1 < rest.size() ? hex_value(rest[i + 1]) : -1;
      const int lo = i + 2 < rest.size() ? hex_value(rest[i + 2]) : -1;
      if (hi < 0 || lo < 0) throw MalformedIri("bad percent escape in " + std::string(iri));
      decoded += static_cast<char>(hi * 16 + lo);
      i += 2;
    } else if (is_unreserved(static_cast<unsigned char>(c))) {
      decoded += c;
    } else {
      throw MalformedIri("unescaped character in " + std::string(iri));
    }
  }
  try {
    Label label = Label::normalize(decoded);
    if (label.text() != decoded) throw MalformedIri("non-canonical label in " + std::string(iri));
    return ParsedIri{kind, std::move(label)};
  } catch (const EmptyLabel&) {
    throw MalformedIri("empty label in " + std::string(iri));
  }
}

}  // namespace asgmkg
