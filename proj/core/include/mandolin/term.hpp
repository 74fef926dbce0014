#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mandolin {

enum class TermKind : uint8_t { Iri, Literal, Blank };

// One RDF term. Literals carry an optional datatype IRI or a language tag
// (never both); the tag is stored lowercased so comparison is
// case-insensitive. IRI lexical forms must be non-empty and whitespace-free.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string lexical;
  std::string datatype_iri;  // literals only
  std::string language_tag;  // literals only, lowercase

  static Term iri(std::string value);
  static Term literal(std::string value, std::string datatype = "",
                      std::string lang = "");
  static Term blank(std::string label);

  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_literal() const { return kind == TermKind::Literal; }
  bool is_blank() const { return kind == TermKind::Blank; }

  bool operator==(const Term& other) const {
    return kind == other.kind && lexical == other.lexical &&
           datatype_iri == other.datatype_iri &&
           language_tag == other.language_tag;
  }
  bool operator!=(const Term& other) const { return !(*this == other); }
  bool operator<(const Term& other) const;

  // N-Triples form: <iri>, _:label, "value", "value"^^<dt>, "value"@tag
  std::string to_ntriples() const;
};

struct TermHash {
  size_t operator()(const Term& t) const;
};

struct RawTriple {
  Term s, p, o;
  bool operator==(const RawTriple& other) const {
    return s == other.s && p == other.p && o == other.o;
  }
  bool operator<(const RawTriple& other) const;
  std::string to_ntriples() const;
};

struct RawTripleHash {
  size_t operator()(const RawTriple& t) const;
};

// Escapes per N-Triples string rules: `"`, `\`, and control characters.
std::string escape_ntriples_string(std::string_view s);

}  // namespace mandolin
