#include "mandolin/term.hpp"

#include <cctype>
#include <cstdio>

namespace mandolin {

namespace {

bool has_whitespace(std::string_view s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
      return true;
    }
  }
  return false;
}

std::string lowercase(std::string s) {
  for (char& c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

}  // namespace

Term Term::iri(std::string value) {
  if (value.empty()) {
    throw std::invalid_argument("IRI lexical form must be non-empty");
  }
  if (has_whitespace(value)) {
    throw std::invalid_argument("IRI contains whitespace: " + value);
  }
  Term t;
  t.kind = TermKind::Iri;
  t.lexical = std::move(value);
  return t;
}

Term Term::literal(std::string value, std::string datatype, std::string lang) {
  if (!datatype.empty() && !lang.empty()) {
    throw std::invalid_argument("literal cannot carry datatype and language tag");
  }
  Term t;
  t.kind = TermKind::Literal;
  t.lexical = std::move(value);
  t.datatype_iri = std::move(datatype);
  t.language_tag = lowercase(std::move(lang));
  return t;
}

Term Term::blank(std::string label) {
  if (label.empty()) {
    throw std::invalid_argument("blank node label must be non-empty");
  }
  Term t;
  t.kind = TermKind::Blank;
  t.lexical = std::move(label);
  return t;
}

bool Term::operator<(const Term& other) const {
  if (kind != other.kind) return kind < other.kind;
  if (lexical != other.lexical) return lexical < other.lexical;
  if (datatype_iri != other.datatype_iri) return datatype_iri < other.datatype_iri;
  return language_tag < other.language_tag;
}

std::string escape_ntriples_string(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default: {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04X", u);
          out += buf;
        } else {
          out += c;
        }
      }
    }
  }
  return out;
}

std::string Term::to_ntriples() const {
  switch (kind) {
    case TermKind::Iri:
      return "<" + lexical + ">";
    case TermKind::Blank:
      return "_:" + lexical;
    case TermKind::Literal: {
      std::string out = "\"" + escape_ntriples_string(lexical) + "\"";
      if (!language_tag.empty()) {
        out += "@" + language_tag;
      } else if (!datatype_iri.empty()) {
        out += "^^<" + datatype_iri + ">";
      }
      return out;
    }
  }
  return {};
}

size_t TermHash::operator()(const Term& t) const {
  // FNV-1a over kind and all string parts, with separators.
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::string_view s) {
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    h ^= 0xFF;
    h *= 1099511628211ull;
  };
  h ^= static_cast<uint8_t>(t.kind);
  h *= 1099511628211ull;
  mix(t.lexical);
  mix(t.datatype_iri);
  mix(t.language_tag);
  return static_cast<size_t>(h);
}

bool RawTriple::operator<(const RawTriple& other) const {
  if (!(s == other.s)) return s < other.s;
  if (!(p == other.p)) return p < other.p;
  return o < other.o;
}

std::string RawTriple::to_ntriples() const {
  return s.to_ntriples() + " " + p.to_ntriples() + " " + o.to_ntriples() + " .";
}

size_t RawTripleHash::operator()(const RawTriple& t) const {
  TermHash th;
  size_t h = th(t.s);
  h = h * 1000003ull ^ th(t.p);
  h = h * 1000003ull ^ th(t.o);
  return h;
}

}  // namespace mandolin
