#include "mandolin/ntriples.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mandolin {

namespace {

struct LineScanner {
  const std::string& line;
  size_t pos = 0;

  explicit LineScanner(const std::string& l) : line(l) {}

  bool eof() const { return pos >= line.size(); }
  char peek() const { return line[pos]; }

  void skip_ws() {
    while (!eof() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(msg + " at column " + std::to_string(pos + 1));
  }

  void expect(char c) {
    if (eof() || line[pos] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos;
  }

  // Appends the UTF-8 encoding of a code point.
  static void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  uint32_t read_hex(int digits) {
    uint32_t value = 0;
    for (int i = 0; i < digits; ++i) {
      if (eof()) fail("truncated \\u escape");
      char c = line[pos++];
      value <<= 4;
      if (c >= '0' && c <= '9') value |= static_cast<uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') value |= static_cast<uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') value |= static_cast<uint32_t>(c - 'A' + 10);
      else fail("bad hex digit in escape");
    }
    return value;
  }

  // Reads chars until `end`, resolving backslash escapes.
  std::string read_escaped_until(char end, const char* what) {
    std::string out;
    while (true) {
      if (eof()) fail(std::string("unterminated ") + what);
      char c = line[pos++];
      if (c == end) return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("dangling backslash");
      char e = line[pos++];
      switch (e) {
        case 't': out += '\t'; break;
        case 'b': out += '\b'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 'f': out += '\f'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case '\\': out += '\\'; break;
        case 'u': append_utf8(out, read_hex(4)); break;
        case 'U': append_utf8(out, read_hex(8)); break;
        default: fail(std::string("unknown escape \\") + e);
      }
    }
  }

  Term read_iri() {
    expect('<');
    std::string value = read_escaped_until('>', "IRI");
    return Term::iri(std::move(value));
  }

  std::string read_blank_label() {
    expect('_');
    expect(':');
    std::string label;
    while (!eof()) {
      char c = line[pos];
      if (c == ' ' || c == '\t') break;
      // '.' terminates the statement unless it is an inner label character.
      if (c == '.') {
        size_t next = pos + 1;
        while (next < line.size() && (line[next] == ' ' || line[next] == '\t')) ++next;
        bool statement_end = next >= line.size() || line[next] == '#';
        if (statement_end) break;
      }
      label += c;
      ++pos;
    }
    if (label.empty()) fail("empty blank node label");
    return label;
  }

  Term read_literal() {
    expect('"');
    std::string value = read_escaped_until('"', "literal");
    if (!eof() && peek() == '^') {
      expect('^');
      expect('^');
      Term dt = read_iri();
      return Term::literal(std::move(value), dt.lexical);
    }
    if (!eof() && peek() == '@') {
      ++pos;
      std::string tag;
      while (!eof()) {
        char c = line[pos];
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
            (c >= '0' && c <= '9') || c == '-') {
          tag += c;
          ++pos;
        } else {
          break;
        }
      }
      if (tag.empty()) fail("empty language tag");
      return Term::literal(std::move(value), "", std::move(tag));
    }
    return Term::literal(std::move(value));
  }
};

std::string scoped_blank(const NtParseOptions& options, std::string label) {
  if (options.blank_scope.empty()) return label;
  return options.blank_scope + "." + label;
}

// Returns false for comment/blank lines, true when a triple was parsed.
bool parse_line(const std::string& line, const NtParseOptions& options,
                RawTriple& out) {
  LineScanner sc(line);
  sc.skip_ws();
  if (sc.eof() || sc.peek() == '#') return false;

  auto read_subject = [&]() -> Term {
    if (sc.peek() == '<') return sc.read_iri();
    if (sc.peek() == '_') return Term::blank(scoped_blank(options, sc.read_blank_label()));
    sc.fail("subject must be an IRI or blank node");
  };
  auto read_object = [&]() -> Term {
    if (sc.peek() == '<') return sc.read_iri();
    if (sc.peek() == '_') return Term::blank(scoped_blank(options, sc.read_blank_label()));
    if (sc.peek() == '"') return sc.read_literal();
    sc.fail("object must be an IRI, blank node, or literal");
  };

  out.s = read_subject();
  sc.skip_ws();
  if (sc.eof() || sc.peek() != '<') sc.fail("predicate must be an IRI");
  out.p = sc.read_iri();
  sc.skip_ws();
  if (sc.eof()) sc.fail("missing object");
  out.o = read_object();
  sc.skip_ws();
  sc.expect('.');
  sc.skip_ws();
  if (!sc.eof() && sc.peek() != '#') sc.fail("trailing content after '.'");
  return true;
}

}  // namespace

std::vector<RawTriple> parse_ntriples(std::istream& in,
                                      const NtParseOptions& options,
                                      NtParseStats* stats) {
  std::vector<RawTriple> triples;
  NtParseStats local;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    ++local.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    RawTriple t;
    try {
      if (!parse_line(line, options, t)) continue;
    } catch (const std::exception& e) {
      if (!options.lenient) throw ParseError(line_number, line, e.what());
      ++local.skipped;
      if (local.skipped_samples.size() < 8) {
        local.skipped_samples.push_back("line " + std::to_string(line_number) +
                                        ": " + line);
      }
      continue;
    }
    triples.push_back(std::move(t));
    ++local.triples;
  }
  if (stats) *stats = std::move(local);
  return triples;
}

std::vector<RawTriple> parse_ntriples_string(const std::string& text,
                                             const NtParseOptions& options,
                                             NtParseStats* stats) {
  std::istringstream in(text);
  return parse_ntriples(in, options, stats);
}

std::vector<RawTriple> parse_ntriples_file(const std::string& path,
                                           const NtParseOptions& options,
                                           NtParseStats* stats) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open N-Triples file: " + path);
  }
  return parse_ntriples(in, options, stats);
}

void write_ntriples(std::ostream& out, const std::vector<RawTriple>& triples) {
  for (const auto& t : triples) {
    out << t.to_ntriples() << '\n';
  }
}

void write_ntriples_file(const std::string& path,
                         const std::vector<RawTriple>& triples) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot write N-Triples file: " + path);
  }
  write_ntriples(out, triples);
}

Term parse_ntriples_term(const std::string& token) {
  LineScanner sc(token);
  sc.skip_ws();
  if (sc.eof()) throw std::runtime_error("empty term token");
  Term t;
  if (sc.peek() == '<') {
    t = sc.read_iri();
  } else if (sc.peek() == '_') {
    t = Term::blank(sc.read_blank_label());
  } else if (sc.peek() == '"') {
    t = sc.read_literal();
  } else {
    throw std::runtime_error("unrecognized term token: " + token);
  }
  sc.skip_ws();
  if (!sc.eof()) throw std::runtime_error("trailing content in term token: " + token);
  return t;
}

}  // namespace mandolin
