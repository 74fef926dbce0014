#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mandolin/term.hpp"

namespace mandolin {

class ParseError : public std::runtime_error {
 public:
  ParseError(size_t line_number, std::string line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what +
                           " [" + line + "]"),
        line_number(line_number),
        line(std::move(line)) {}

  size_t line_number;
  std::string line;
};

struct NtParseOptions {
  // Lenient mode skips malformed lines and counts them instead of throwing.
  bool lenient = false;
  // Blank node labels are prefixed with "<scope>." so that blanks from
  // different files never unify. Empty scope keeps labels verbatim.
  std::string blank_scope;
};

struct NtParseStats {
  size_t lines = 0;
  size_t triples = 0;
  size_t skipped = 0;            // malformed lines in lenient mode
  std::vector<std::string> skipped_samples;  // first few offending lines
};

std::vector<RawTriple> parse_ntriples(std::istream& in,
                                      const NtParseOptions& options = {},
                                      NtParseStats* stats = nullptr);

std::vector<RawTriple> parse_ntriples_string(const std::string& text,
                                             const NtParseOptions& options = {},
                                             NtParseStats* stats = nullptr);

std::vector<RawTriple> parse_ntriples_file(const std::string& path,
                                           const NtParseOptions& options = {},
                                           NtParseStats* stats = nullptr);

void write_ntriples(std::ostream& out, const std::vector<RawTriple>& triples);
void write_ntriples_file(const std::string& path,
                         const std::vector<RawTriple>& triples);

// Parses a single N-Triples term token: <iri>, _:label, or a literal.
Term parse_ntriples_term(const std::string& token);

}  // namespace mandolin
