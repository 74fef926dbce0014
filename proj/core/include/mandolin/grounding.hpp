#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mandolin/graph.hpp"
#include "mandolin/rules.hpp"

namespace mandolin {

enum class AtomStatus : uint8_t { Evidence, Hidden };

struct GroundAtom {
  TripleId triple;
  AtomStatus status = AtomStatus::Evidence;
};

using AtomId = uint32_t;
constexpr AtomId kNoAtom = std::numeric_limits<AtomId>::max();

// Ground clause  ~body0 | ~body1 | head  carrying its rule's weight.
// body1 == kNoAtom for single-atom bodies.
struct Factor {
  uint32_t rule_id = 0;
  AtomId body0 = kNoAtom;
  AtomId body1 = kNoAtom;
  AtomId head = kNoAtom;
  double weight = 0.0;

  // Satisfied unless every body atom is true and the head is false.
  bool satisfied(bool b0, bool b1, bool h) const { return !(b0 && b1 && !h); }
};

struct GroundNetwork {
  Dictionary dict;  // evidence dictionary extended with rule predicates
  std::vector<GroundAtom> atoms;  // sorted by (s,p,o)
  std::vector<Factor> factors;
  std::vector<std::vector<uint32_t>> adjacency;  // atom -> touching factor ids
  std::vector<AtomId> hidden;  // ascending atom ids with status Hidden
  std::unordered_map<TripleId, AtomId, TripleIdHash> atom_index;

  size_t evidence_count() const { return atoms.size() - hidden.size(); }
  AtomId find_atom(const TripleId& t) const {
    auto it = atom_index.find(t);
    return it == atom_index.end() ? kNoAtom : it->second;
  }
};

struct ClosureResult {
  Dictionary dict;  // graph dictionary + rule predicates
  std::vector<TripleId> hidden;  // sorted, disjoint from the evidence set
  std::vector<size_t> derived_per_rule;  // parallel to the rule list
};

// Step 1: least fixpoint of the rule set over evidence + derived atoms,
// computed semi-naively (each atom joins against the store exactly once).
// Rule predicate ids must resolve through `dict`, which extends g's
// dictionary (read_rules_tsv against a copy of g.dict() produces exactly
// that). Derivations that would place a literal in subject position are
// skipped. Throws when more than `cap` atoms are derived (0 = 20 * |E|),
// naming the most productive rule.
ClosureResult infer_closure(const EncodedGraph& g,
                            const std::vector<HornRule>& rules,
                            Dictionary dict, size_t cap = 0);

// Step 2: one factor per ground rule instantiation whose atoms all exist in
// evidence + hidden, minus factors touching only evidence atoms. Exact
// duplicates (same rule and atom tuple) collapse to one.
GroundNetwork build_factor_graph(const EncodedGraph& g,
                                 const std::vector<HornRule>& rules,
                                 const ClosureResult& closure);

// One line per factor: ruleId <TAB> bodyAtoms <TAB> headAtom <TAB> weight,
// atoms rendered as s|p|o N-Triples terms, body atoms joined by ','.
void write_factor_dump(const std::string& path, const GroundNetwork& network);

// Rebuilds the network from a dump plus the evidence graph it was grounded
// against. Atom status is recomputed (in-graph = evidence), and isolated
// evidence atoms are restored so the atom set matches the original.
GroundNetwork load_factor_dump(const std::string& path, const EncodedGraph& g);

}  // namespace mandolin
