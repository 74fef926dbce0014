#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mandolin/term.hpp"

namespace mandolin {

using NodeId = uint32_t;
constexpr NodeId kNoId = std::numeric_limits<NodeId>::max();

struct TripleId {
  NodeId s = kNoId;
  NodeId p = kNoId;
  NodeId o = kNoId;

  bool operator==(const TripleId& t) const {
    return s == t.s && p == t.p && o == t.o;
  }
  bool operator<(const TripleId& t) const {
    if (s != t.s) return s < t.s;
    if (p != t.p) return p < t.p;
    return o < t.o;
  }
};

struct TripleIdHash {
  size_t operator()(const TripleId& t) const {
    uint64_t h = t.s;
    h = h * 0x9E3779B97F4A7C15ull + t.p;
    h = h * 0x9E3779B97F4A7C15ull + t.o;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 32;
    return static_cast<size_t>(h);
  }
};

// Sorted, zero-copy view over the .second halves of a (key,value) pair run.
class IdView {
 public:
  IdView() = default;
  IdView(const std::pair<NodeId, NodeId>* begin, const std::pair<NodeId, NodeId>* end)
      : begin_(begin), end_(end) {}

  size_t size() const { return static_cast<size_t>(end_ - begin_); }
  bool empty() const { return begin_ == end_; }
  NodeId operator[](size_t i) const { return begin_[i].second; }

  struct iterator {
    const std::pair<NodeId, NodeId>* p;
    NodeId operator*() const { return p->second; }
    iterator& operator++() { ++p; return *this; }
    bool operator!=(const iterator& other) const { return p != other.p; }
    bool operator==(const iterator& other) const { return p == other.p; }
  };
  iterator begin() const { return {begin_}; }
  iterator end() const { return {end_}; }

  bool contains(NodeId id) const;
  std::vector<NodeId> to_vector() const;

 private:
  const std::pair<NodeId, NodeId>* begin_ = nullptr;
  const std::pair<NodeId, NodeId>* end_ = nullptr;
};

// True if two ascending id sequences intersect; both arguments must be sorted.
bool sorted_intersects(const IdView& a, const IdView& b);

// Bijection Term <-> dense id, ids assigned in first-seen order.
class Dictionary {
 public:
  NodeId intern(const Term& t);
  std::optional<NodeId> find(const Term& t) const;
  const Term& term(NodeId id) const;
  size_t size() const { return terms_.size(); }

 private:
  std::vector<Term> terms_;
  std::unordered_map<Term, NodeId, TermHash> ids_;
};

// Wildcard components are std::nullopt.
struct TriplePattern {
  std::optional<NodeId> s, p, o;
};

// Immutable dictionary-encoded triple set with subject/predicate/object
// indices. Construction is single-writer; reads are safe to share.
class EncodedGraph {
 public:
  EncodedGraph() = default;

  // Dictionary-encodes raw triples; duplicates collapse. Throws on a literal
  // in subject position, naming the offending triple.
  static EncodedGraph encode(const std::vector<RawTriple>& raw);

  // Builds from already-encoded triples (takes ownership of the dictionary).
  static EncodedGraph from_encoded(Dictionary dict,
                                   std::vector<TripleId> triples);

  // Set union; h's terms are re-encoded through g's dictionary. Blank node
  // disjointness across files is the parser's job (blank scopes).
  static EncodedGraph merge(const EncodedGraph& g, const EncodedGraph& h);

  size_t triple_count() const { return triples_.size(); }
  size_t node_count() const { return nodes_.size(); }
  const Dictionary& dict() const { return dict_; }
  const std::vector<TripleId>& triples() const { return triples_; }
  // Ids that occur in subject or object position, ascending.
  const std::vector<NodeId>& nodes() const { return nodes_; }

  bool contains(const TripleId& t) const;
  bool contains(NodeId s, NodeId p, NodeId o) const {
    return contains(TripleId{s, p, o});
  }

  // Exactly the triples matching the pattern, via the cheapest index.
  // Unknown ids yield empty results.
  std::vector<TripleId> query(const TriplePattern& pattern) const;

  // Sorted (s,o) pairs for a predicate.
  std::span<const std::pair<NodeId, NodeId>> triples_of_predicate(NodeId p) const;
  // Sorted object ids of (s,p,?).
  IdView objects_of(NodeId s, NodeId p) const;
  // Sorted subject ids of (?,p,o).
  IdView subjects_of(NodeId o, NodeId p) const;
  // Sorted (p,o) pairs for a subject / (p,s) pairs for an object.
  std::span<const std::pair<NodeId, NodeId>> edges_of_subject(NodeId s) const;
  std::span<const std::pair<NodeId, NodeId>> edges_of_object(NodeId o) const;

  size_t predicate_count(NodeId p) const;
  // Predicates with at least one triple, ascending.
  std::vector<NodeId> predicates() const;

  RawTriple decode(const TripleId& t) const;
  std::vector<RawTriple> decode_all() const;

 private:
  void build_indices();

  Dictionary dict_;
  std::vector<TripleId> triples_;  // sorted by (s,p,o), unique
  std::vector<NodeId> nodes_;

  // Adjacency stored flat per key id, CSR-style.
  struct Csr {
    std::vector<uint32_t> offsets;  // size = key-id space + 1
    std::vector<std::pair<NodeId, NodeId>> entries;
    std::span<const std::pair<NodeId, NodeId>> row(NodeId key) const {
      if (key + 1 >= offsets.size()) return {};
      return {entries.data() + offsets[key], entries.data() + offsets[key + 1]};
    }
  };
  Csr by_subject_;  // s -> (p,o) sorted
  Csr by_object_;   // o -> (p,s) sorted
  std::unordered_map<NodeId, std::vector<std::pair<NodeId, NodeId>>> by_predicate_;
};

// Growable triple store used by forward chaining and grounding: starts from
// a base graph and supports insertion with incremental sp/op/p indices.
class DynamicGraph {
 public:
  explicit DynamicGraph(const EncodedGraph& base);
  // Starts from base triples but adopts an extended dictionary (ids must be
  // a superset of base's id space).
  DynamicGraph(const EncodedGraph& base, Dictionary dict);

  Dictionary& dict() { return dict_; }
  const Dictionary& dict() const { return dict_; }

  size_t triple_count() const { return order_.size(); }
  const std::vector<TripleId>& triples() const { return order_; }

  bool contains(const TripleId& t) const { return triples_.count(t) > 0; }
  // Returns true if the triple was new.
  bool add(const TripleId& t);

  std::span<const NodeId> objects_of(NodeId s, NodeId p) const;
  std::span<const NodeId> subjects_of(NodeId o, NodeId p) const;
  std::span<const std::pair<NodeId, NodeId>> triples_of_predicate(NodeId p) const;

  EncodedGraph freeze() const;

 private:
  static uint64_t key(NodeId a, NodeId b) {
    return (static_cast<uint64_t>(a) << 32) | b;
  }

  Dictionary dict_;
  std::unordered_set<TripleId, TripleIdHash> triples_;
  std::vector<TripleId> order_;  // insertion order, base first
  std::unordered_map<uint64_t, std::vector<NodeId>> sp_;
  std::unordered_map<uint64_t, std::vector<NodeId>> op_;
  std::unordered_map<NodeId, std::vector<std::pair<NodeId, NodeId>>> p_;
};

}  // namespace mandolin
