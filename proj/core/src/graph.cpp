#include "mandolin/graph.hpp"

#include <algorithm>

namespace mandolin {

bool IdView::contains(NodeId id) const {
  size_t lo = 0, hi = size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if ((*this)[mid] < id) lo = mid + 1;
    else hi = mid;
  }
  return lo < size() && (*this)[lo] == id;
}

std::vector<NodeId> IdView::to_vector() const {
  std::vector<NodeId> out;
  out.reserve(size());
  for (NodeId id : *this) out.push_back(id);
  return out;
}

bool sorted_intersects(const IdView& a, const IdView& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else return true;
  }
  return false;
}

NodeId Dictionary::intern(const Term& t) {
  auto it = ids_.find(t);
  if (it != ids_.end()) return it->second;
  NodeId id = static_cast<NodeId>(terms_.size());
  terms_.push_back(t);
  ids_.emplace(t, id);
  return id;
}

std::optional<NodeId> Dictionary::find(const Term& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const Term& Dictionary::term(NodeId id) const {
  if (id >= terms_.size()) {
    throw std::out_of_range("dictionary id out of range: " + std::to_string(id));
  }
  return terms_[id];
}

EncodedGraph EncodedGraph::encode(const std::vector<RawTriple>& raw) {
  Dictionary dict;
  std::vector<TripleId> triples;
  triples.reserve(raw.size());
  for (const auto& t : raw) {
    if (t.s.is_literal()) {
      throw std::invalid_argument("literal in subject position: " +
                                  t.to_ntriples());
    }
    TripleId id;
    id.s = dict.intern(t.s);
    id.p = dict.intern(t.p);
    id.o = dict.intern(t.o);
    triples.push_back(id);
  }
  return from_encoded(std::move(dict), std::move(triples));
}

EncodedGraph EncodedGraph::from_encoded(Dictionary dict,
                                        std::vector<TripleId> triples) {
  EncodedGraph g;
  g.dict_ = std::move(dict);
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  g.triples_ = std::move(triples);
  g.build_indices();
  return g;
}

EncodedGraph EncodedGraph::merge(const EncodedGraph& g, const EncodedGraph& h) {
  Dictionary dict = g.dict_;
  std::vector<TripleId> triples = g.triples_;
  triples.reserve(triples.size() + h.triples_.size());
  std::vector<NodeId> remap(h.dict_.size(), kNoId);
  for (const auto& t : h.triples_) {
    auto map = [&](NodeId id) {
      if (remap[id] == kNoId) remap[id] = dict.intern(h.dict_.term(id));
      return remap[id];
    };
    triples.push_back(TripleId{map(t.s), map(t.p), map(t.o)});
  }
  return from_encoded(std::move(dict), std::move(triples));
}

void EncodedGraph::build_indices() {
  const size_t n = dict_.size();
  std::vector<uint32_t> sub_count(n, 0), obj_count(n, 0);
  for (const auto& t : triples_) {
    ++sub_count[t.s];
    ++obj_count[t.o];
    by_predicate_[t.p].emplace_back(t.s, t.o);
  }
  for (auto& [p, v] : by_predicate_) {
    std::sort(v.begin(), v.end());
  }

  by_subject_.offsets.assign(n + 1, 0);
  by_object_.offsets.assign(n + 1, 0);
  for (size_t i = 0; i < n; ++i) {
    by_subject_.offsets[i + 1] = by_subject_.offsets[i] + sub_count[i];
    by_object_.offsets[i + 1] = by_object_.offsets[i] + obj_count[i];
  }
  by_subject_.entries.resize(triples_.size());
  by_object_.entries.resize(triples_.size());
  std::vector<uint32_t> scur(by_subject_.offsets.begin(), by_subject_.offsets.end() - 1);
  std::vector<uint32_t> ocur(by_object_.offsets.begin(), by_object_.offsets.end() - 1);
  for (const auto& t : triples_) {
    by_subject_.entries[scur[t.s]++] = {t.p, t.o};
    by_object_.entries[ocur[t.o]++] = {t.p, t.s};
  }
  for (size_t i = 0; i < n; ++i) {
    auto sb = by_subject_.entries.begin();
    std::sort(sb + by_subject_.offsets[i], sb + by_subject_.offsets[i + 1]);
    auto ob = by_object_.entries.begin();
    std::sort(ob + by_object_.offsets[i], ob + by_object_.offsets[i + 1]);
  }

  std::vector<bool> is_node(n, false);
  for (const auto& t : triples_) {
    is_node[t.s] = true;
    is_node[t.o] = true;
  }
  nodes_.clear();
  for (size_t i = 0; i < n; ++i) {
    if (is_node[i]) nodes_.push_back(static_cast<NodeId>(i));
  }
}

bool EncodedGraph::contains(const TripleId& t) const {
  auto row = edges_of_subject(t.s);
  return std::binary_search(row.begin(), row.end(), std::make_pair(t.p, t.o));
}

std::span<const std::pair<NodeId, NodeId>> EncodedGraph::triples_of_predicate(
    NodeId p) const {
  auto it = by_predicate_.find(p);
  if (it == by_predicate_.end()) return {};
  return {it->second.data(), it->second.size()};
}

namespace {

IdView group_view(std::span<const std::pair<NodeId, NodeId>> row, NodeId key) {
  auto lo = std::lower_bound(row.begin(), row.end(), std::make_pair(key, NodeId{0}));
  auto hi = std::lower_bound(lo, row.end(), std::make_pair(key + 1, NodeId{0}));
  return IdView(row.data() + (lo - row.begin()), row.data() + (hi - row.begin()));
}

}  // namespace

IdView EncodedGraph::objects_of(NodeId s, NodeId p) const {
  auto row = edges_of_subject(s);
  if (row.empty()) return {};
  return group_view(row, p);
}

IdView EncodedGraph::subjects_of(NodeId o, NodeId p) const {
  auto row = edges_of_object(o);
  if (row.empty()) return {};
  return group_view(row, p);
}

std::span<const std::pair<NodeId, NodeId>> EncodedGraph::edges_of_subject(
    NodeId s) const {
  return by_subject_.row(s);
}

std::span<const std::pair<NodeId, NodeId>> EncodedGraph::edges_of_object(
    NodeId o) const {
  return by_object_.row(o);
}

size_t EncodedGraph::predicate_count(NodeId p) const {
  auto it = by_predicate_.find(p);
  return it == by_predicate_.end() ? 0 : it->second.size();
}

std::vector<NodeId> EncodedGraph::predicates() const {
  std::vector<NodeId> out;
  out.reserve(by_predicate_.size());
  for (const auto& [p, v] : by_predicate_) {
    if (!v.empty()) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TripleId> EncodedGraph::query(const TriplePattern& q) const {
  std::vector<TripleId> out;
  auto in_range = [&](const std::optional<NodeId>& id) {
    return !id || *id < dict_.size();
  };
  if (!in_range(q.s) || !in_range(q.p) || !in_range(q.o)) return out;

  if (q.s && q.p && q.o) {
    TripleId t{*q.s, *q.p, *q.o};
    if (contains(t)) out.push_back(t);
  } else if (q.s && q.p) {
    for (NodeId o : objects_of(*q.s, *q.p)) out.push_back({*q.s, *q.p, o});
  } else if (q.o && q.p) {
    for (NodeId s : subjects_of(*q.o, *q.p)) out.push_back({s, *q.p, *q.o});
  } else if (q.s && q.o) {
    for (auto [p, o] : edges_of_subject(*q.s)) {
      if (o == *q.o) out.push_back({*q.s, p, o});
    }
  } else if (q.s) {
    for (auto [p, o] : edges_of_subject(*q.s)) out.push_back({*q.s, p, o});
  } else if (q.o) {
    for (auto [p, s] : edges_of_object(*q.o)) out.push_back({s, p, *q.o});
  } else if (q.p) {
    for (auto [s, o] : triples_of_predicate(*q.p)) out.push_back({s, *q.p, o});
  } else {
    out = triples_;
  }
  std::sort(out.begin(), out.end());
  return out;
}

RawTriple EncodedGraph::decode(const TripleId& t) const {
  return RawTriple{dict_.term(t.s), dict_.term(t.p), dict_.term(t.o)};
}

std::vector<RawTriple> EncodedGraph::decode_all() const {
  std::vector<RawTriple> out;
  out.reserve(triples_.size());
  for (const auto& t : triples_) out.push_back(decode(t));
  return out;
}

DynamicGraph::DynamicGraph(const EncodedGraph& base) : dict_(base.dict()) {
  order_.reserve(base.triple_count());
  for (const auto& t : base.triples()) {
    add(t);
  }
}

DynamicGraph::DynamicGraph(const EncodedGraph& base, Dictionary dict)
    : dict_(std::move(dict)) {
  if (dict_.size() < base.dict().size()) {
    throw std::invalid_argument("adopted dictionary must extend the base one");
  }
  order_.reserve(base.triple_count());
  for (const auto& t : base.triples()) {
    add(t);
  }
}

bool DynamicGraph::add(const TripleId& t) {
  if (!triples_.insert(t).second) return false;
  order_.push_back(t);
  sp_[key(t.s, t.p)].push_back(t.o);
  op_[key(t.o, t.p)].push_back(t.s);
  p_[t.p].emplace_back(t.s, t.o);
  return true;
}

std::span<const NodeId> DynamicGraph::objects_of(NodeId s, NodeId p) const {
  auto it = sp_.find(key(s, p));
  if (it == sp_.end()) return {};
  return {it->second.data(), it->second.size()};
}

std::span<const NodeId> DynamicGraph::subjects_of(NodeId o, NodeId p) const {
  auto it = op_.find(key(o, p));
  if (it == op_.end()) return {};
  return {it->second.data(), it->second.size()};
}

std::span<const std::pair<NodeId, NodeId>> DynamicGraph::triples_of_predicate(
    NodeId p) const {
  auto it = p_.find(p);
  if (it == p_.end()) return {};
  return {it->second.data(), it->second.size()};
}

EncodedGraph DynamicGraph::freeze() const {
  return EncodedGraph::from_encoded(dict_, order_);
}

}  // namespace mandolin
