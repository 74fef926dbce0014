#include "mandolin/grounding.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>

#include "mandolin/ntriples.hpp"

namespace mandolin {

namespace {

// Applies one rule to a frontier atom in either body role, deriving heads
// against the current store. derive(s, c, o) is called for every match.
template <typename DeriveFn>
void apply_rule_to_atom(const DynamicGraph& store, const HornRule& rule,
                        const TripleId& t, DeriveFn&& derive) {
  if (!rule.has_b()) {
    if (t.p != rule.a) return;
    if (rule.cls == RuleClass::C1) {
      derive(t.s, rule.c, t.o);
    } else {  // C2: a(y,x) => c(x,y)
      derive(t.o, rule.c, t.s);
    }
    return;
  }

  if (t.p == rule.a) {
    switch (rule.cls) {
      case RuleClass::C3:  // a(z,x) & b(z,y): t = (z,x)
        for (NodeId y : store.objects_of(t.s, rule.b)) derive(t.o, rule.c, y);
        break;
      case RuleClass::C4:  // a(x,z) & b(z,y): t = (x,z)
        for (NodeId y : store.objects_of(t.o, rule.b)) derive(t.s, rule.c, y);
        break;
      case RuleClass::C5:  // a(z,x) & b(y,z): t = (z,x)
        for (NodeId y : store.subjects_of(t.s, rule.b)) derive(t.o, rule.c, y);
        break;
      case RuleClass::C6:  // a(x,z) & b(y,z): t = (x,z)
        for (NodeId y : store.subjects_of(t.o, rule.b)) derive(t.s, rule.c, y);
        break;
      default: break;
    }
  }
  if (t.p == rule.b) {
    switch (rule.cls) {
      case RuleClass::C3:  // t = (z,y): x from a(z,x)
        for (NodeId x : store.objects_of(t.s, rule.a)) derive(x, rule.c, t.o);
        break;
      case RuleClass::C4:  // t = (z,y): x from a(x,z)
        for (NodeId x : store.subjects_of(t.s, rule.a)) derive(x, rule.c, t.o);
        break;
      case RuleClass::C5:  // t = (y,z): x from a(z,x)
        for (NodeId x : store.objects_of(t.o, rule.a)) derive(x, rule.c, t.s);
        break;
      case RuleClass::C6:  // t = (y,z): x from a(x,z)
        for (NodeId x : store.subjects_of(t.o, rule.a)) derive(x, rule.c, t.s);
        break;
      default: break;
    }
  }
}

}  // namespace

ClosureResult infer_closure(const EncodedGraph& g,
                            const std::vector<HornRule>& rules,
                            Dictionary dict, size_t cap) {
  if (cap == 0) cap = 20 * std::max<size_t>(g.triple_count(), 1);
  DynamicGraph store(g, std::move(dict));

  // Rules indexed by body predicate so frontier atoms only visit relevant ones.
  std::unordered_map<NodeId, std::vector<uint32_t>> rules_by_predicate;
  for (uint32_t i = 0; i < rules.size(); ++i) {
    rules_by_predicate[rules[i].a].push_back(i);
    if (rules[i].has_b() && rules[i].b != rules[i].a) {
      rules_by_predicate[rules[i].b].push_back(i);
    }
  }

  ClosureResult result;
  result.derived_per_rule.assign(rules.size(), 0);
  size_t derived = 0;

  std::deque<TripleId> frontier(store.triples().begin(), store.triples().end());
  std::vector<TripleId> scratch;
  while (!frontier.empty()) {
    TripleId t = frontier.front();
    frontier.pop_front();
    auto it = rules_by_predicate.find(t.p);
    if (it == rules_by_predicate.end()) continue;
    for (uint32_t ri : it->second) {
      // Matches are staged: deriving while iterating index spans would
      // invalidate them.
      scratch.clear();
      apply_rule_to_atom(store, rules[ri], t, [&](NodeId s, NodeId c, NodeId o) {
        scratch.push_back(TripleId{s, c, o});
      });
      for (const TripleId& d : scratch) {
        if (store.dict().term(d.s).is_literal()) continue;
        if (!store.add(d)) continue;
        ++derived;
        ++result.derived_per_rule[ri];
        if (derived > cap) {
          size_t worst = static_cast<size_t>(
              std::max_element(result.derived_per_rule.begin(),
                               result.derived_per_rule.end()) -
              result.derived_per_rule.begin());
          throw std::runtime_error(
              "grounding closure exceeded derived-atom cap (" +
              std::to_string(cap) + "); most productive rule: " +
              rules[worst].pattern_string(store.dict()));
        }
        frontier.push_back(d);
      }
    }
  }

  result.hidden.reserve(derived);
  for (size_t i = g.triple_count(); i < store.triples().size(); ++i) {
    result.hidden.push_back(store.triples()[i]);
  }
  std::sort(result.hidden.begin(), result.hidden.end());
  result.dict = store.dict();
  return result;
}

GroundNetwork build_factor_graph(const EncodedGraph& g,
                                 const std::vector<HornRule>& rules,
                                 const ClosureResult& closure) {
  GroundNetwork net;
  net.dict = closure.dict;

  // Canonical atom list: evidence + hidden sorted by (s,p,o).
  net.atoms.reserve(g.triple_count() + closure.hidden.size());
  for (const auto& t : g.triples()) {
    net.atoms.push_back(GroundAtom{t, AtomStatus::Evidence});
  }
  for (const auto& t : closure.hidden) {
    net.atoms.push_back(GroundAtom{t, AtomStatus::Hidden});
  }
  std::sort(net.atoms.begin(), net.atoms.end(),
            [](const GroundAtom& a, const GroundAtom& b) {
              return a.triple < b.triple;
            });
  net.atom_index.reserve(net.atoms.size() * 2);
  for (AtomId i = 0; i < net.atoms.size(); ++i) {
    net.atom_index.emplace(net.atoms[i].triple, i);
    if (net.atoms[i].status == AtomStatus::Hidden) net.hidden.push_back(i);
  }

  // All atoms (evidence + hidden) as a joinable store for instantiation.
  DynamicGraph store(g, closure.dict);
  for (const auto& t : closure.hidden) store.add(t);

  auto is_evidence = [&](AtomId id) {
    return net.atoms[id].status == AtomStatus::Evidence;
  };

  for (uint32_t ri = 0; ri < rules.size(); ++ri) {
    const HornRule& rule = rules[ri];
    auto emit = [&](const TripleId& body0, const TripleId* body1,
                    const TripleId& head) {
      AtomId h = net.find_atom(head);
      if (h == kNoAtom) return;  // head skipped during closure (literal subject)
      AtomId b0 = net.find_atom(body0);
      AtomId b1 = body1 ? net.find_atom(*body1) : kNoAtom;
      if (body1 && b1 > b0) std::swap(b0, b1);  // canonical body order
      if (body1 && b0 == b1) b1 = kNoAtom;      // collapsed self-join atom
      bool all_evidence = is_evidence(h) && is_evidence(b0) &&
                          (b1 == kNoAtom || is_evidence(b1));
      if (all_evidence) return;
      net.factors.push_back(Factor{ri, b0, b1, h, rule.weight});
    };

    for (auto [s, o] : store.triples_of_predicate(rule.a)) {
      TripleId body0{s, rule.a, o};
      switch (rule.cls) {
        case RuleClass::C1:
          emit(body0, nullptr, TripleId{s, rule.c, o});
          break;
        case RuleClass::C2:
          emit(body0, nullptr, TripleId{o, rule.c, s});
          break;
        case RuleClass::C3:  // a(z,x) & b(z,y) => c(x,y)
          for (NodeId y : store.objects_of(s, rule.b)) {
            TripleId body1{s, rule.b, y};
            emit(body0, &body1, TripleId{o, rule.c, y});
          }
          break;
        case RuleClass::C4:  // a(x,z) & b(z,y) => c(x,y)
          for (NodeId y : store.objects_of(o, rule.b)) {
            TripleId body1{o, rule.b, y};
            emit(body0, &body1, TripleId{s, rule.c, y});
          }
          break;
        case RuleClass::C5:  // a(z,x) & b(y,z) => c(x,y)
          for (NodeId y : store.subjects_of(s, rule.b)) {
            TripleId body1{y, rule.b, s};
            emit(body0, &body1, TripleId{o, rule.c, y});
          }
          break;
        case RuleClass::C6:  // a(x,z) & b(y,z) => c(x,y)
          for (NodeId y : store.subjects_of(o, rule.b)) {
            TripleId body1{y, rule.b, o};
            emit(body0, &body1, TripleId{s, rule.c, y});
          }
          break;
      }
    }
  }

  // Duplicate instantiations (same rule, same atom tuple) collapse to one.
  std::sort(net.factors.begin(), net.factors.end(),
            [](const Factor& x, const Factor& y) {
              if (x.rule_id != y.rule_id) return x.rule_id < y.rule_id;
              if (x.body0 != y.body0) return x.body0 < y.body0;
              if (x.body1 != y.body1) return x.body1 < y.body1;
              return x.head < y.head;
            });
  net.factors.erase(std::unique(net.factors.begin(), net.factors.end(),
                                [](const Factor& x, const Factor& y) {
                                  return x.rule_id == y.rule_id &&
                                         x.body0 == y.body0 &&
                                         x.body1 == y.body1 && x.head == y.head;
                                }),
                    net.factors.end());

  net.adjacency.assign(net.atoms.size(), {});
  for (uint32_t fi = 0; fi < net.factors.size(); ++fi) {
    const Factor& f = net.factors[fi];
    AtomId touched[3] = {f.body0, f.body1, f.head};
    std::sort(std::begin(touched), std::end(touched));
    AtomId prev = kNoAtom;
    for (AtomId a : touched) {
      if (a == kNoAtom || a == prev) continue;
      net.adjacency[a].push_back(fi);
      prev = a;
    }
  }
  return net;
}

namespace {

std::string atom_to_dump(const GroundNetwork& net, AtomId id) {
  const TripleId& t = net.atoms[id].triple;
  return net.dict.term(t.s).to_ntriples() + "|" +
         net.dict.term(t.p).to_ntriples() + "|" +
         net.dict.term(t.o).to_ntriples();
}

}  // namespace

void write_factor_dump(const std::string& path, const GroundNetwork& network) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot write factor dump: " + path);
  }
  char wbuf[64];
  for (const auto& f : network.factors) {
    out << f.rule_id << '\t' << atom_to_dump(network, f.body0);
    if (f.body1 != kNoAtom) out << ',' << atom_to_dump(network, f.body1);
    std::snprintf(wbuf, sizeof(wbuf), "%.17g", f.weight);
    out << '\t' << atom_to_dump(network, f.head) << '\t' << wbuf << '\n';
  }
}

namespace {

TripleId parse_dump_atom(const std::string& field, Dictionary& dict) {
  size_t p1 = field.find('|');
  size_t p2 = field.rfind('|');
  if (p1 == std::string::npos || p2 == p1) {
    throw std::runtime_error("malformed dump atom: " + field);
  }
  Term s = parse_ntriples_term(field.substr(0, p1));
  Term p = parse_ntriples_term(field.substr(p1 + 1, p2 - p1 - 1));
  Term o = parse_ntriples_term(field.substr(p2 + 1));
  return TripleId{dict.intern(s), dict.intern(p), dict.intern(o)};
}

}  // namespace

GroundNetwork load_factor_dump(const std::string& path, const EncodedGraph& g) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open factor dump: " + path);
  }

  Dictionary dict = g.dict();
  struct RawFactor {
    uint32_t rule_id;
    TripleId body0, body1, head;
    bool has_body1;
    double weight;
  };
  std::vector<RawFactor> raw;
  std::vector<TripleId> dump_atoms;

  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 4) {
      throw std::runtime_error("factor dump line " + std::to_string(line_number) +
                               ": expected 4 columns");
    }
    RawFactor f;
    f.rule_id = static_cast<uint32_t>(std::stoul(cols[0]));
    size_t comma = cols[1].find(',');
    if (comma == std::string::npos) {
      f.body0 = parse_dump_atom(cols[1], dict);
      f.has_body1 = false;
      f.body1 = TripleId{};
    } else {
      f.body0 = parse_dump_atom(cols[1].substr(0, comma), dict);
      f.body1 = parse_dump_atom(cols[1].substr(comma + 1), dict);
      f.has_body1 = true;
    }
    f.head = parse_dump_atom(cols[2], dict);
    f.weight = std::stod(cols[3]);
    raw.push_back(f);
    dump_atoms.push_back(f.body0);
    if (f.has_body1) dump_atoms.push_back(f.body1);
    dump_atoms.push_back(f.head);
  }

  GroundNetwork net;
  net.dict = std::move(dict);

  std::sort(dump_atoms.begin(), dump_atoms.end());
  dump_atoms.erase(std::unique(dump_atoms.begin(), dump_atoms.end()),
                   dump_atoms.end());
  net.atoms.reserve(g.triple_count() + dump_atoms.size());
  for (const auto& t : g.triples()) {
    net.atoms.push_back(GroundAtom{t, AtomStatus::Evidence});
  }
  for (const auto& t : dump_atoms) {
    if (!g.contains(t)) net.atoms.push_back(GroundAtom{t, AtomStatus::Hidden});
  }
  std::sort(net.atoms.begin(), net.atoms.end(),
            [](const GroundAtom& a, const GroundAtom& b) {
              return a.triple < b.triple;
            });
  net.atom_index.reserve(net.atoms.size() * 2);
  for (AtomId i = 0; i < net.atoms.size(); ++i) {
    net.atom_index.emplace(net.atoms[i].triple, i);
    if (net.atoms[i].status == AtomStatus::Hidden) net.hidden.push_back(i);
  }

  net.factors.reserve(raw.size());
  for (const auto& f : raw) {
    AtomId b0 = net.find_atom(f.body0);
    AtomId b1 = f.has_body1 ? net.find_atom(f.body1) : kNoAtom;
    AtomId h = net.find_atom(f.head);
    if (b0 == kNoAtom || h == kNoAtom || (f.has_body1 && b1 == kNoAtom)) {
      throw std::runtime_error("factor dump references unknown atom");
    }
    if (f.has_body1 && b1 > b0) std::swap(b0, b1);
    if (f.has_body1 && b0 == b1) b1 = kNoAtom;
    net.factors.push_back(Factor{f.rule_id, b0, b1, h, f.weight});
  }
  std::sort(net.factors.begin(), net.factors.end(),
            [](const Factor& x, const Factor& y) {
              if (x.rule_id != y.rule_id) return x.rule_id < y.rule_id;
              if (x.body0 != y.body0) return x.body0 < y.body0;
              if (x.body1 != y.body1) return x.body1 < y.body1;
              return x.head < y.head;
            });

  net.adjacency.assign(net.atoms.size(), {});
  for (uint32_t fi = 0; fi < net.factors.size(); ++fi) {
    const Factor& f = net.factors[fi];
    AtomId touched[3] = {f.body0, f.body1, f.head};
    std::sort(std::begin(touched), std::end(touched));
    AtomId prev = kNoAtom;
    for (AtomId a : touched) {
      if (a == kNoAtom || a == prev) continue;
      net.adjacency[a].push_back(fi);
      prev = a;
    }
  }
  return net;
}

}  // namespace mandolin
