#include "mandolin/rules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mandolin/parallel.hpp"

namespace mandolin {

const char* rule_class_name(RuleClass c) {
  switch (c) {
    case RuleClass::C1: return "C1";
    case RuleClass::C2: return "C2";
    case RuleClass::C3: return "C3";
    case RuleClass::C4: return "C4";
    case RuleClass::C5: return "C5";
    case RuleClass::C6: return "C6";
  }
  return "?";
}

RuleClass rule_class_from_name(const std::string& name) {
  if (name.size() == 2 && name[0] == 'C' && name[1] >= '1' && name[1] <= '6') {
    return static_cast<RuleClass>(name[1] - '1');
  }
  throw std::invalid_argument("unknown rule class: " + name);
}

std::string HornRule::pattern_string(const Dictionary& dict) const {
  auto n = [&](NodeId id) { return dict.term(id).lexical; };
  switch (cls) {
    case RuleClass::C1: return n(a) + "(x,y) => " + n(c) + "(x,y)";
    case RuleClass::C2: return n(a) + "(y,x) => " + n(c) + "(x,y)";
    case RuleClass::C3:
      return n(a) + "(z,x) & " + n(b) + "(z,y) => " + n(c) + "(x,y)";
    case RuleClass::C4:
      return n(a) + "(x,z) & " + n(b) + "(z,y) => " + n(c) + "(x,y)";
    case RuleClass::C5:
      return n(a) + "(z,x) & " + n(b) + "(y,z) => " + n(c) + "(x,y)";
    case RuleClass::C6:
      return n(a) + "(x,z) & " + n(b) + "(y,z) => " + n(c) + "(x,y)";
  }
  return {};
}

namespace {

// The two-atom classes differ only in which side of a/b touches x/y/z:
//   za_of(x): z candidates from the a-atom given x
//   zb_of(y): z candidates from the b-atom given y
//   yb_of(z): y candidates from the b-atom given z
IdView za_of(const EncodedGraph& g, RuleClass cls, NodeId a, NodeId x) {
  switch (cls) {
    case RuleClass::C3:
    case RuleClass::C5: return g.subjects_of(x, a);  // a(z,x)
    case RuleClass::C4:
    case RuleClass::C6: return g.objects_of(x, a);   // a(x,z)
    default: return {};
  }
}

IdView zb_of(const EncodedGraph& g, RuleClass cls, NodeId b, NodeId y) {
  switch (cls) {
    case RuleClass::C3:
    case RuleClass::C4: return g.subjects_of(y, b);  // b(z,y)
    case RuleClass::C5:
    case RuleClass::C6: return g.objects_of(y, b);   // b(y,z)
    default: return {};
  }
}

IdView yb_of(const EncodedGraph& g, RuleClass cls, NodeId b, NodeId z) {
  switch (cls) {
    case RuleClass::C3:
    case RuleClass::C4: return g.objects_of(z, b);   // b(z,y)
    case RuleClass::C5:
    case RuleClass::C6: return g.subjects_of(z, b);  // b(y,z)
    default: return {};
  }
}

std::vector<NodeId> head_subjects(const EncodedGraph& g, NodeId c) {
  std::vector<NodeId> out;
  for (auto [s, o] : g.triples_of_predicate(c)) {
    (void)o;
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  return out;  // sorted: predicate pairs are sorted by (s,o)
}

}  // namespace

RuleStats evaluate_rule(const EncodedGraph& g, RuleClass cls, NodeId a,
                        NodeId b, NodeId c) {
  RuleStats stats;
  auto head = g.triples_of_predicate(c);
  stats.head_size = head.size();

  // Support: head facts whose (x,y) binding satisfies the body.
  for (auto [x, y] : head) {
    bool body = false;
    switch (cls) {
      case RuleClass::C1: body = g.objects_of(x, a).contains(y); break;
      case RuleClass::C2: body = g.objects_of(y, a).contains(x); break;
      default:
        body = sorted_intersects(za_of(g, cls, a, x), zb_of(g, cls, b, y));
    }
    if (body) ++stats.support;
  }

  // PCA denominator: distinct body bindings (x,y) where x has some c-fact.
  std::vector<NodeId> subj_c = head_subjects(g, c);
  auto x_has_head = [&](NodeId x) {
    return std::binary_search(subj_c.begin(), subj_c.end(), x);
  };

  if (cls == RuleClass::C1) {
    for (auto [x, y] : g.triples_of_predicate(a)) {
      (void)y;
      if (x_has_head(x)) ++stats.pca_body;
    }
  } else if (cls == RuleClass::C2) {
    for (auto [y, x] : g.triples_of_predicate(a)) {
      (void)y;
      if (x_has_head(x)) ++stats.pca_body;
    }
  } else {
    std::vector<NodeId> ys;
    for (NodeId x : subj_c) {
      ys.clear();
      for (NodeId z : za_of(g, cls, a, x)) {
        for (NodeId y : yb_of(g, cls, b, z)) ys.push_back(y);
      }
      std::sort(ys.begin(), ys.end());
      stats.pca_body += static_cast<uint64_t>(
          std::unique(ys.begin(), ys.end()) - ys.begin());
    }
  }
  return stats;
}

namespace {

struct CandidateKey {
  RuleClass cls;
  NodeId a, b;
  bool operator==(const CandidateKey& o) const {
    return cls == o.cls && a == o.a && b == o.b;
  }
  bool operator<(const CandidateKey& o) const {
    if (cls != o.cls) return cls < o.cls;
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

struct CandidateKeyHash {
  size_t operator()(const CandidateKey& k) const {
    uint64_t h = static_cast<uint64_t>(k.cls);
    h = h * 0x9E3779B97F4A7C15ull + k.a;
    h = h * 0x9E3779B97F4A7C15ull + k.b;
    return static_cast<size_t>(h ^ (h >> 31));
  }
};

// Candidates witnessed by at least one head fact, so every candidate has
// support >= 1 and the enumeration stays output-bounded.
std::vector<CandidateKey> collect_candidates(const EncodedGraph& g, NodeId c) {
  std::unordered_set<CandidateKey, CandidateKeyHash> seen;
  std::unordered_map<NodeId, std::vector<NodeId>> z_to_preds;

  for (auto [x, y] : g.triples_of_predicate(c)) {
    // C1 / C2: predicates linking x->y / y->x.
    for (auto [p, o] : g.edges_of_subject(x)) {
      if (o == y && p != c) seen.insert({RuleClass::C1, p, kNoId});
    }
    for (auto [p, o] : g.edges_of_subject(y)) {
      if (o == x) seen.insert({RuleClass::C2, p, kNoId});
    }

    // b-atom side grouped by the join variable z.
    auto group_by_z = [&z_to_preds](std::span<const std::pair<NodeId, NodeId>> edges) {
      z_to_preds.clear();
      for (auto [p, z] : edges) z_to_preds[z].push_back(p);
    };

    // C3: a(z,x) & b(z,y) -- z into x, z into y.
    group_by_z(g.edges_of_object(y));
    for (auto [ap, z] : g.edges_of_object(x)) {
      auto it = z_to_preds.find(z);
      if (it == z_to_preds.end()) continue;
      for (NodeId bp : it->second) seen.insert({RuleClass::C3, ap, bp});
    }
    // C4: a(x,z) & b(z,y) -- z out of x, z into y (z_to_preds still from in(y)).
    for (auto [ap, z] : g.edges_of_subject(x)) {
      auto it = z_to_preds.find(z);
      if (it == z_to_preds.end()) continue;
      for (NodeId bp : it->second) seen.insert({RuleClass::C4, ap, bp});
    }
    // C5: a(z,x) & b(y,z) -- z into x, z out of y.
    group_by_z(g.edges_of_subject(y));
    for (auto [ap, z] : g.edges_of_object(x)) {
      auto it = z_to_preds.find(z);
      if (it == z_to_preds.end()) continue;
      for (NodeId bp : it->second) seen.insert({RuleClass::C5, ap, bp});
    }
    // C6: a(x,z) & b(y,z) -- z out of x, z out of y.
    for (auto [ap, z] : g.edges_of_subject(x)) {
      auto it = z_to_preds.find(z);
      if (it == z_to_preds.end()) continue;
      for (NodeId bp : it->second) seen.insert({RuleClass::C6, ap, bp});
    }
  }

  std::vector<CandidateKey> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<HornRule> mine_rules(const EncodedGraph& g, const MiningConfig& config) {
  const uint64_t min_support = std::max<uint64_t>(1, config.min_support);
  std::vector<NodeId> heads = g.predicates();
  std::vector<std::vector<HornRule>> per_head(heads.size());

  parallel_for(heads.size(), [&](size_t hi) {
    NodeId c = heads[hi];
    std::vector<HornRule>& out = per_head[hi];
    for (const CandidateKey& key : collect_candidates(g, c)) {
      RuleStats stats = evaluate_rule(g, key.cls, key.a, key.b, c);
      if (stats.support < min_support || stats.head_size == 0) continue;
      HornRule rule;
      rule.cls = key.cls;
      rule.a = key.a;
      rule.b = key.b;
      rule.c = c;
      rule.support = stats.support;
      rule.head_coverage =
          static_cast<double>(stats.support) / static_cast<double>(stats.head_size);
      rule.pca_confidence =
          stats.pca_body == 0
              ? 0.0
              : static_cast<double>(stats.support) / static_cast<double>(stats.pca_body);
      rule.weight = rule_to_weight(rule.pca_confidence);
      out.push_back(rule);
    }
  });

  std::vector<HornRule> rules;
  for (auto& v : per_head) {
    rules.insert(rules.end(), v.begin(), v.end());
  }
  std::sort(rules.begin(), rules.end(), [](const HornRule& x, const HornRule& y) {
    if (x.pca_confidence != y.pca_confidence) {
      return x.pca_confidence > y.pca_confidence;
    }
    if (x.cls != y.cls) return x.cls < y.cls;
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
  });

  if (config.max_rules > 0 && rules.size() > config.max_rules) {
    std::cerr << "mine_rules: truncating " << rules.size() << " rules to "
              << config.max_rules << " by PCA confidence\n";
    rules.resize(config.max_rules);
  }
  return rules;
}

std::vector<HornRule> filter_rules(const std::vector<HornRule>& rules,
                                   double min_head_coverage) {
  std::vector<HornRule> out;
  for (const auto& r : rules) {
    if (r.head_coverage >= min_head_coverage) out.push_back(r);
  }
  return out;
}

double rule_to_weight(double pca_confidence) {
  double c = std::clamp(pca_confidence, 0.001, 0.999);
  return std::log(c / (1.0 - c));
}

void write_rules_tsv(const std::string& path, const std::vector<HornRule>& rules,
                     const Dictionary& dict) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot write rules file: " + path);
  }
  out << "class\ta\tb\tc\tsupport\thead_coverage\tpca_confidence\tweight\n";
  char buf[400];
  for (const auto& r : rules) {
    std::snprintf(buf, sizeof(buf), "%llu\t%.12g\t%.12g\t%.12g",
                  static_cast<unsigned long long>(r.support), r.head_coverage,
                  r.pca_confidence, r.weight);
    out << rule_class_name(r.cls) << '\t' << dict.term(r.a).lexical << '\t'
        << (r.has_b() ? dict.term(r.b).lexical : std::string()) << '\t'
        << dict.term(r.c).lexical << '\t' << buf << '\n';
  }
}

std::vector<HornRule> read_rules_tsv(const std::string& path, Dictionary& dict) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open rules file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("rules file is empty (header required): " + path);
  }
  if (line.rfind("class\t", 0) != 0) {
    throw std::runtime_error("rules file missing header row: " + path);
  }
  std::vector<HornRule> rules;
  size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() < 8) {
      throw std::runtime_error("rules file line " + std::to_string(line_number) +
                               ": expected 8 columns");
    }
    HornRule r;
    r.cls = rule_class_from_name(cols[0]);
    r.a = dict.intern(Term::iri(cols[1]));
    if (r.has_b()) {
      if (cols[2].empty()) {
        throw std::runtime_error("rules file line " + std::to_string(line_number) +
                                 ": class " + cols[0] + " requires column b");
      }
      r.b = dict.intern(Term::iri(cols[2]));
    } else if (!cols[2].empty()) {
      throw std::runtime_error("rules file line " + std::to_string(line_number) +
                               ": class " + cols[0] + " must have empty b");
    }
    r.c = dict.intern(Term::iri(cols[3]));
    r.support = std::stoull(cols[4]);
    r.head_coverage = std::stod(cols[5]);
    r.pca_confidence = std::stod(cols[6]);
    r.weight = std::stod(cols[7]);
    rules.push_back(r);
  }
  return rules;
}

}  // namespace mandolin
