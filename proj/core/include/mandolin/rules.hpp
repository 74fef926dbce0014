#pragma once

#include <string>
#include <vector>

#include "mandolin/graph.hpp"

namespace mandolin {

// The six supported Horn-rule shapes over predicates a, b, c:
//   C1: a(x,y)            => c(x,y)
//   C2: a(y,x)            => c(x,y)
//   C3: a(z,x) & b(z,y)   => c(x,y)
//   C4: a(x,z) & b(z,y)   => c(x,y)
//   C5: a(z,x) & b(y,z)   => c(x,y)
//   C6: a(x,z) & b(y,z)   => c(x,y)
enum class RuleClass : uint8_t { C1, C2, C3, C4, C5, C6 };

const char* rule_class_name(RuleClass c);
RuleClass rule_class_from_name(const std::string& name);
inline bool rule_class_has_b(RuleClass c) {
  return c != RuleClass::C1 && c != RuleClass::C2;
}

struct HornRule {
  RuleClass cls = RuleClass::C1;
  NodeId a = kNoId;
  NodeId b = kNoId;  // only C3..C6
  NodeId c = kNoId;
  uint64_t support = 0;
  double head_coverage = 0.0;
  double pca_confidence = 0.0;
  double weight = 0.0;

  bool has_b() const { return rule_class_has_b(cls); }
  std::string pattern_string(const Dictionary& dict) const;
};

struct MiningConfig {
  double min_head_coverage = 0.9;  // applied by filter_rules
  uint64_t min_support = 1;
  size_t max_rules = 0;  // 0 = unlimited; else truncate by descending PCA
};

struct RuleStats {
  uint64_t support = 0;
  uint64_t head_size = 0;
  uint64_t pca_body = 0;  // distinct body pairs whose subject has a c-fact
};

// Exact support / head-size / PCA-denominator counts via the graph indices.
// Distinctness is over (x,y) bindings; the z variable is existential.
RuleStats evaluate_rule(const EncodedGraph& g, RuleClass cls, NodeId a,
                        NodeId b, NodeId c);

// Enumerates candidate rules per head predicate (C1/C2 over all co-occurring
// predicates, C3..C6 over body pairs with a joint instantiation witnessing
// the head), evaluates exact statistics, and returns every rule with support
// >= max(1, min_support). Rules are sorted by descending PCA confidence with
// (class, a, b, c) id order breaking ties. The reflexive C1 rule a => a is a
// tautology and never emitted.
std::vector<HornRule> mine_rules(const EncodedGraph& g, const MiningConfig& config);

// Rules with head_coverage >= min_head_coverage, input order preserved.
std::vector<HornRule> filter_rules(const std::vector<HornRule>& rules,
                                   double min_head_coverage);

// Log-odds of the clamped confidence: ln(c/(1-c)), c in [0.001, 0.999].
double rule_to_weight(double pca_confidence);

// TSV contract between mining and grounding. Columns:
//   class a b c support head_coverage pca_confidence weight
// with a header row; b is empty for C1/C2; predicates are bare IRIs.
void write_rules_tsv(const std::string& path, const std::vector<HornRule>& rules,
                     const Dictionary& dict);
std::vector<HornRule> read_rules_tsv(const std::string& path, Dictionary& dict);

}  // namespace mandolin
