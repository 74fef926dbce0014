#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mandolin/graph.hpp"
#include "mandolin/inference.hpp"

namespace mandolin {

struct Split {
  std::vector<TripleId> train, valid, test;
};

struct RankResult {
  TripleId test_triple;
  double rank = 1.0;  // tie-averaged, >= 1
  double reciprocal = 1.0;
};

struct EvalReport {
  double mrr = 0.0;
  double hits_at_1 = 0.0;   // percentages
  double hits_at_3 = 0.0;
  double hits_at_10 = 0.0;
  size_t n_test = 0;
};

using TripleSet = std::unordered_set<TripleId, TripleIdHash>;
using ScoreMap = std::unordered_map<TripleId, double, TripleIdHash>;

// All (s,p,o~) with o~ ranging over the graph's nodes, o~ != o, ascending ids.
std::vector<TripleId> corrupt_objects(const TripleId& test, const EncodedGraph& graph);

// Normalized score when scored; 1.0 for evidence (clamped true); else 0.
double score_of(const TripleId& t, const ScoreMap& scores, const EncodedGraph& evidence);

// Filtered, tie-averaged rank: candidates present in `known` are discarded,
// rank = 1 + #strictly_greater + #equal / 2. `score` maps any triple to its
// model score.
template <typename ScoreFn>
RankResult filtered_rank(const TripleId& test,
                         const std::vector<TripleId>& candidates,
                         ScoreFn&& score, const TripleSet& known) {
  double test_score = score(test);
  size_t greater = 0, equal = 0;
  for (const TripleId& cand : candidates) {
    if (cand == test) continue;
    if (known.count(cand)) continue;
    double s = score(cand);
    if (s > test_score) ++greater;
    else if (s == test_score) ++equal;
  }
  RankResult r;
  r.test_triple = test;
  r.rank = 1.0 + static_cast<double>(greater) + static_cast<double>(equal) / 2.0;
  r.reciprocal = 1.0 / r.rank;
  return r;
}

// MRR and Hits@{1,3,10}; throws on empty input.
EvalReport compute_report(const std::vector<RankResult>& ranks);

// Object-corruption evaluation of every test triple against the model graph,
// parallel over test triples. `known` is the filter set (train + valid +
// test). Candidate generation is fused (no per-triple materialization) but
// agrees with corrupt_objects + filtered_rank by construction.
std::vector<RankResult> rank_test_triples(const EncodedGraph& model_graph,
                                          const ScoreMap& scores,
                                          const std::vector<TripleId>& test,
                                          const TripleSet& known);

void write_report_csv(const std::string& path, const EvalReport& report);
void write_ranks_tsv(const std::string& path, const std::vector<RankResult>& ranks,
                     const Dictionary& dict);
// Fig-2-style sweep output: gamma,hits_at_10 rows.
void write_gamma_sweep_csv(const std::string& path,
                           const std::vector<std::pair<uint64_t, double>>& rows);

// 90/10-style holdout split of an equivalence mapping, seeded shuffle.
// Throws when the mapping has fewer than 10 pairs.
struct MappingFolds {
  std::vector<std::pair<Term, Term>> train;
  std::vector<std::pair<Term, Term>> held_out;
};
MappingFolds split_mapping(const std::vector<std::pair<Term, Term>>& mapping,
                           double fold_fraction, uint64_t seed);

// Fraction of held-out pairs predicted as owl:sameAs links (either direction).
double sameas_recall(const MappingFolds& folds,
                     const std::vector<ScoredTriple>& predicted_links);

}  // namespace mandolin
