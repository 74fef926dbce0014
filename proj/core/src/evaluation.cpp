#include "mandolin/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "mandolin/enrichment.hpp"
#include "mandolin/parallel.hpp"
#include "mandolin/rng.hpp"

namespace mandolin {

std::vector<TripleId> corrupt_objects(const TripleId& test,
                                      const EncodedGraph& graph) {
  std::vector<TripleId> out;
  out.reserve(graph.node_count());
  for (NodeId node : graph.nodes()) {
    if (node == test.o) continue;
    out.push_back(TripleId{test.s, test.p, node});
  }
  return out;
}

double score_of(const TripleId& t, const ScoreMap& scores,
                const EncodedGraph& evidence) {
  auto it = scores.find(t);
  if (it != scores.end()) return it->second;
  if (evidence.contains(t)) return 1.0;
  return 0.0;
}

EvalReport compute_report(const std::vector<RankResult>& ranks) {
  if (ranks.empty()) {
    throw std::invalid_argument("compute_report: no rank results");
  }
  EvalReport rep;
  rep.n_test = ranks.size();
  size_t h1 = 0, h3 = 0, h10 = 0;
  double sum = 0.0;
  for (const auto& r : ranks) {
    sum += r.reciprocal;
    if (r.rank <= 1.0) ++h1;
    if (r.rank <= 3.0) ++h3;
    if (r.rank <= 10.0) ++h10;
  }
  double n = static_cast<double>(ranks.size());
  rep.mrr = sum / n;
  rep.hits_at_1 = 100.0 * static_cast<double>(h1) / n;
  rep.hits_at_3 = 100.0 * static_cast<double>(h3) / n;
  rep.hits_at_10 = 100.0 * static_cast<double>(h10) / n;
  return rep;
}

std::vector<RankResult> rank_test_triples(const EncodedGraph& model_graph,
                                          const ScoreMap& scores,
                                          const std::vector<TripleId>& test,
                                          const TripleSet& known) {
  std::vector<RankResult> out(test.size());
  const auto& nodes = model_graph.nodes();
  parallel_for(test.size(), [&](size_t i) {
    const TripleId& t = test[i];
    double test_score = score_of(t, scores, model_graph);
    size_t greater = 0, equal = 0;
    for (NodeId node : nodes) {
      if (node == t.o) continue;
      TripleId cand{t.s, t.p, node};
      if (cand == t || known.count(cand)) continue;
      double s = score_of(cand, scores, model_graph);
      if (s > test_score) ++greater;
      else if (s == test_score) ++equal;
    }
    RankResult r;
    r.test_triple = t;
    r.rank = 1.0 + static_cast<double>(greater) + static_cast<double>(equal) / 2.0;
    r.reciprocal = 1.0 / r.rank;
    out[i] = r;
  });
  return out;
}

void write_report_csv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot write report file: " + path);
  }
  char buf[64];
  out << "metric,value\n";
  std::snprintf(buf, sizeof(buf), "%.6f", report.mrr);
  out << "mrr," << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.4f", report.hits_at_1);
  out << "hits_at_1," << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.4f", report.hits_at_3);
  out << "hits_at_3," << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.4f", report.hits_at_10);
  out << "hits_at_10," << buf << '\n';
  out << "n_test," << report.n_test << '\n';
}

void write_ranks_tsv(const std::string& path, const std::vector<RankResult>& ranks,
                     const Dictionary& dict) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot write ranks file: " + path);
  }
  char buf[64];
  for (const auto& r : ranks) {
    std::snprintf(buf, sizeof(buf), "%.17g\t%.17g", r.rank, r.reciprocal);
    out << dict.term(r.test_triple.s).to_ntriples() << '\t'
        << dict.term(r.test_triple.p).to_ntriples() << '\t'
        << dict.term(r.test_triple.o).to_ntriples() << '\t' << buf << '\n';
  }
}

void write_gamma_sweep_csv(const std::string& path,
                           const std::vector<std::pair<uint64_t, double>>& rows) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot write sweep file: " + path);
  }
  char buf[64];
  out << "gamma,hits_at_10\n";
  for (const auto& [gamma, hits] : rows) {
    std::snprintf(buf, sizeof(buf), "%.4f", hits);
    out << gamma << ',' << buf << '\n';
  }
}

MappingFolds split_mapping(const std::vector<std::pair<Term, Term>>& mapping,
                           double fold_fraction, uint64_t seed) {
  if (mapping.size() < 10) {
    throw std::invalid_argument(
        "split_mapping: mapping too small for a holdout split (" +
        std::to_string(mapping.size()) + " pairs)");
  }
  std::vector<size_t> order(mapping.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x5A5A));
  // Fisher-Yates with the reproducible generator.
  for (size_t i = order.size() - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i + 1));
    std::swap(order[i], order[j]);
  }
  size_t train_count = static_cast<size_t>(
      static_cast<double>(mapping.size()) * fold_fraction);
  train_count = std::clamp<size_t>(train_count, 1, mapping.size() - 1);
  MappingFolds folds;
  for (size_t i = 0; i < order.size(); ++i) {
    (i < train_count ? folds.train : folds.held_out).push_back(mapping[order[i]]);
  }
  return folds;
}

double sameas_recall(const MappingFolds& folds,
                     const std::vector<ScoredTriple>& predicted_links) {
  if (folds.held_out.empty()) return 0.0;
  std::unordered_set<RawTriple, RawTripleHash> predicted;
  for (const auto& link : predicted_links) {
    predicted.insert(link.triple);
  }
  Term same_as = Term::iri(vocab::kOwlSameAs);
  size_t hit = 0;
  for (const auto& [a, b] : folds.held_out) {
    RawTriple fwd{a, same_as, b};
    RawTriple rev{b, same_as, a};
    if (predicted.count(fwd) || predicted.count(rev)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(folds.held_out.size());
}

}  // namespace mandolin
