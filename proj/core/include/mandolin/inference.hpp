#pragma once

#include <string>
#include <vector>

#include "mandolin/grounding.hpp"

namespace mandolin {

struct InferenceConfig {
  // Total single-atom updates; one sweep costs |hidden| updates.
  // 0 selects the default 100 * |E| (evidence atom count).
  uint64_t gamma = 0;
  double burn_in_fraction = 0.1;
  double tau = 0.5;
  uint64_t seed = 0;
  unsigned chains = 1;
};

struct MarginalTable {
  std::vector<AtomId> atom_ids;   // the network's hidden atoms, ascending
  std::vector<double> raw;        // sample frequency per atom
  std::vector<double> normalized; // empty until normalize_scores

  size_t size() const { return atom_ids.size(); }
};

// sigma( sum over factors touching the atom of w * (sat(atom=1) - sat(atom=0)) )
// with evidence clamped true and other hidden atoms read from `state`
// (indexed like network.hidden).
double conditional_probability(const GroundNetwork& network,
                               const std::vector<uint8_t>& state, size_t hidden_index);

// Round-robin single-site Gibbs over the hidden atoms: uniform random init,
// gamma updates, sample frequencies recorded at sweep boundaries after
// burn-in. Multiple chains run independently (in parallel) on derived seeds
// and average their estimates. Deterministic given the config.
MarginalTable gibbs_sample(const GroundNetwork& network, const InferenceConfig& config);

// Exhaustive-enumeration marginals of the clause-factor distribution
//   P(x) = Z^-1 exp( sum_f w_f * sat_f(x) ).
// Refuses networks with more than 20 hidden atoms.
MarginalTable exact_marginals(const GroundNetwork& network);

// Min-max normalization: (m - min) / (max - min); all 1.0 when max == min.
void normalize_scores(MarginalTable& table);

struct PredictedLink {
  TripleId triple;
  double score;
};

struct PredictionSet {
  std::vector<PredictedLink> links;  // score > tau, descending score
};

// Links with normalized score strictly above tau, sorted by descending score
// with (s,p,o) id order breaking ties.
PredictionSet predict(const GroundNetwork& network, const MarginalTable& table,
                      double tau);

// Predictions file: s <TAB> p <TAB> o <TAB> score, N-Triples terms, sorted by
// descending score. Carries every scored hidden atom (the evaluation input);
// the thresholded link set is written separately by the pipeline.
void write_predictions_tsv(const std::string& path, const GroundNetwork& network,
                           const MarginalTable& table);

struct ScoredTriple {
  RawTriple triple;
  double score;
};
std::vector<ScoredTriple> read_predictions_tsv(const std::string& path);

}  // namespace mandolin
