#include "mandolin/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mandolin/ntriples.hpp"
#include "mandolin/parallel.hpp"
#include "mandolin/rng.hpp"

namespace mandolin {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Truth lookup with one hidden atom overridden.
struct TruthView {
  const GroundNetwork& net;
  const std::vector<uint8_t>& hidden_state;  // indexed like net.hidden
  const std::vector<uint32_t>& hidden_slot;  // atom id -> hidden index or ~0u

  bool value(AtomId atom, AtomId override_atom, bool override_value) const {
    if (atom == override_atom) return override_value;
    uint32_t slot = hidden_slot[atom];
    if (slot == UINT32_MAX) return true;  // evidence is clamped true
    return hidden_state[slot] != 0;
  }
};

double conditional_delta(const GroundNetwork& net,
                         const std::vector<uint8_t>& state,
                         const std::vector<uint32_t>& slot, size_t hidden_index) {
  AtomId atom = net.hidden[hidden_index];
  TruthView view{net, state, slot};
  double delta = 0.0;
  for (uint32_t fi : net.adjacency[atom]) {
    const Factor& f = net.factors[fi];
    auto sat_with = [&](bool v) {
      bool b0 = view.value(f.body0, atom, v);
      bool b1 = f.body1 == kNoAtom ? true : view.value(f.body1, atom, v);
      bool h = view.value(f.head, atom, v);
      return f.satisfied(b0, b1, h);
    };
    delta += f.weight * (static_cast<double>(sat_with(true)) -
                         static_cast<double>(sat_with(false)));
  }
  return delta;
}

std::vector<uint32_t> build_hidden_slots(const GroundNetwork& net) {
  std::vector<uint32_t> slot(net.atoms.size(), UINT32_MAX);
  for (uint32_t i = 0; i < net.hidden.size(); ++i) {
    slot[net.hidden[i]] = i;
  }
  return slot;
}

}  // namespace

double conditional_probability(const GroundNetwork& network,
                               const std::vector<uint8_t>& state,
                               size_t hidden_index) {
  auto slot = build_hidden_slots(network);
  return sigmoid(conditional_delta(network, state, slot, hidden_index));
}

MarginalTable gibbs_sample(const GroundNetwork& network,
                           const InferenceConfig& config) {
  MarginalTable table;
  table.atom_ids = network.hidden;
  const size_t h = network.hidden.size();
  if (h == 0) return table;

  uint64_t gamma = config.gamma;
  if (gamma == 0) gamma = 100 * std::max<uint64_t>(network.evidence_count(), 1);

  const auto slot = build_hidden_slots(network);
  const unsigned chains = std::max(1u, config.chains);
  std::vector<std::vector<double>> per_chain(chains);

  parallel_for(chains, [&](size_t chain) {
    Rng rng(derive_seed(config.seed, chain));
    std::vector<uint8_t> state(h);
    for (size_t i = 0; i < h; ++i) {
      state[i] = rng.next_double() < 0.5 ? 1 : 0;
    }

    const uint64_t total_sweeps = gamma / h;
    uint64_t burn_sweeps = 0;
    if (total_sweeps > 0) {
      burn_sweeps = static_cast<uint64_t>(
          static_cast<double>(total_sweeps) * config.burn_in_fraction);
      if (burn_sweeps >= total_sweeps) burn_sweeps = total_sweeps - 1;
    }

    std::vector<uint64_t> counts(h, 0);
    uint64_t samples = 0;
    uint64_t update = 0;
    for (uint64_t sweep = 0; sweep < total_sweeps; ++sweep) {
      for (size_t i = 0; i < h; ++i, ++update) {
        double p = sigmoid(conditional_delta(network, state, slot, i));
        state[i] = rng.next_double() < p ? 1 : 0;
      }
      if (sweep >= burn_sweeps) {
        for (size_t i = 0; i < h; ++i) counts[i] += state[i];
        ++samples;
      }
    }
    // Trailing partial sweep so exactly gamma updates run.
    for (size_t i = 0; update < gamma; ++i, ++update) {
      double p = sigmoid(conditional_delta(network, state, slot, i % h));
      state[i % h] = rng.next_double() < p ? 1 : 0;
    }
    if (samples == 0) {  // gamma < |hidden|: fall back to the final state
      for (size_t i = 0; i < h; ++i) counts[i] += state[i];
      samples = 1;
    }

    auto& out = per_chain[chain];
    out.resize(h);
    for (size_t i = 0; i < h; ++i) {
      out[i] = static_cast<double>(counts[i]) / static_cast<double>(samples);
    }
  });

  table.raw.assign(h, 0.0);
  for (const auto& chain : per_chain) {
    for (size_t i = 0; i < h; ++i) table.raw[i] += chain[i];
  }
  for (size_t i = 0; i < h; ++i) table.raw[i] /= chains;
  return table;
}

MarginalTable exact_marginals(const GroundNetwork& network) {
  MarginalTable table;
  table.atom_ids = network.hidden;
  const size_t h = network.hidden.size();
  if (h == 0) return table;
  if (h > 20) {
    throw std::invalid_argument(
        "exact_marginals: refusing network with " + std::to_string(h) +
        " hidden atoms (cap 20)");
  }

  const auto slot = build_hidden_slots(network);
  auto truth = [&](AtomId atom, uint32_t mask) {
    uint32_t s = slot[atom];
    return s == UINT32_MAX ? true : ((mask >> s) & 1u) != 0;
  };

  const uint32_t states = 1u << h;
  std::vector<double> weight_sum(h, 0.0);
  double z = 0.0;
  for (uint32_t mask = 0; mask < states; ++mask) {
    double energy = 0.0;
    for (const Factor& f : network.factors) {
      bool b0 = truth(f.body0, mask);
      bool b1 = f.body1 == kNoAtom ? true : truth(f.body1, mask);
      bool hd = truth(f.head, mask);
      if (f.satisfied(b0, b1, hd)) energy += f.weight;
    }
    double w = std::exp(energy);
    z += w;
    for (size_t i = 0; i < h; ++i) {
      if ((mask >> i) & 1u) weight_sum[i] += w;
    }
  }

  table.raw.resize(h);
  for (size_t i = 0; i < h; ++i) table.raw[i] = weight_sum[i] / z;
  return table;
}

void normalize_scores(MarginalTable& table) {
  table.normalized.assign(table.raw.size(), 1.0);
  if (table.raw.empty()) return;
  auto [mn_it, mx_it] = std::minmax_element(table.raw.begin(), table.raw.end());
  double mn = *mn_it, mx = *mx_it;
  if (mx == mn) return;  // degenerate: everything scores 1.0
  for (size_t i = 0; i < table.raw.size(); ++i) {
    table.normalized[i] = (table.raw[i] - mn) / (mx - mn);
  }
}

namespace {

std::vector<size_t> score_order(const GroundNetwork& network,
                                const MarginalTable& table) {
  std::vector<size_t> order(table.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (table.normalized[x] != table.normalized[y]) {
      return table.normalized[x] > table.normalized[y];
    }
    return network.atoms[table.atom_ids[x]].triple <
           network.atoms[table.atom_ids[y]].triple;
  });
  return order;
}

}  // namespace

PredictionSet predict(const GroundNetwork& network, const MarginalTable& table,
                      double tau) {
  if (table.normalized.size() != table.raw.size()) {
    throw std::logic_error("predict: normalize_scores must run first");
  }
  PredictionSet out;
  for (size_t i : score_order(network, table)) {
    double score = table.normalized[i];
    if (!(score > tau)) break;  // sorted descending
    out.links.push_back(
        PredictedLink{network.atoms[table.atom_ids[i]].triple, score});
  }
  return out;
}

void write_predictions_tsv(const std::string& path, const GroundNetwork& network,
                           const MarginalTable& table) {
  if (table.normalized.size() != table.raw.size()) {
    throw std::logic_error("write_predictions_tsv: normalize_scores must run first");
  }
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot write predictions file: " + path);
  }
  char buf[40];
  for (size_t i : score_order(network, table)) {
    const TripleId& t = network.atoms[table.atom_ids[i]].triple;
    std::snprintf(buf, sizeof(buf), "%.17g", table.normalized[i]);
    out << network.dict.term(t.s).to_ntriples() << '\t'
        << network.dict.term(t.p).to_ntriples() << '\t'
        << network.dict.term(t.o).to_ntriples() << '\t' << buf << '\n';
  }
}

std::vector<ScoredTriple> read_predictions_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open predictions file: " + path);
  }
  std::vector<ScoredTriple> out;
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
      throw std::runtime_error("predictions line " + std::to_string(line_number) +
                               ": expected 4 columns");
    }
    ScoredTriple st;
    st.triple.s = parse_ntriples_term(cols[0]);
    st.triple.p = parse_ntriples_term(cols[1]);
    st.triple.o = parse_ntriples_term(cols[2]);
    st.score = std::stod(cols[3]);
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace mandolin
