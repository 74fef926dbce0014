#include "mandolin/enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <set>
#include <unordered_set>

#include "mandolin/ntriples.hpp"

namespace mandolin {

namespace {
constexpr char kPadByte = '\x01';
constexpr double kCeilEps = 1e-9;

// ceil biased downward so float error widens filters instead of losing pairs
size_t safe_ceil(double v) {
  double c = std::ceil(v - kCeilEps);
  return c <= 0 ? 0 : static_cast<size_t>(c);
}
}  // namespace

std::map<NodeId, std::vector<LiteralEntry>> bucket_literals(const EncodedGraph& g) {
  std::map<NodeId, std::vector<LiteralEntry>> buckets;
  for (const auto& t : g.triples()) {
    if (g.dict().term(t.o).is_literal()) {
      buckets[t.p].push_back(LiteralEntry{t.s, t.o});
    }
  }
  return buckets;
}

std::vector<std::string> qgram_set(const std::string& s, int q) {
  std::vector<std::string> grams;
  if (q < 1 || s.empty()) return grams;
  const size_t qs = static_cast<size_t>(q);
  std::string padded;
  const std::string* src = &s;
  if (s.size() < qs) {
    padded.assign(qs - 1, kPadByte);
    padded += s;
    padded.append(qs - 1, kPadByte);
    src = &padded;
  }
  grams.reserve(src->size() - qs + 1);
  for (size_t i = 0; i + qs <= src->size(); ++i) {
    grams.push_back(src->substr(i, qs));
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

double jaccard_qgrams(const std::string& a, const std::string& b, int q) {
  auto ga = qgram_set(a, q);
  auto gb = qgram_set(b, q);
  size_t i = 0, j = 0, inter = 0;
  while (i < ga.size() && j < gb.size()) {
    if (ga[i] < gb[j]) ++i;
    else if (gb[j] < ga[i]) ++j;
    else { ++inter; ++i; ++j; }
  }
  size_t uni = ga.size() + gb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<SimilarPair> string_similarity_join(
    const std::vector<std::string>& values, double theta_min, int q) {
  std::vector<SimilarPair> out;
  const size_t n = values.size();
  if (n < 2) return out;

  // Tokenize and build document frequencies.
  std::unordered_map<std::string, uint32_t> token_ids;
  std::vector<std::string> token_text;
  std::vector<uint32_t> df;
  std::vector<std::vector<uint32_t>> records(n);
  for (size_t r = 0; r < n; ++r) {
    for (auto& gram : qgram_set(values[r], q)) {
      auto [it, inserted] = token_ids.emplace(gram, token_text.size());
      if (inserted) {
        token_text.push_back(gram);
        df.push_back(0);
      }
      records[r].push_back(it->second);
      ++df[it->second];
    }
  }

  // Canonical token order: rare first, ties by gram text.
  std::vector<uint32_t> order(token_text.size());
  for (uint32_t t = 0; t < order.size(); ++t) order[t] = t;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (df[a] != df[b]) return df[a] < df[b];
    return token_text[a] < token_text[b];
  });
  std::vector<uint32_t> rank(token_text.size());
  for (uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  for (auto& rec : records) {
    for (auto& t : rec) t = rank[t];
    std::sort(rec.begin(), rec.end());
  }

  // Process records by ascending size so candidates are never larger.
  std::vector<uint32_t> by_size;
  by_size.reserve(n);
  for (uint32_t r = 0; r < n; ++r) {
    if (!records[r].empty()) by_size.push_back(r);
  }
  std::stable_sort(by_size.begin(), by_size.end(), [&](uint32_t a, uint32_t b) {
    return records[a].size() < records[b].size();
  });

  struct Posting { uint32_t record; uint32_t position; };
  std::unordered_map<uint32_t, std::vector<Posting>> index;
  std::unordered_map<uint32_t, size_t> overlap;  // candidate -> prefix hits
  const double th = theta_min;

  for (uint32_t xi : by_size) {
    const auto& x = records[xi];
    const size_t sx = x.size();
    const size_t min_size = safe_ceil(th * static_cast<double>(sx));
    const size_t probe_prefix = sx - safe_ceil(th * static_cast<double>(sx)) + 1;
    overlap.clear();

    for (size_t i = 0; i < probe_prefix && i < sx; ++i) {
      auto it = index.find(x[i]);
      if (it == index.end()) continue;
      for (const auto& post : it->second) {
        const auto& y = records[post.record];
        const size_t sy = y.size();
        if (sy < min_size) continue;
        auto [oit, inserted] = overlap.emplace(post.record, 0);
        if (inserted) {
          // positional filter on the first shared prefix token
          size_t alpha = safe_ceil(th / (1.0 + th) * static_cast<double>(sx + sy));
          size_t best = 1 + std::min(sx - i - 1, sy - post.position - 1);
          if (best < alpha) {
            overlap.erase(oit);
            continue;
          }
        }
        ++oit->second;
      }
    }

    // Verify candidates exactly, with a suffix bound for early exit.
    std::vector<uint32_t> cands;
    cands.reserve(overlap.size());
    for (const auto& [r, hits] : overlap) {
      if (hits > 0) cands.push_back(r);
    }
    std::sort(cands.begin(), cands.end());
    for (uint32_t yi : cands) {
      const auto& y = records[yi];
      const size_t sy = y.size();
      const size_t alpha = safe_ceil(th / (1.0 + th) * static_cast<double>(sx + sy));
      size_t i = 0, j = 0, inter = 0;
      bool viable = true;
      while (i < sx && j < sy) {
        if (inter + std::min(sx - i, sy - j) < alpha) { viable = false; break; }
        if (x[i] < y[j]) ++i;
        else if (y[j] < x[i]) ++j;
        else { ++inter; ++i; ++j; }
      }
      if (!viable || inter < alpha) continue;
      double sim = static_cast<double>(inter) /
                   static_cast<double>(sx + sy - inter);
      if (sim >= th) {
        uint32_t a = std::min(xi, yi), b = std::max(xi, yi);
        out.push_back(SimilarPair{a, b, sim});
      }
    }

    // Index the mid-prefix of x for later (larger) records.
    const size_t index_prefix =
        sx - safe_ceil(2.0 * th / (1.0 + th) * static_cast<double>(sx)) + 1;
    for (size_t i = 0; i < index_prefix && i < sx; ++i) {
      index[x[i]].push_back(Posting{xi, static_cast<uint32_t>(i)});
    }
  }

  std::sort(out.begin(), out.end(), [](const SimilarPair& a, const SimilarPair& b) {
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return out;
}

std::vector<SimilarPair> numeric_similarity_join(const std::vector<double>& values,
                                                 double max_diff) {
  std::vector<SimilarPair> out;
  if (values.size() < 2 || max_diff <= 0) return out;
  std::vector<uint32_t> idx(values.size());
  for (uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  for (size_t i = 0; i < idx.size(); ++i) {
    for (size_t j = i + 1; j < idx.size(); ++j) {
      double diff = values[idx[j]] - values[idx[i]];
      if (!(diff < max_diff)) break;
      uint32_t a = std::min(idx[i], idx[j]), b = std::max(idx[i], idx[j]);
      out.push_back(SimilarPair{a, b, diff});
    }
  }
  std::sort(out.begin(), out.end(), [](const SimilarPair& a, const SimilarPair& b) {
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return out;
}

std::string format_threshold(double theta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", theta);
  std::string s(buf);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) {
    s += ".0";
  }
  return s;
}

namespace {

std::string property_local_name(const Term& property) {
  const std::string& iri = property.lexical;
  size_t pos = iri.find_last_of("#/:");
  std::string local = pos == std::string::npos ? iri : iri.substr(pos + 1);
  if (local.empty()) local = "p";
  for (char& c : local) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return local;
}

}  // namespace

std::string similarity_predicate_iri(const Term& base_property, double theta,
                                     bool numeric) {
  std::string name = vocab::kSimilarityNs + property_local_name(base_property);
  if (numeric) name += "_num";
  return name + "_" + format_threshold(theta);
}

std::vector<TripleId> emit_similarity_triples(Dictionary& dict,
                                              const std::vector<SubjectSimilarity>& pairs,
                                              const Term& base_property,
                                              const std::vector<double>& thresholds) {
  std::vector<TripleId> out;
  std::vector<NodeId> predicate_ids(thresholds.size(), kNoId);
  for (const auto& pair : pairs) {
    if (pair.a == pair.b) continue;
    for (size_t k = 0; k < thresholds.size(); ++k) {
      if (thresholds[k] > pair.similarity) continue;
      if (predicate_ids[k] == kNoId) {
        predicate_ids[k] = dict.intern(
            Term::iri(similarity_predicate_iri(base_property, thresholds[k])));
      }
      out.push_back(TripleId{pair.a, predicate_ids[k], pair.b});
      out.push_back(TripleId{pair.b, predicate_ids[k], pair.a});
    }
  }
  return out;
}

namespace {

const std::unordered_set<std::string>& numeric_datatypes() {
  static const std::unordered_set<std::string> kSet = [] {
    std::unordered_set<std::string> s;
    const char* names[] = {
        "integer", "int", "long", "short", "byte", "decimal", "float",
        "double", "nonNegativeInteger", "nonPositiveInteger",
        "negativeInteger", "positiveInteger", "unsignedLong", "unsignedInt",
        "unsignedShort", "unsignedByte"};
    for (const char* n : names) {
      s.insert(std::string("http://www.w3.org/2001/XMLSchema#") + n);
    }
    return s;
  }();
  return kSet;
}

long days_from_civil(long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

std::optional<double> parse_datetime_epoch(const std::string& lex, bool date_only) {
  long y;
  unsigned mo, d, h = 0, mi = 0;
  double sec = 0.0;
  int consumed = 0;
  if (date_only) {
    if (std::sscanf(lex.c_str(), "%ld-%u-%u%n", &y, &mo, &d, &consumed) < 3) {
      return std::nullopt;
    }
  } else {
    if (std::sscanf(lex.c_str(), "%ld-%u-%uT%u:%u:%lf%n", &y, &mo, &d, &h, &mi,
                    &sec, &consumed) < 6) {
      return std::nullopt;
    }
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 24 || mi > 59 || sec >= 61.0) {
    return std::nullopt;
  }
  double epoch = static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 +
                 h * 3600.0 + mi * 60.0 + sec;
  // optional zone offset
  std::string rest = lex.substr(static_cast<size_t>(consumed));
  if (!rest.empty() && rest != "Z") {
    int zh, zm;
    char sign;
    if (std::sscanf(rest.c_str(), "%c%d:%d", &sign, &zh, &zm) == 3 &&
        (sign == '+' || sign == '-')) {
      int offset = zh * 3600 + zm * 60;
      epoch += (sign == '+' ? -offset : offset);
    } else {
      return std::nullopt;
    }
  }
  return epoch;
}

}  // namespace

std::optional<double> literal_numeric_value(const Term& t) {
  if (!t.is_literal() || t.datatype_iri.empty()) return std::nullopt;
  const std::string& dt = t.datatype_iri;
  if (dt == "http://www.w3.org/2001/XMLSchema#dateTime") {
    return parse_datetime_epoch(t.lexical, false);
  }
  if (dt == "http://www.w3.org/2001/XMLSchema#date") {
    return parse_datetime_epoch(t.lexical, true);
  }
  if (!numeric_datatypes().count(dt)) return std::nullopt;
  const char* begin = t.lexical.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || end != begin + t.lexical.size()) return std::nullopt;
  if (std::isnan(v)) return std::nullopt;
  return v;
}

// --- resolver and import ---------------------------------------------------

Resolver Resolver::from_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open resolver manifest: " + path);
  }
  Resolver r;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("resolver manifest line " +
                               std::to_string(line_number) +
                               ": expected 'prefix<TAB>path'");
    }
    r.add(line.substr(0, tab), line.substr(tab + 1));
  }
  return r;
}

void Resolver::add(std::string prefix, std::string path) {
  entries_.emplace_back(std::move(prefix), std::move(path));
}

std::optional<std::pair<std::string, std::string>> Resolver::match(
    const std::string& iri) const {
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& e : entries_) {
    if (iri.rfind(e.first, 0) == 0) {
      if (!best || e.first.size() > best->first.size()) best = &e;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

EncodedGraph import_ontologies(const EncodedGraph& g, const Resolver& resolver,
                               int depth, ImportReport* report) {
  ImportReport local;
  EncodedGraph merged = g;
  if (resolver.empty() || depth <= 0) {
    if (report) *report = std::move(local);
    return merged;
  }

  std::set<std::string> imported;  // prefixes already pulled in
  size_t file_counter = 0;
  for (int round = 0; round < depth; ++round) {
    std::set<std::pair<std::string, std::string>> needed;
    for (size_t id = 0; id < merged.dict().size(); ++id) {
      const Term& t = merged.dict().term(static_cast<NodeId>(id));
      if (!t.is_iri()) continue;
      auto entry = resolver.match(t.lexical);
      if (entry && !imported.count(entry->first)) {
        needed.insert(*entry);
      }
    }
    if (needed.empty()) break;
    for (const auto& [prefix, path] : needed) {
      imported.insert(prefix);
      NtParseOptions opts;
      opts.lenient = true;
      opts.blank_scope = "import" + std::to_string(file_counter++);
      std::vector<RawTriple> raw;
      try {
        raw = parse_ntriples_file(path, opts);
      } catch (const std::exception& e) {
        local.warnings.push_back("skipping import of " + prefix + ": " + e.what());
        continue;
      }
      local.imported_files.push_back(path);
      merged = EncodedGraph::merge(merged, EncodedGraph::encode(raw));
    }
  }
  if (report) *report = std::move(local);
  return merged;
}

// --- forward chaining ------------------------------------------------------

namespace {

struct ClosureEngine {
  DynamicGraph store;
  const ClosureRuleSet& rules;
  size_t cap;
  size_t derived = 0;
  std::deque<TripleId> frontier;

  NodeId id_type, id_domain, id_range, id_subprop, id_subclass;
  NodeId id_sameas, id_inverse, id_symmetric_cls, id_transitive_cls;

  std::unordered_map<NodeId, std::vector<NodeId>> dom, rng, subp, subp_rev,
      subc, subc_rev, inv;
  std::unordered_set<NodeId> symmetric, transitive;

  ClosureEngine(const EncodedGraph& g, const ClosureRuleSet& r, size_t cap_arg)
      : store(g), rules(r), cap(cap_arg) {
    if (cap == 0) cap = 10 * std::max<size_t>(g.triple_count(), 1);
    id_type = store.dict().intern(Term::iri(vocab::kRdfType));
    id_domain = store.dict().intern(Term::iri(vocab::kRdfsDomain));
    id_range = store.dict().intern(Term::iri(vocab::kRdfsRange));
    id_subprop = store.dict().intern(Term::iri(vocab::kRdfsSubPropertyOf));
    id_subclass = store.dict().intern(Term::iri(vocab::kRdfsSubClassOf));
    id_sameas = store.dict().intern(Term::iri(vocab::kOwlSameAs));
    id_inverse = store.dict().intern(Term::iri(vocab::kOwlInverseOf));
    id_symmetric_cls = store.dict().intern(Term::iri(vocab::kOwlSymmetricProperty));
    id_transitive_cls = store.dict().intern(Term::iri(vocab::kOwlTransitiveProperty));
  }

  bool valid_subject(NodeId s) const { return !store.dict().term(s).is_literal(); }
  bool valid_predicate(NodeId p) const { return store.dict().term(p).is_iri(); }

  void derive(NodeId s, NodeId p, NodeId o) {
    if (!valid_subject(s) || !valid_predicate(p)) return;
    TripleId t{s, p, o};
    if (!store.add(t)) return;
    ++derived;
    if (derived > cap) {
      throw std::runtime_error(
          "forward chaining exceeded derived-triple cap (" +
          std::to_string(cap) + "); graph schema likely explosive");
    }
    frontier.push_back(t);
  }

  static void push_unique(std::vector<NodeId>& v, NodeId id) {
    if (std::find(v.begin(), v.end(), id) == v.end()) v.push_back(id);
  }

  // Copies are taken where we mutate the store under iteration.
  std::vector<std::pair<NodeId, NodeId>> snapshot_predicate(NodeId p) const {
    auto span = store.triples_of_predicate(p);
    return {span.begin(), span.end()};
  }

  void process(const TripleId& t) {
    // Schema side: a new schema triple retroactively applies to the store.
    if (t.p == id_subprop && rules.subproperty && valid_predicate(t.s) &&
        valid_predicate(t.o)) {
      push_unique(subp[t.s], t.o);
      push_unique(subp_rev[t.o], t.s);
      for (NodeId r : std::vector<NodeId>(subp[t.o])) {
        derive(t.s, id_subprop, r);
      }
      for (NodeId q : std::vector<NodeId>(subp_rev[t.s])) {
        derive(q, id_subprop, t.o);
      }
      for (auto [x, y] : snapshot_predicate(t.s)) derive(x, t.o, y);
    }
    if (t.p == id_subclass && rules.subclass) {
      push_unique(subc[t.s], t.o);
      push_unique(subc_rev[t.o], t.s);
      for (NodeId e : std::vector<NodeId>(subc[t.o])) {
        derive(t.s, id_subclass, e);
      }
      for (NodeId c : std::vector<NodeId>(subc_rev[t.s])) {
        derive(c, id_subclass, t.o);
      }
      auto instances = store.subjects_of(t.s, id_type);
      for (NodeId x : std::vector<NodeId>(instances.begin(), instances.end())) {
        derive(x, id_type, t.o);
      }
    }
    if (t.p == id_domain && rules.domain) {
      push_unique(dom[t.s], t.o);
      for (auto [x, y] : snapshot_predicate(t.s)) {
        (void)y;
        derive(x, id_type, t.o);
      }
    }
    if (t.p == id_range && rules.range) {
      push_unique(rng[t.s], t.o);
      for (auto [x, y] : snapshot_predicate(t.s)) {
        (void)x;
        derive(y, id_type, t.o);
      }
    }
    if (t.p == id_inverse && rules.inverse_of && valid_predicate(t.s) &&
        valid_predicate(t.o)) {
      push_unique(inv[t.s], t.o);
      derive(t.o, id_inverse, t.s);
      for (auto [x, y] : snapshot_predicate(t.s)) derive(y, t.o, x);
    }
    if (t.p == id_type && t.o == id_symmetric_cls && rules.symmetric &&
        valid_predicate(t.s)) {
      if (symmetric.insert(t.s).second) {
        for (auto [x, y] : snapshot_predicate(t.s)) derive(y, t.s, x);
      }
    }
    if (t.p == id_type && t.o == id_transitive_cls && rules.transitive &&
        valid_predicate(t.s)) {
      if (transitive.insert(t.s).second) {
        for (auto [x, y] : snapshot_predicate(t.s)) {
          auto zs = store.objects_of(y, t.s);
          for (NodeId z : std::vector<NodeId>(zs.begin(), zs.end())) {
            derive(x, t.s, z);
          }
        }
      }
    }

    // Data side: the triple joins against accumulated schema and data.
    if (rules.subproperty) {
      auto it = subp.find(t.p);
      if (it != subp.end()) {
        for (NodeId q : std::vector<NodeId>(it->second)) derive(t.s, q, t.o);
      }
    }
    if (rules.domain) {
      auto it = dom.find(t.p);
      if (it != dom.end()) {
        for (NodeId c : std::vector<NodeId>(it->second)) derive(t.s, id_type, c);
      }
    }
    if (rules.range) {
      auto it = rng.find(t.p);
      if (it != rng.end()) {
        for (NodeId c : std::vector<NodeId>(it->second)) derive(t.o, id_type, c);
      }
    }
    if (t.p == id_type && rules.subclass) {
      auto it = subc.find(t.o);
      if (it != subc.end()) {
        for (NodeId d : std::vector<NodeId>(it->second)) derive(t.s, id_type, d);
      }
    }
    if (t.p == id_sameas && rules.same_as) {
      derive(t.o, id_sameas, t.s);
      auto onward = store.objects_of(t.o, id_sameas);
      for (NodeId z : std::vector<NodeId>(onward.begin(), onward.end())) {
        derive(t.s, id_sameas, z);
      }
      auto inward = store.subjects_of(t.s, id_sameas);
      for (NodeId w : std::vector<NodeId>(inward.begin(), inward.end())) {
        derive(w, id_sameas, t.o);
      }
    }
    if (rules.symmetric && symmetric.count(t.p)) {
      derive(t.o, t.p, t.s);
    }
    if (rules.transitive && transitive.count(t.p)) {
      auto onward = store.objects_of(t.o, t.p);
      for (NodeId z : std::vector<NodeId>(onward.begin(), onward.end())) {
        derive(t.s, t.p, z);
      }
      auto inward = store.subjects_of(t.s, t.p);
      for (NodeId w : std::vector<NodeId>(inward.begin(), inward.end())) {
        derive(w, t.p, t.o);
      }
    }
    if (rules.inverse_of) {
      auto it = inv.find(t.p);
      if (it != inv.end()) {
        for (NodeId q : std::vector<NodeId>(it->second)) derive(t.o, q, t.s);
      }
    }
  }

  EncodedGraph run() {
    for (const auto& t : std::vector<TripleId>(store.triples())) {
      frontier.push_back(t);
    }
    while (!frontier.empty()) {
      TripleId t = frontier.front();
      frontier.pop_front();
      process(t);
    }
    return store.freeze();
  }
};

}  // namespace

EncodedGraph forward_chain(const EncodedGraph& g, const ClosureRuleSet& rules,
                           size_t cap) {
  ClosureEngine engine(g, rules, cap);
  return engine.run();
}

// --- whole-module driver ---------------------------------------------------

namespace {

bool is_string_literal(const Term& t) {
  if (!t.is_literal()) return false;
  if (!t.language_tag.empty()) return true;
  if (t.datatype_iri.empty() || t.datatype_iri == vocab::kXsdString) return true;
  // Unknown datatypes are compared as strings; numeric/time ones are not.
  if (numeric_datatypes().count(t.datatype_iri)) return false;
  if (t.datatype_iri == "http://www.w3.org/2001/XMLSchema#dateTime" ||
      t.datatype_iri == "http://www.w3.org/2001/XMLSchema#date") {
    return false;
  }
  return true;
}

void append_similarity_for_bucket(DynamicGraph& store, const EncodedGraph& g,
                                  NodeId property,
                                  const std::vector<LiteralEntry>& entries,
                                  const SimilarityConfig& cfg,
                                  EnrichmentReport* report) {
  const Term& property_term = g.dict().term(property);

  // String route.
  std::vector<std::string> strings;
  std::vector<NodeId> string_subjects;
  // Numeric/time route.
  std::vector<double> numbers;
  std::vector<NodeId> numeric_subjects;

  for (const auto& e : entries) {
    const Term& lit = g.dict().term(e.literal);
    if (is_string_literal(lit)) {
      strings.push_back(lit.lexical);
      string_subjects.push_back(e.subject);
    } else {
      auto v = literal_numeric_value(lit);
      if (v) {
        numbers.push_back(*v);
        numeric_subjects.push_back(e.subject);
      } else if (report) {
        ++report->numeric_skipped;
      }
    }
  }

  auto aggregate = [](const std::vector<SimilarPair>& pairs,
                      const std::vector<NodeId>& subjects,
                      bool keep_max) {
    std::map<std::pair<NodeId, NodeId>, double> best;
    for (const auto& p : pairs) {
      NodeId a = subjects[p.i], b = subjects[p.j];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      auto [it, inserted] = best.emplace(std::make_pair(a, b), p.similarity);
      if (!inserted && keep_max && p.similarity > it->second) {
        it->second = p.similarity;
      }
    }
    std::vector<SubjectSimilarity> out;
    out.reserve(best.size());
    for (const auto& [key, sim] : best) {
      out.push_back(SubjectSimilarity{key.first, key.second, sim});
    }
    return out;
  };

  if (!cfg.thresholds.empty() && strings.size() >= 2) {
    double theta_min = cfg.thresholds.front();
    auto pairs = string_similarity_join(strings, theta_min, cfg.q);
    auto subject_pairs = aggregate(pairs, string_subjects, /*keep_max=*/true);
    auto triples = emit_similarity_triples(store.dict(), subject_pairs,
                                           property_term, cfg.thresholds);
    for (const auto& t : triples) {
      if (store.add(t) && report) ++report->similarity_triples;
    }
    if (cfg.emit_subproperty_triples && !subject_pairs.empty()) {
      NodeId subprop = store.dict().intern(Term::iri(vocab::kRdfsSubPropertyOf));
      for (size_t k = 1; k < cfg.thresholds.size(); ++k) {
        NodeId hi = store.dict().intern(Term::iri(
            similarity_predicate_iri(property_term, cfg.thresholds[k])));
        NodeId lo = store.dict().intern(Term::iri(
            similarity_predicate_iri(property_term, cfg.thresholds[k - 1])));
        store.add(TripleId{hi, subprop, lo});
      }
    }
  }

  double bound = cfg.numeric_threshold;
  auto override_it = cfg.numeric_threshold_by_property.find(property_term.lexical);
  if (override_it != cfg.numeric_threshold_by_property.end()) {
    bound = override_it->second;
  }
  if (bound > 0 && numbers.size() >= 2) {
    auto pairs = numeric_similarity_join(numbers, bound);
    auto subject_pairs = aggregate(pairs, numeric_subjects, /*keep_max=*/false);
    NodeId pred = store.dict().intern(
        Term::iri(similarity_predicate_iri(property_term, bound, /*numeric=*/true)));
    for (const auto& sp : subject_pairs) {
      if (store.add(TripleId{sp.a, pred, sp.b}) && report) {
        ++report->similarity_triples;
      }
      if (store.add(TripleId{sp.b, pred, sp.a}) && report) {
        ++report->similarity_triples;
      }
    }
  }
}

}  // namespace

EncodedGraph enrich(const EncodedGraph& g, const EnrichmentConfig& config,
                    const Resolver& resolver, EnrichmentReport* report) {
  EnrichmentReport local;
  local.input_triples = g.triple_count();

  EncodedGraph current = g;
  if (config.import_ontologies) {
    current = import_ontologies(current, resolver, config.import_depth,
                                &local.import_report);
  }

  if (config.similarity) {
    auto buckets = bucket_literals(current);
    DynamicGraph store(current);
    for (const auto& [property, entries] : buckets) {
      append_similarity_for_bucket(store, current, property, entries,
                                   config.sim, &local);
    }
    current = store.freeze();
  }

  if (config.closure) {
    size_t before = current.triple_count();
    current = forward_chain(current, ClosureRuleSet{}, config.closure_cap);
    local.closure_derived = current.triple_count() - before;
  }

  local.output_triples = current.triple_count();
  if (report) *report = std::move(local);
  return current;
}

}  // namespace mandolin
