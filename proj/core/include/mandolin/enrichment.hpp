#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mandolin/graph.hpp"

namespace mandolin {

namespace vocab {
inline const std::string kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline const std::string kRdfsDomain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline const std::string kRdfsRange = "http://www.w3.org/2000/01/rdf-schema#range";
inline const std::string kRdfsSubPropertyOf = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
inline const std::string kRdfsSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline const std::string kOwlSameAs = "http://www.w3.org/2002/07/owl#sameAs";
inline const std::string kOwlInverseOf = "http://www.w3.org/2002/07/owl#inverseOf";
inline const std::string kOwlSymmetricProperty = "http://www.w3.org/2002/07/owl#SymmetricProperty";
inline const std::string kOwlTransitiveProperty = "http://www.w3.org/2002/07/owl#TransitiveProperty";
inline const std::string kXsdString = "http://www.w3.org/2001/XMLSchema#string";
// Namespace under which derived similarity predicates live.
inline const std::string kSimilarityNs = "urn:mandolin:sim:";
}  // namespace vocab

struct SimilarityConfig {
  int q = 3;
  // Ascending, all in (0,1].
  std::vector<double> thresholds = {0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6, 0.7, 0.8, 0.9, 1.0};
  // Absolute difference bound for numeric/time literals; <= 0 disables the
  // numeric join. Per-property overrides win over the global value.
  double numeric_threshold = 0.0;
  std::unordered_map<std::string, double> numeric_threshold_by_property;
  // Materialize rdfs:subPropertyOf links between consecutive-threshold
  // similarity predicates (off: the hierarchy stays implicit).
  bool emit_subproperty_triples = false;
};

struct EnrichmentConfig {
  bool similarity = false;
  bool import_ontologies = false;
  bool closure = false;
  SimilarityConfig sim;
  int import_depth = 2;
  // Forward-chaining cap on derived triples; 0 means 10 * |E|.
  size_t closure_cap = 0;
};

// --- literal bucketing -----------------------------------------------------

struct LiteralEntry {
  NodeId subject;
  NodeId literal;
};

// One bucket per predicate that has at least one literal object; keyed map is
// ordered so iteration is deterministic.
std::map<NodeId, std::vector<LiteralEntry>> bucket_literals(const EncodedGraph& g);

// --- q-gram similarity -----------------------------------------------------

// Sorted unique q-grams of s. Strings shorter than q are padded with q-1
// sentinel bytes on both ends; the empty string has no grams.
std::vector<std::string> qgram_set(const std::string& s, int q);

// |Q(a) n Q(b)| / |Q(a) u Q(b)|; 0 when both gram sets are empty.
double jaccard_qgrams(const std::string& a, const std::string& b, int q);

struct SimilarPair {
  uint32_t i, j;      // indices into the input value list, i < j
  double similarity;  // exact Jaccard for strings, |v_i - v_j| for numerics
};

// All pairs with jaccard_qgrams >= theta_min, found with prefix-length,
// size, positional, and suffix-bound filtering. Output order: (i, j).
std::vector<SimilarPair> string_similarity_join(
    const std::vector<std::string>& values, double theta_min, int q);

// All pairs with |v_i - v_j| < max_diff via sort + sliding window.
// `similarity` carries the absolute difference.
std::vector<SimilarPair> numeric_similarity_join(const std::vector<double>& values,
                                                 double max_diff);

// --- similarity triple emission --------------------------------------------

struct SubjectSimilarity {
  NodeId a, b;        // a != b
  double similarity;  // max over contributing literal pairs
};

// "0.6"-style threshold rendering used in derived predicate names.
std::string format_threshold(double theta);

// IRI of the similarity predicate for (base property, threshold). The local
// name of the base property is embedded, e.g. name -> urn:mandolin:sim:name_0.6
std::string similarity_predicate_iri(const Term& base_property, double theta,
                                     bool numeric = false);

// For each pair with similarity s and each threshold t <= s, emits the triple
// (a, sim(base,t), b) and its symmetric counterpart. New predicate terms are
// interned into dict.
std::vector<TripleId> emit_similarity_triples(Dictionary& dict,
                                              const std::vector<SubjectSimilarity>& pairs,
                                              const Term& base_property,
                                              const std::vector<double>& thresholds);

// Numeric/time literal value; nullopt when the term is not a literal of a
// numeric or date/dateTime datatype or fails to parse.
std::optional<double> literal_numeric_value(const Term& t);

// --- ontology import -------------------------------------------------------

// Maps namespace prefixes to local N-Triples mirror files.
class Resolver {
 public:
  Resolver() = default;
  static Resolver from_manifest_file(const std::string& path);

  void add(std::string prefix, std::string path);
  bool empty() const { return entries_.empty(); }
  // Longest matching prefix entry for an IRI.
  std::optional<std::pair<std::string, std::string>> match(const std::string& iri) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;  // prefix -> path
};

struct ImportReport {
  std::vector<std::string> imported_files;
  std::vector<std::string> warnings;
};

// Merges every resolvable namespace's mirror file into g, transitively up to
// `depth` rounds. Missing files are warnings, not errors.
EncodedGraph import_ontologies(const EncodedGraph& g, const Resolver& resolver,
                               int depth = 2, ImportReport* report = nullptr);

// --- forward chaining ------------------------------------------------------

// Schema-entailment rules applied to closure. All default on.
struct ClosureRuleSet {
  bool domain = true;           // (p dom C), p(x,y)        => type(x,C)
  bool range = true;            // (p rng C), p(x,y)        => type(y,C)
  bool subproperty = true;      // p subPropertyOf q chains and propagation
  bool subclass = true;         // subClassOf chains and type propagation
  bool same_as = true;          // owl:sameAs symmetry + transitivity
  bool inverse_of = true;       // owl:inverseOf (symmetric as schema)
  bool symmetric = true;        // owl:SymmetricProperty
  bool transitive = true;       // owl:TransitiveProperty
};

// Least fixpoint of the rule set over g, computed semi-naively (each derived
// triple joins against the store exactly once). Derivations that would put a
// literal in subject or a non-IRI in predicate position are skipped. Throws
// when more than `cap` new triples are derived (0 means 10 * |E|).
EncodedGraph forward_chain(const EncodedGraph& g,
                           const ClosureRuleSet& rules = {},
                           size_t cap = 0);

// --- whole-module driver ---------------------------------------------------

struct EnrichmentReport {
  size_t similarity_triples = 0;
  size_t numeric_skipped = 0;  // unparseable numeric literals
  ImportReport import_report;
  size_t closure_derived = 0;
  size_t input_triples = 0;
  size_t output_triples = 0;
};

// Runs import -> similarity -> closure per the toggles.
EncodedGraph enrich(const EncodedGraph& g, const EnrichmentConfig& config,
                    const Resolver& resolver = {},
                    EnrichmentReport* report = nullptr);

}  // namespace mandolin
