#pragma once

#include <string>
#include <vector>

#include "mandolin/enrichment.hpp"
#include "mandolin/evaluation.hpp"
#include "mandolin/graph.hpp"
#include "mandolin/inference.hpp"
#include "mandolin/rules.hpp"

namespace mandolin {

// Workflow stages, in execution order. Mining covers rule interpretation too
// (head-coverage filtering and weighting happen before rules.tsv is written).
enum class Stage : int { Enrich = 0, Mine, Ground, Infer, Eval };

const char* stage_name(Stage s);
Stage stage_from_name(const std::string& name);

struct PipelineConfig {
  // Inputs. valid/test may be empty; train+valid form the model graph.
  std::string train_path;
  std::string valid_path;
  std::string test_path;

  EnrichmentConfig enrichment;
  std::string resolver_manifest;

  MiningConfig mining;

  // Apply rules transitively to derived similarity-predicate atoms.
  bool grounding_include_similarity = true;
  size_t grounding_cap = 0;  // 0 = 20 * |E|

  InferenceConfig inference;  // seed field is derived from `seed` below

  uint64_t seed = 0;
  std::string out_dir = "out";
  Stage from_stage = Stage::Enrich;
  Stage to_stage = Stage::Eval;
};

// Plain-text config: `key = value` lines, # comments. CLI overrides win.
PipelineConfig parse_config_file(const std::string& path);
void apply_config_line(PipelineConfig& config, const std::string& key,
                       const std::string& value);
// "all", "mine", or "mine:infer".
void parse_stage_range(PipelineConfig& config, const std::string& range);

// Thrown for malformed configs / missing inputs (CLI exit code 1).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// Thrown when a stage fails mid-run (CLI exit code 2).
class StageError : public std::runtime_error {
 public:
  StageError(Stage stage, const std::string& what)
      : std::runtime_error(std::string(stage_name(stage)) + ": " + what),
        stage(stage) {}
  Stage stage;
};

struct RunManifest {
  std::vector<std::pair<std::string, std::string>> entries;  // insertion order

  void set(const std::string& key, const std::string& value);
  void set_count(const std::string& key, uint64_t value);
  void set_seconds(const std::string& key, double seconds);
  const std::string* find(const std::string& key) const;
  void write(const std::string& path) const;
};

// Artifact names inside out_dir.
namespace artifact {
inline const char* kEnrichedGraph = "enriched.nt";
inline const char* kRules = "rules.tsv";
inline const char* kFactors = "factors.tsv";
inline const char* kPredictions = "predictions.tsv";
inline const char* kLinks = "links.tsv";
inline const char* kReport = "report.csv";
inline const char* kRanks = "ranks.tsv";
inline const char* kManifest = "manifest.txt";
inline const char* kSweep = "sweep.csv";
inline const char* kSweepTiming = "sweep_timing.csv";
}  // namespace artifact

// Executes the selected stage range; every stage reads its inputs from and
// writes its outputs to out_dir, so later stages can resume from files.
// The manifest is written even when a stage fails (the failure is recorded
// and StageError is rethrown).
RunManifest run_pipeline(const PipelineConfig& config);

// Inference + evaluation per gamma, reusing one grounding (stages up to
// `ground` are run first if their artifacts are missing). Writes sweep.csv
// (gamma,hits_at_10) and sweep_timing.csv (gamma,seconds).
std::vector<std::pair<uint64_t, double>> sweep_gamma(
    const PipelineConfig& config, const std::vector<uint64_t>& gammas);

// Holdout evaluation of an equivalence mapping: the training fold is added
// as owl:sameAs evidence, the pipeline runs through inference, and the
// returned value is the fraction of held-out pairs present in the predicted
// link set.
double sameas_holdout_eval(const PipelineConfig& config,
                           const std::vector<std::pair<Term, Term>>& mapping,
                           double fold_fraction = 0.9);

// Gold mapping file: two-column TSV/CSV of IRIs, or an .nt file whose
// owl:sameAs triples form the mapping.
std::vector<std::pair<Term, Term>> read_mapping_file(const std::string& path);

// Standalone evaluation (CLI `eval` subcommand): model graph and filter set
// from split files, scores from a predictions file.
EvalReport evaluate_predictions(const std::string& predictions_path,
                                const std::string& train_path,
                                const std::string& valid_path,
                                const std::string& test_path,
                                const std::string& out_dir);

}  // namespace mandolin
