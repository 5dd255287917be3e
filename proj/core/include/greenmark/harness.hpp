#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greenmark/attack.hpp"
#include "greenmark/key.hpp"
#include "greenmark/types.hpp"

namespace greenmark {

struct AttackSpec {
  enum class Kind { None, RandomEdit, GreenAware };
  Kind kind = Kind::None;
  std::vector<double> rates;  // operation rates; eta = round(rate * n)
  EditMix mix = EditMix::replacement_only();

  static AttackSpec none() { return {}; }
};

struct ExperimentConfig {
  std::string experiment;             // "type1" | "type2" | "robustness_sweep"
  std::string model_spec = "uniform:1000";
  std::vector<Scheme> schemes = {Scheme::FixedSplit};
  double gamma = 0.5;
  double delta = 2.0;
  int horizon = 200;                  // tokens per sequence
  double tau = 6.0;
  std::vector<double> alphas;         // adaptive-threshold levels, optional
  int sequences = 500;                // per arm
  int null_keys = 100;                // type1: random keys per null sequence
  AttackSpec attack;
  std::uint64_t seed = 1;
  std::string out_path;
  std::optional<std::string> csv_path;

  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
  static ExperimentConfig load(const std::string& path);
};

struct ZSummary {
  long count = 0;
  double mean = 0, sd = 0;
  double min = 0, q05 = 0, q25 = 0, median = 0, q75 = 0, q95 = 0, max = 0;

  static ZSummary of(std::vector<double> values);
};

struct ArmResult {
  std::string label;
  Scheme scheme = Scheme::FixedSplit;
  double attack_rate = 0;
  ZSummary z;
  std::map<std::string, double> metrics;  // tpr_at_tau, fpr_at_tau, mean_green, ...
};

struct RocPoint {
  double fpr = 0, tpr = 0;
};

struct RocResult {
  std::string label;
  double auc = 0;
  std::vector<RocPoint> points;
};

struct BoundCheck {
  std::string name;
  bool pass = false;
  double observed = 0;
  double bound = 0;
  long trials = 0;
};

struct TrialRow {
  long trial = 0;
  Scheme scheme = Scheme::FixedSplit;
  std::int32_t n = 0;
  std::int32_t green_count = 0;
  double z = 0;
  std::int32_t attacked_eta = 0;
  int decision = 0;
};

struct EvalReport {
  std::string experiment;
  std::string version;
  ExperimentConfig config;
  std::vector<ArmResult> arms;
  std::vector<RocResult> rocs;
  std::vector<BoundCheck> checks;
  std::vector<TrialRow> trials;       // written to csv_path when requested
  double runtime_seconds = 0;         // console diagnostics only, never in the file

  std::string to_json() const;        // canonical, byte-stable
  std::string trials_csv() const;
};

// Null-calibration run: un-watermarked sequences scored under many random
// keys; reports empirical false-positive rates at the fixed tau and at the
// adaptive threshold for each alpha.
EvalReport run_type1(const ExperimentConfig& config);

// Detection-power run: watermarked sequences; reports the z distribution,
// TPR at tau, and checks the mean green count and mean z against their
// closed-form lower bounds.
EvalReport run_type2(const ExperimentConfig& config);

// Attack sweep: for each rate and scheme, ROC/AUC of attacked-watermarked
// versus null z-scores, with a tally of robustness-bound violations
// (expected zero).
EvalReport run_robustness_sweep(const ExperimentConfig& config);

EvalReport run_experiment(const ExperimentConfig& config);

// Writes report JSON (and the per-trial CSV when configured). Bit-stable
// for identical inputs.
void emit_report(const EvalReport& report, const std::string& path);

// Threshold-sweep ROC over pooled scores; AUC by trapezoid rule.
RocResult roc_from_scores(const std::vector<double>& positives,
                          const std::vector<double>& negatives, const std::string& label);

}  // namespace greenmark
