#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "magneto/charge.hpp"
#include "magneto/cycles.hpp"
#include "magneto/dataset.hpp"
#include "magneto/filters.hpp"
#include "magneto/spectrum.hpp"
#include "magneto/train.hpp"

namespace magneto {

struct ExperimentConfig {
  std::filesystem::path dataset;
  std::string dataset_format = "zero-based";
  bool row_normalize = false;
  int order = 8;                       // K
  std::optional<Charge> q;             // empty means "auto"
  double learning_rate = 0.01;
  double l2 = 0.0;
  bool l2_second_layer = false;
  double dropout = 0.0;
  Index hidden = 64;
  FilterKind filter = FilterKind::LinearRank;
  std::optional<double> alpha;
  std::optional<double> time;
  std::optional<FilterSign> sign;      // empty means "auto" from homophily
  SplitFractions fractions = SplitFractions::webpage();
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  int max_epochs = 10'000;
  int patience = 50;
  Symmetrization symmetrization = Symmetrization::HalfSum;
  CycleLimits cycle_limits;
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path out_dir = ".";

  /// Keys: dataset, K, q ("auto", "1/3", number), lr, l2, dropout, hidden,
  /// filter, sign ("auto", "low-pass", "high-pass"), protocol ("citation",
  /// "webpage" or [train, val, test]), seeds, plus optional alpha, t,
  /// format, row_normalize, max_epochs, patience, symmetrization,
  /// max_cycles, max_length, cache_dir, out_dir, l2_second_layer.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig from_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  FilterSpec filter_spec(FilterSign resolved_sign) const;
  TrainConfig train_config(std::uint64_t seed) const;
};

/// Hyper-parameter rows of the reference MGC runs, keyed by dataset name
/// (corar, citeseerr, pubmed, cornell, texas, washington, wisconsin).
/// The dataset path is left empty.
ExperimentConfig reference_config(const std::string& name);

/// Low-pass when homophily >= 0.5, high-pass otherwise.
FilterSign auto_sign(double homophily);

struct PrepReport {
  std::string dataset;
  Index nodes = 0;
  Index edges = 0;
  Index features = 0;
  int classes = 0;
  double homophily = 0.0;
  FilterSign sign = FilterSign::LowPass;
  CycleReport cycles;
  QCandidates candidates;
  std::vector<Charge> prepared;             // q values whose features were built
  std::vector<std::filesystem::path> caches;
  std::vector<bool> cache_hits;

  nlohmann::ordered_json to_json() const;
};

/// In-memory prepared experiment: dataset plus filtered features per q.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const Dataset& dataset() const { return dataset_; }
  double homophily() const { return homophily_; }
  FilterSign sign() const { return sign_; }
  const CycleReport& cycles();
  QCandidates candidates(bool include_zero = false);

  /// Switches filter kind and order; drops the in-memory feature cache.
  void set_filter(FilterKind kind, int order);

  /// Builds or loads the cached features for q. Sets `cache_hit` if given.
  const ModelInput& features(Charge q, bool* cache_hit = nullptr);
  std::filesystem::path cache_path(Charge q) const;

 private:
  ExperimentConfig config_;
  Dataset dataset_;
  double homophily_ = 0.0;
  FilterSign sign_ = FilterSign::LowPass;
  std::optional<CycleReport> cycles_;
  std::vector<std::pair<Charge, ModelInput>> features_;
};

/// Writes caches for every q that a run would need and reports dataset facts.
PrepReport cmd_prep(Experiment& exp);

struct SeedResult {
  std::uint64_t seed = 0;
  Charge q;
  double val_acc = 0.0;
  double test_acc = 0.0;
  int best_epoch = 0;
  int epochs = 0;
  std::string error;  // non-empty when this seed failed

  nlohmann::ordered_json to_json() const;
};

struct RunReport {
  std::string dataset;
  Charge chosen_q;
  double homophily = 0.0;
  FilterSign sign = FilterSign::LowPass;
  std::vector<SeedResult> seeds;
  double mean = 0.0;  // test accuracy over successful seeds
  double std = 0.0;   // sample standard deviation
  double wall_clock_seconds = 0.0;
  std::vector<std::pair<Charge, double>> q_validation;  // mean val accuracy per candidate

  nlohmann::ordered_json summary_json() const;
  /// Per-seed records only; deterministic for a fixed config.
  void write_jsonl(std::ostream& out) const;
};

/// Sample mean and standard deviation (n - 1 denominator, 0 for n = 1).
std::pair<double, double> mean_and_std(const std::vector<double>& values);

/// Trains every seed at a fixed q. Throws only if all seeds fail.
RunReport run_fixed_q(Experiment& exp, Charge q);

/// Fixed q when configured, otherwise validation-accuracy argmax over the
/// cycle-derived candidates and 0 (ties go to the smaller q).
RunReport cmd_train(Experiment& exp);

struct SweepRow {
  FilterKind filter = FilterKind::LinearRank;
  int order = 0;
  double mean = 0.0;
  double std = 0.0;
  double wall_clock_seconds = 0.0;
};

/// Accuracy per (filter, K) at the configured q (0 when q is auto).
std::vector<SweepRow> cmd_sweep_k(Experiment& exp, const std::vector<int>& orders,
                                  const std::vector<FilterKind>& filters);
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct AblationReport {
  RunReport q_zero;
  std::optional<RunReport> q_nonzero;
  std::string notice;

  nlohmann::ordered_json to_json() const;
};

/// Paired runs at q = 0 and at the best nonzero q on the same seeds. The
/// nonzero column is empty for undirected or acyclic inputs.
AblationReport cmd_ablate_q(Experiment& exp);

/// CSV q,index,eigenvalue,response_exact,response_approx. Rows are ordered by
/// ascending eigenvalue of the normalized magnetic Laplacian; responses are
/// listed in the matching order (descending for the low-pass operators).
std::string cmd_spectrum(const DirectedGraph& g, const std::vector<Charge>& qs, ShiftOperator gso,
                         Symmetrization convention);

}  // namespace magneto
