#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

#include "magneto/charge.hpp"
#include "magneto/model.hpp"

namespace magneto {

struct AdamOptions {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment estimates shaped like the parameters.
class Adam {
 public:
  Adam(const ModelParams& like, AdamOptions options);

  void step(ModelParams& params, const ModelParams& grads);
  std::int64_t steps() const { return step_; }

 private:
  AdamOptions options_;
  ModelParams m_;
  ModelParams v_;
  std::int64_t step_ = 0;
};

struct TrainConfig {
  Index hidden = 64;
  double learning_rate = 0.01;
  double l2 = 0.0;
  bool l2_second_layer = false;
  double dropout = 0.0;
  int max_epochs = 10'000;
  int patience = 50;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_acc = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  ModelParams params;  // best-validation snapshot
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_acc = 0.0;
};

/// Full-batch Adam on the train rows, early-stopped on validation accuracy
/// (ties broken by lower validation loss) with the given patience. Throws
/// std::runtime_error on a non-finite training loss.
TrainResult train(const ModelInput& input, const LabelVector& labels, const SplitMask& split,
                  const TrainConfig& config, bool real_degenerate);

/// One JSON object per line: {"epoch":..,"train_loss":..,"val_acc":..}.
void write_history_jsonl(std::ostream& out, const std::vector<EpochRecord>& history);

/// Layout (little-endian): magic "MGCCKPT1"; u64 input_dim, hidden_dim,
/// classes; u32 flags (bit 0 real-degenerate); u32 reserved; i64 q num, den;
/// then row-major f64 blocks Re W0, Im W0, W1.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params, Charge q);
ModelParams load_checkpoint(const std::filesystem::path& path, Charge* q = nullptr);

}  // namespace magneto
