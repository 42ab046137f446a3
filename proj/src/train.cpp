#include "magneto/train.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "magneto/binary_io.hpp"

namespace magneto {

Adam::Adam(const ModelParams& like, AdamOptions options)
    : options_(options), m_(ModelParams::zeros_like(like)), v_(ModelParams::zeros_like(like)) {}

namespace {

void adam_update(RealMatrix& w, const RealMatrix& g, RealMatrix& m, RealMatrix& v, const AdamOptions& o,
                 double correction1, double correction2) {
  m = o.beta1 * m + (1.0 - o.beta1) * g;
  v = o.beta2 * v + (1.0 - o.beta2) * g.cwiseProduct(g);
  w.array() -= o.learning_rate * (m.array() / correction1) / ((v.array() / correction2).sqrt() + o.epsilon);
}

}  // namespace

void Adam::step(ModelParams& params, const ModelParams& grads) {
  ++step_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(step_));
  adam_update(params.w0_re, grads.w0_re, m_.w0_re, v_.w0_re, options_, c1, c2);
  if (!params.real_degenerate) adam_update(params.w0_im, grads.w0_im, m_.w0_im, v_.w0_im, options_, c1, c2);
  adam_update(params.w1, grads.w1, m_.w1, v_.w1, options_, c1, c2);
}

TrainResult train(const ModelInput& input, const LabelVector& labels, const SplitMask& split,
                  const TrainConfig& config, bool real_degenerate) {
  if (split.train.empty() || split.val.empty()) throw std::invalid_argument("training needs non-empty train and val sets");
  if (config.max_epochs < 1 || config.patience < 1) throw std::invalid_argument("epochs and patience must be >= 1");
  const int classes = num_classes(labels);

  TrainResult result;
  ModelParams params = init_weights(input.cols(), config.hidden, classes, config.seed, real_degenerate);
  Adam adam(params, AdamOptions{.learning_rate = config.learning_rate});
  std::mt19937_64 dropout_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  const RegularizationOptions reg{config.l2, config.l2_second_layer};

  double best_acc = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    auto step = loss_and_grads(params, input, labels, split.train, reg, Dropout{config.dropout, &dropout_rng});
    if (!std::isfinite(step.loss)) {
      throw std::runtime_error("non-finite training loss at epoch " + std::to_string(epoch) +
                               " (lr=" + std::to_string(config.learning_rate) + ")");
    }
    adam.step(params, step.grads);

    const RealMatrix val_probs = forward(params, input, split.val);
    Index correct = 0;
    for (std::size_t i = 0; i < split.val.size(); ++i) {
      if (predict_class(val_probs, static_cast<Index>(i)) == labels[static_cast<std::size_t>(split.val[i])]) ++correct;
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = step.loss;
    record.val_acc = static_cast<double>(correct) / static_cast<double>(split.val.size());
    record.val_loss = cross_entropy(val_probs, labels, split.val);
    result.history.push_back(record);

    if (record.val_acc > best_acc || (record.val_acc == best_acc && record.val_loss < best_loss)) {
      best_acc = record.val_acc;
      best_loss = record.val_loss;
      result.params = params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  result.best_val_acc = best_acc;
  return result;
}

void write_history_jsonl(std::ostream& out, const std::vector<EpochRecord>& history) {
  for (const auto& r : history) {
    nlohmann::ordered_json line;
    line["epoch"] = r.epoch;
    line["train_loss"] = r.train_loss;
    line["val_acc"] = r.val_acc;
    out << line.dump() << '\n';
  }
}

namespace {

constexpr std::array<char, 8> kCheckpointMagic = {'M', 'G', 'C', 'C', 'K', 'P', 'T', '1'};

void write_block(std::ostream& out, const RealMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) io::write_le<double>(out, m(i, j));
  }
}

RealMatrix read_block(std::istream& in, Index rows, Index cols) {
  RealMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = io::read_le<double>(in);
  }
  return m;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params, Charge q) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  io::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(params.input_dim()));
  io::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(params.hidden_dim()));
  io::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(params.num_classes()));
  io::write_le<std::uint32_t>(out, params.real_degenerate ? 1U : 0U);
  io::write_le<std::uint32_t>(out, 0U);
  io::write_le<std::int64_t>(out, q.num);
  io::write_le<std::int64_t>(out, q.den);
  write_block(out, params.w0_re);
  write_block(out, params.w0_im);
  write_block(out, params.w1);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path, Charge* q) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kCheckpointMagic) throw std::runtime_error(path.string() + " is not a model checkpoint");
  const auto input_dim = static_cast<Index>(io::read_le<std::uint64_t>(in));
  const auto hidden = static_cast<Index>(io::read_le<std::uint64_t>(in));
  const auto classes = static_cast<Index>(io::read_le<std::uint64_t>(in));
  const auto flags = io::read_le<std::uint32_t>(in);
  io::read_le<std::uint32_t>(in);
  const auto q_num = io::read_le<std::int64_t>(in);
  const auto q_den = io::read_le<std::int64_t>(in);
  if (q) *q = Charge(q_num, q_den);
  const auto payload = std::filesystem::file_size(path) - static_cast<std::uintmax_t>(in.tellg());
  const auto expected = 8.0 * (2.0 * static_cast<double>(input_dim) * static_cast<double>(hidden) +
                               static_cast<double>(hidden) * static_cast<double>(classes));
  if (static_cast<double>(payload) != expected) throw std::runtime_error(path.string() + ": weight block size mismatch");
  ModelParams p;
  p.real_degenerate = (flags & 1U) != 0;
  p.w0_re = read_block(in, input_dim, hidden);
  p.w0_im = read_block(in, input_dim, hidden);
  p.w1 = read_block(in, hidden, classes);
  return p;
}

}  // namespace magneto
