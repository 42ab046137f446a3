#include <doctest.h>

#include <numeric>

#include "magneto/model.hpp"
#include "magneto/train.hpp"
#include "oracles.hpp"

using namespace magneto;

namespace {

struct Toy {
  ModelInput input;
  LabelVector labels;
  std::vector<Index> rows;
};

Toy make_toy(std::mt19937_64& rng, Index n, Index c, int classes, bool complex_input) {
  Toy t;
  if (complex_input) {
    t.input = ModelInput::from(ComplexMatrix(oracle::random_complex(rng, n, c)));
  } else {
    t.input = ModelInput::from(RealMatrix(oracle::random_real(rng, n, c)));
  }
  std::uniform_int_distribution<int> pick(0, classes - 1);
  for (Index i = 0; i < n; ++i) t.labels.push_back(pick(rng));
  t.rows.resize(static_cast<std::size_t>(n));
  std::iota(t.rows.begin(), t.rows.end(), 0);
  return t;
}

double loss_at(const ModelParams& p, const Toy& t, const RegularizationOptions& reg) {
  return loss_and_grads(p, t.input, t.labels, t.rows, reg).loss;
}

// Norm-wise relative error between analytic and central-difference gradients.
double fd_error(ModelParams p, const Toy& t, const RegularizationOptions& reg, RealMatrix ModelParams::*block,
                const RealMatrix& analytic) {
  const double eps = 1e-5;
  RealMatrix numeric(analytic.rows(), analytic.cols());
  for (Index i = 0; i < analytic.rows(); ++i) {
    for (Index j = 0; j < analytic.cols(); ++j) {
      const double keep = (p.*block)(i, j);
      (p.*block)(i, j) = keep + eps;
      const double up = loss_at(p, t, reg);
      (p.*block)(i, j) = keep - eps;
      const double down = loss_at(p, t, reg);
      (p.*block)(i, j) = keep;
      numeric(i, j) = (up - down) / (2.0 * eps);
    }
  }
  return (numeric - analytic).norm() / std::max(analytic.norm(), 1e-12);
}

// Plain real two-layer tanh network, written independently.
RealMatrix reference_glorot(std::mt19937_64& rng, Index fan_in, Index fan_out) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> d(-limit, limit);
  RealMatrix w(fan_in, fan_out);
  for (Index i = 0; i < fan_in; ++i) {
    for (Index j = 0; j < fan_out; ++j) w(i, j) = d(rng);
  }
  return w;
}

RealMatrix reference_forward(const RealMatrix& x, const RealMatrix& w0, const RealMatrix& w1) {
  RealMatrix logits = RealMatrix((x * w0).array().tanh().matrix()) * w1;
  for (Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    double z = 0.0;
    for (Index j = 0; j < logits.cols(); ++j) z += std::exp(logits(i, j) - m);
    for (Index j = 0; j < logits.cols(); ++j) logits(i, j) = std::exp(logits(i, j) - m) / z;
  }
  return logits;
}

}  // namespace

TEST_CASE("init weights") {
  const auto a = init_weights(30, 16, 4, 7, false);
  const auto b = init_weights(30, 16, 4, 7, false);
  CHECK(a.w0_re == b.w0_re);
  CHECK(a.w0_im == b.w0_im);
  CHECK(a.w1 == b.w1);
  CHECK(init_weights(30, 16, 4, 8, false).w0_re != a.w0_re);

  const auto r = init_weights(30, 16, 4, 7, true);
  CHECK(r.w0_im.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.real_degenerate);
  CHECK_THROWS(init_weights(0, 3, 2, 0, false));

  // Rayleigh modulus: mean sigma * sqrt(pi/2).
  const Index fan_in = 400;
  const Index fan_out = 250;
  const auto big = init_weights(fan_in, fan_out, 2, 1, false);
  const double sigma = 1.0 / std::sqrt(2.0 * (fan_in + fan_out));
  const double mean = (big.w0_re.array().square() + big.w0_im.array().square()).sqrt().mean();
  CHECK(std::abs(mean / (sigma * std::sqrt(std::numbers::pi / 2.0)) - 1.0) < 0.02);
  // Phase is uniform, so the mean of each component is near zero.
  CHECK(std::abs(big.w0_re.mean()) < 0.05 * sigma);
}

TEST_CASE("cgtu") {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  CHECK(cgtu(z, false).cwiseAbs().maxCoeff() == 0.0);
  CHECK(cgtu(z, true).cwiseAbs().maxCoeff() == 0.0);
  z(0, 0) = Complex(0.5, 0.5);
  CHECK(cgtu(z, false)(0, 0) == doctest::Approx(std::tanh(0.5) * std::tanh(0.5)));
  z(1, 1) = Complex(-1.3, 0.0);
  CHECK(cgtu(z, true)(1, 1) == doctest::Approx(std::tanh(-1.3)));
  CHECK(cgtu(z, false)(1, 1) == 0.0);
}

TEST_CASE("forward basics") {
  ModelParams p;
  p.w0_re = RealMatrix::Zero(5, 3);
  p.w0_im = RealMatrix::Zero(5, 3);
  p.w1 = RealMatrix::Identity(3, 3);
  std::mt19937_64 rng(4);
  const auto x = ModelInput::from(ComplexMatrix(oracle::random_complex(rng, 6, 5)));
  const auto probs = forward(p, x);
  CHECK((probs.array() - 1.0 / 3.0).abs().maxCoeff() < 1e-15);
  // Ties go to the lowest class index.
  CHECK(predict_class(probs, 0) == 0);
  LabelVector y{0, 1, 2, 0, 1, 2};
  std::vector<Index> all{0, 1, 2, 3, 4, 5};
  CHECK(cross_entropy(probs, y, all) == doctest::Approx(std::log(3.0)));

  for (int trial = 0; trial < 20; ++trial) {
    const auto q = init_weights(5, 7, 4, trial, trial % 2 == 0);
    const auto in = trial % 2 == 0 ? ModelInput::from(RealMatrix(oracle::random_real(rng, 9, 5)))
                                   : ModelInput::from(ComplexMatrix(oracle::random_complex(rng, 9, 5)));
    const auto pr = forward(q, in);
    for (Index i = 0; i < pr.rows(); ++i) CHECK(std::abs(pr.row(i).sum() - 1.0) < 1e-9);
  }

  CHECK_THROWS(forward(init_weights(4, 3, 2, 0, false), x));
  CHECK_THROWS(forward(init_weights(5, 3, 2, 0, true), x));  // degenerate model, complex features
  CHECK_THROWS(evaluate(p, x, y, {}));
}

TEST_CASE("gradients match finite differences") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 6; ++trial) {
    const bool degenerate = trial % 2 == 1;
    const auto toy = make_toy(rng, 6, 5, 3, !degenerate && trial != 2);
    const RegularizationOptions reg{trial < 3 ? 0.0 : 0.05, trial == 4};
    const auto p = init_weights(5, 4, 3, trial, degenerate);
    const auto lg = loss_and_grads(p, toy.input, toy.labels, toy.rows, reg);
    CHECK(fd_error(p, toy, reg, &ModelParams::w0_re, lg.grads.w0_re) < 1e-5);
    CHECK(fd_error(p, toy, reg, &ModelParams::w1, lg.grads.w1) < 1e-5);
    if (!degenerate) CHECK(fd_error(p, toy, reg, &ModelParams::w0_im, lg.grads.w0_im) < 1e-5);
  }
  const auto toy = make_toy(rng, 3, 2, 2, false);
  CHECK_THROWS(loss_and_grads(init_weights(2, 2, 2, 0, true), toy.input, toy.labels, {}, {}));
}

TEST_CASE("real-degenerate mode equals a plain tanh network") {
  std::mt19937_64 rng(15);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RealMatrix x = oracle::random_real(rng, 10, 6);
    const auto p = init_weights(6, 5, 3, seed, true);

    std::mt19937_64 ref_rng(seed);
    const RealMatrix w0 = reference_glorot(ref_rng, 6, 5);
    const RealMatrix w1 = reference_glorot(ref_rng, 5, 3);
    CHECK(p.w0_re == w0);
    CHECK(p.w1 == w1);
    CHECK((forward(p, ModelInput::from(x)) - reference_forward(x, w0, w1)).cwiseAbs().maxCoeff() < 1e-14);
  }
  // Filtered features at q = 0 have an exactly zero imaginary part and so
  // enter the real pipeline.
  ComplexMatrix zc = ComplexMatrix::Zero(2, 2);
  zc(0, 0) = 1.5;
  CHECK_FALSE(ModelInput::from(zc).has_imag());
}

TEST_CASE("loss is permutation equivariant") {
  std::mt19937_64 rng(23);
  auto toy = make_toy(rng, 12, 4, 3, true);
  const auto p = init_weights(4, 6, 3, 1, false);
  const RegularizationOptions reg{0.01, false};
  const double base = loss_at(p, toy, reg);

  std::vector<Index> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Toy shuffled;
  shuffled.input.real.resize(12, 4);
  shuffled.input.imag.resize(12, 4);
  shuffled.labels.resize(12);
  for (Index i = 0; i < 12; ++i) {
    shuffled.input.real.row(i) = toy.input.real.row(perm[i]);
    shuffled.input.imag.row(i) = toy.input.imag.row(perm[i]);
    shuffled.labels[i] = toy.labels[perm[i]];
  }
  shuffled.rows = toy.rows;
  CHECK(std::abs(loss_at(p, shuffled, reg) - base) < 1e-12);
}

TEST_CASE("one adam step lowers the loss") {
  std::mt19937_64 rng(1);
  auto toy = make_toy(rng, 1, 4, 3, true);
  // The same node twice with its own label.
  toy.rows = {0, 0};
  auto p = init_weights(4, 8, 3, 2, false);
  const RegularizationOptions reg{};
  const auto before = loss_and_grads(p, toy.input, toy.labels, toy.rows, reg);
  Adam adam(p, AdamOptions{.learning_rate = 0.01});
  adam.step(p, before.grads);
  CHECK(adam.steps() == 1);
  CHECK(loss_at(p, toy, reg) < before.loss);
}

TEST_CASE("training on separable data") {
  // Two classes separated by the sign of the first feature.
  std::mt19937_64 rng(3);
  const Index n = 60;
  RealMatrix x = oracle::random_real(rng, n, 3);
  LabelVector y(n);
  for (Index i = 0; i < n; ++i) {
    y[i] = x(i, 0) > 0.0 ? 1 : 0;
    x(i, 0) += y[i] ? 0.5 : -0.5;
  }
  const auto split = split_nodes(y, SplitFractions::webpage(), 0);
  TrainConfig cfg;
  cfg.hidden = 8;
  cfg.learning_rate = 0.05;
  cfg.patience = 100;
  cfg.max_epochs = 2000;
  const auto input = ModelInput::from(x);
  const auto result = train(input, y, split, cfg, true);
  CHECK(evaluate(result.params, input, y, split.train) == 1.0);
  CHECK(result.best_val_acc == 1.0);
  CHECK(static_cast<int>(result.history.size()) <= cfg.max_epochs);

  // Determinism.
  const auto again = train(input, y, split, cfg, true);
  CHECK(again.params.w0_re == result.params.w0_re);
  CHECK(again.history.size() == result.history.size());

  std::ostringstream jsonl;
  write_history_jsonl(jsonl, result.history);
  CHECK(jsonl.str().rfind("{\"epoch\":1,\"train_loss\":", 0) == 0);
}

TEST_CASE("patience ends training on constant features") {
  const Index n = 40;
  const RealMatrix x = RealMatrix::Ones(n, 2);
  LabelVector y(n);
  for (Index i = 0; i < n; ++i) y[i] = static_cast<int>(i % 2);
  const auto split = split_nodes(y, SplitFractions::webpage(), 1);
  TrainConfig cfg;
  cfg.hidden = 4;
  cfg.patience = 50;
  const auto r = train(ModelInput::from(x), y, split, cfg, false);
  CHECK(r.history.size() < 10'000);
  CHECK(static_cast<int>(r.history.size()) - r.best_epoch == cfg.patience);
}

TEST_CASE("dropout training stays deterministic") {
  std::mt19937_64 rng(5);
  auto toy = make_toy(rng, 40, 5, 2, true);
  const auto split = split_nodes(toy.labels, SplitFractions::webpage(), 2);
  TrainConfig cfg;
  cfg.hidden = 6;
  cfg.dropout = 0.4;
  cfg.max_epochs = 60;
  const auto a = train(toy.input, toy.labels, split, cfg, false);
  const auto b = train(toy.input, toy.labels, split, cfg, false);
  CHECK(a.params.w0_im == b.params.w0_im);
  cfg.learning_rate = std::numeric_limits<double>::infinity();
  CHECK_THROWS(train(toy.input, toy.labels, split, cfg, false));
}

TEST_CASE("checkpoint round trip") {
  oracle::TempDir tmp("ckpt");
  const auto p = init_weights(7, 5, 3, 4, false);
  save_checkpoint(tmp.path / "m.ckpt", p, Charge(1, 3));
  Charge q;
  const auto back = load_checkpoint(tmp.path / "m.ckpt", &q);
  CHECK(q == Charge(1, 3));
  CHECK(back.w0_re == p.w0_re);
  CHECK(back.w0_im == p.w0_im);
  CHECK(back.w1 == p.w1);
  CHECK_FALSE(back.real_degenerate);
  oracle::write_text(tmp.path / "bad.ckpt", "MGCCKPT1 but short");
  CHECK_THROWS(load_checkpoint(tmp.path / "bad.ckpt"));
}
