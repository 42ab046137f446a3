#include "magneto/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace magneto {

ModelInput ModelInput::from(const ComplexMatrix& x) {
  ModelInput in;
  in.real = x.real();
  if (!x.imag().isZero(0.0)) in.imag = x.imag();
  return in;
}

ModelInput ModelInput::from(const RealMatrix& x) {
  ModelInput in;
  in.real = x;
  return in;
}

ModelParams ModelParams::zeros_like(const ModelParams& p) {
  ModelParams z;
  z.w0_re = RealMatrix::Zero(p.w0_re.rows(), p.w0_re.cols());
  z.w0_im = RealMatrix::Zero(p.w0_im.rows(), p.w0_im.cols());
  z.w1 = RealMatrix::Zero(p.w1.rows(), p.w1.cols());
  z.real_degenerate = p.real_degenerate;
  return z;
}

namespace {

RealMatrix glorot_uniform(Index fan_in, Index fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  RealMatrix w(fan_in, fan_out);
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
  }
  return w;
}

}  // namespace

ModelParams init_weights(Index input_dim, Index hidden_dim, Index classes, std::uint64_t seed, bool real_degenerate) {
  if (input_dim < 1 || hidden_dim < 1 || classes < 1) throw std::invalid_argument("model dimensions must be >= 1");
  std::mt19937_64 rng(seed);
  ModelParams p;
  p.real_degenerate = real_degenerate;
  if (real_degenerate) {
    p.w0_re = glorot_uniform(input_dim, hidden_dim, rng);
    p.w0_im = RealMatrix::Zero(input_dim, hidden_dim);
  } else {
    const double sigma = 1.0 / std::sqrt(2.0 * static_cast<double>(input_dim + hidden_dim));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    p.w0_re.resize(input_dim, hidden_dim);
    p.w0_im.resize(input_dim, hidden_dim);
    for (Index i = 0; i < input_dim; ++i) {
      for (Index j = 0; j < hidden_dim; ++j) {
        // Inverse-CDF Rayleigh draw; 1 - u keeps the log argument in (0, 1].
        const double modulus = sigma * std::sqrt(-2.0 * std::log(1.0 - unit(rng)));
        const double theta = phase(rng);
        p.w0_re(i, j) = modulus * std::cos(theta);
        p.w0_im(i, j) = modulus * std::sin(theta);
      }
    }
  }
  p.w1 = glorot_uniform(hidden_dim, classes, rng);
  return p;
}

RealMatrix cgtu(const ComplexMatrix& z, bool real_degenerate) {
  if (real_degenerate) return z.real().array().tanh().matrix();
  return (z.real().array().tanh() * z.imag().array().tanh()).matrix();
}

namespace {

struct ForwardCache {
  RealMatrix x_re;   // gathered, dropout applied
  RealMatrix x_im;   // empty when the input has no imaginary plane
  RealMatrix t_re;   // tanh(Z_re)
  RealMatrix t_im;   // tanh(Z_im), complex mode only
  RealMatrix hidden_mask;  // inverted-dropout scale per hidden entry, empty if none
  RealMatrix hidden;       // after dropout
  RealMatrix probs;
};

RealMatrix gather_rows(const RealMatrix& m, std::span<const Index> rows) {
  if (rows.empty()) return m;
  RealMatrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= m.rows()) throw std::out_of_range("row index " + std::to_string(rows[i]));
    out.row(static_cast<Index>(i)) = m.row(rows[i]);
  }
  return out;
}

RealMatrix dropout_mask(Index rows, Index cols, const Dropout& d) {
  const double keep = 1.0 - d.rate;
  std::bernoulli_distribution draw(keep);
  RealMatrix mask(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) mask(i, j) = draw(*d.rng) ? 1.0 / keep : 0.0;
  }
  return mask;
}

bool dropout_active(const Dropout& d) { return d.rng != nullptr && d.rate > 0.0; }

void softmax_rows(RealMatrix& logits) {
  for (Index i = 0; i < logits.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    logits.row(i).array() = (logits.row(i).array() - top).exp();
    logits.row(i) /= logits.row(i).sum();
  }
}

ForwardCache run_forward(const ModelParams& params, const ModelInput& input, std::span<const Index> rows,
                         const Dropout& dropout) {
  if (input.cols() != params.input_dim()) {
    throw std::invalid_argument("feature width " + std::to_string(input.cols()) + " does not match weight rows " +
                                std::to_string(params.input_dim()));
  }
  if (params.real_degenerate && input.has_imag()) {
    throw std::invalid_argument("real-degenerate model received features with a nonzero imaginary part");
  }
  if (dropout_active(dropout) && !(dropout.rate < 1.0)) throw std::invalid_argument("dropout rate must be < 1");

  ForwardCache c;
  c.x_re = gather_rows(input.real, rows);
  if (input.has_imag()) c.x_im = gather_rows(input.imag, rows);
  if (dropout_active(dropout)) {
    const RealMatrix mask = dropout_mask(c.x_re.rows(), c.x_re.cols(), dropout);
    c.x_re.array() *= mask.array();
    if (input.has_imag()) c.x_im.array() *= mask.array();
  }

  RealMatrix z_re = c.x_re * params.w0_re;
  if (params.real_degenerate) {
    c.t_re = z_re.array().tanh().matrix();
    c.hidden = c.t_re;
  } else {
    RealMatrix z_im = c.x_re * params.w0_im;
    if (input.has_imag()) {
      z_re.noalias() -= c.x_im * params.w0_im;
      z_im.noalias() += c.x_im * params.w0_re;
    }
    c.t_re = z_re.array().tanh().matrix();
    c.t_im = z_im.array().tanh().matrix();
    c.hidden = (c.t_re.array() * c.t_im.array()).matrix();
  }
  if (dropout_active(dropout)) {
    c.hidden_mask = dropout_mask(c.hidden.rows(), c.hidden.cols(), dropout);
    c.hidden.array() *= c.hidden_mask.array();
  }
  c.probs = c.hidden * params.w1;
  if (!c.probs.allFinite()) throw std::runtime_error("non-finite logits in forward pass");
  softmax_rows(c.probs);
  return c;
}

}  // namespace

RealMatrix forward(const ModelParams& params, const ModelInput& input, std::span<const Index> rows, Dropout dropout) {
  return run_forward(params, input, rows, dropout).probs;
}

double cross_entropy(const RealMatrix& probabilities, const LabelVector& labels, std::span<const Index> rows) {
  if (rows.empty()) throw std::invalid_argument("cross-entropy over an empty node set");
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int y = labels.at(static_cast<std::size_t>(rows[i]));
    if (y < 0 || y >= probabilities.cols()) throw std::invalid_argument("label outside class range");
    total -= std::log(std::max(probabilities(static_cast<Index>(i), y), std::numeric_limits<double>::min()));
  }
  return total / static_cast<double>(rows.size());
}

LossAndGrads loss_and_grads(const ModelParams& params, const ModelInput& input, const LabelVector& labels,
                            std::span<const Index> rows, RegularizationOptions reg, Dropout dropout) {
  if (rows.empty()) throw std::invalid_argument("loss over an empty node set");
  const auto c = run_forward(params, input, rows, dropout);
  const auto m = static_cast<Index>(rows.size());

  LossAndGrads out;
  out.loss = cross_entropy(c.probs, labels, rows);
  out.loss += reg.l2 * (params.w0_re.squaredNorm() + params.w0_im.squaredNorm());
  if (reg.include_second_layer) out.loss += reg.l2 * params.w1.squaredNorm();

  RealMatrix g = c.probs;
  for (Index i = 0; i < m; ++i) g(i, labels[static_cast<std::size_t>(rows[i])]) -= 1.0;
  g /= static_cast<double>(m);

  out.grads.real_degenerate = params.real_degenerate;
  out.grads.w1 = c.hidden.transpose() * g;
  if (reg.include_second_layer) out.grads.w1 += 2.0 * reg.l2 * params.w1;

  RealMatrix d_hidden = g * params.w1.transpose();
  if (c.hidden_mask.size() != 0) d_hidden.array() *= c.hidden_mask.array();

  if (params.real_degenerate) {
    const RealMatrix d_z = (d_hidden.array() * (1.0 - c.t_re.array().square())).matrix();
    out.grads.w0_re = c.x_re.transpose() * d_z + 2.0 * reg.l2 * params.w0_re;
    out.grads.w0_im = RealMatrix::Zero(params.w0_im.rows(), params.w0_im.cols());
    return out;
  }

  const RealMatrix d_zre = (d_hidden.array() * (1.0 - c.t_re.array().square()) * c.t_im.array()).matrix();
  const RealMatrix d_zim = (d_hidden.array() * c.t_re.array() * (1.0 - c.t_im.array().square())).matrix();
  out.grads.w0_re = c.x_re.transpose() * d_zre;
  out.grads.w0_im = c.x_re.transpose() * d_zim;
  if (input.has_imag()) {
    out.grads.w0_re.noalias() += c.x_im.transpose() * d_zim;
    out.grads.w0_im.noalias() -= c.x_im.transpose() * d_zre;
  }
  out.grads.w0_re += 2.0 * reg.l2 * params.w0_re;
  out.grads.w0_im += 2.0 * reg.l2 * params.w0_im;
  return out;
}

Index predict_class(const RealMatrix& probabilities, Index row) {
  Index best = 0;
  for (Index c = 1; c < probabilities.cols(); ++c) {
    if (probabilities(row, c) > probabilities(row, best)) best = c;
  }
  return best;
}

double evaluate(const ModelParams& params, const ModelInput& input, const LabelVector& labels,
                std::span<const Index> rows) {
  if (rows.empty()) throw std::invalid_argument("evaluation over an empty node set");
  const auto probs = forward(params, input, rows);
  Index correct = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (predict_class(probs, static_cast<Index>(i)) == labels.at(static_cast<std::size_t>(rows[i]))) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace magneto
