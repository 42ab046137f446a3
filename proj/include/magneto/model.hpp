#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "magneto/dense.hpp"
#include "magneto/graph.hpp"

namespace magneto {

/// Filtered features split into real and imaginary planes once, so the
/// training loop works on real GEMMs. `imag` is empty when every imaginary
/// part is zero.
struct ModelInput {
  RealMatrix real;
  RealMatrix imag;

  static ModelInput from(const ComplexMatrix& x);
  static ModelInput from(const RealMatrix& x);

  Index rows() const { return real.rows(); }
  Index cols() const { return real.cols(); }
  bool has_imag() const { return imag.size() != 0; }
};

/// Two-layer weights: complex first layer stored as (re, im) planes and a
/// real second layer. In real-degenerate mode the imaginary plane is zero.
struct ModelParams {
  RealMatrix w0_re;  // c_in x h
  RealMatrix w0_im;  // c_in x h
  RealMatrix w1;     // h x C
  bool real_degenerate = false;

  Index input_dim() const { return w0_re.rows(); }
  Index hidden_dim() const { return w0_re.cols(); }
  Index num_classes() const { return w1.cols(); }

  static ModelParams zeros_like(const ModelParams& p);
};

/// Complex mode: |w| ~ Rayleigh(sigma) with sigma = 1/sqrt(2 (fan_in + fan_out))
/// and phase ~ U[-pi, pi]. Degenerate mode: real Glorot-uniform first layer
/// with zero imaginary plane. The second layer is always Glorot-uniform.
ModelParams init_weights(Index input_dim, Index hidden_dim, Index classes, std::uint64_t seed, bool real_degenerate);

/// tanh(Re z) * tanh(Im z), or tanh(Re z) in degenerate mode.
RealMatrix cgtu(const ComplexMatrix& z, bool real_degenerate);

struct Dropout {
  double rate = 0.0;
  std::mt19937_64* rng = nullptr;  // dropout disabled when null or rate == 0
};

/// Row-wise softmax(cgtu(X W0) W1) over `rows` of the input (all rows when
/// empty). Dropout masks the input entries (real and imaginary parts with one
/// draw) and the hidden activation, with inverted scaling.
RealMatrix forward(const ModelParams& params, const ModelInput& input, std::span<const Index> rows = {},
                   Dropout dropout = {});

struct LossAndGrads {
  double loss = 0.0;
  ModelParams grads;
};

struct RegularizationOptions {
  double l2 = 0.0;
  bool include_second_layer = false;
};

/// Mean cross-entropy over `rows` plus l2 * ||W0||^2 (and ||W1||^2 if
/// requested), with exact gradients treating Re W0 and Im W0 as independent
/// real parameters.
LossAndGrads loss_and_grads(const ModelParams& params, const ModelInput& input, const LabelVector& labels,
                            std::span<const Index> rows, RegularizationOptions reg, Dropout dropout = {});

/// Mean cross-entropy of given probabilities over `rows` (no regularization).
double cross_entropy(const RealMatrix& probabilities, const LabelVector& labels, std::span<const Index> rows);

/// Fraction of `rows` whose argmax class (lowest index on ties) matches the label.
double evaluate(const ModelParams& params, const ModelInput& input, const LabelVector& labels,
                std::span<const Index> rows);

/// argmax with ties resolved to the lowest class index.
Index predict_class(const RealMatrix& probabilities, Index row);

}  // namespace magneto
