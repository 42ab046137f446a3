#include "magneto/filters.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "magneto/magnetic.hpp"

namespace magneto {

FilterKind parse_filter_kind(const std::string& name) {
  if (name == "lr" || name == "linear-rank" || name == "LinearRank") return FilterKind::LinearRank;
  if (name == "md" || name == "markov-diffusion" || name == "MarkovDiffusion") return FilterKind::MarkovDiffusion;
  if (name == "ppr" || name == "PPR") return FilterKind::PersonalizedPageRank;
  if (name == "hkpr" || name == "HKPR") return FilterKind::HeatKernelPageRank;
  throw std::invalid_argument("unknown filter kind '" + name + "'");
}

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::LinearRank: return "lr";
    case FilterKind::MarkovDiffusion: return "md";
    case FilterKind::PersonalizedPageRank: return "ppr";
    case FilterKind::HeatKernelPageRank: return "hkpr";
  }
  return "unknown";
}

FilterSign parse_filter_sign(const std::string& name) {
  if (name == "low-pass" || name == "low") return FilterSign::LowPass;
  if (name == "high-pass" || name == "high") return FilterSign::HighPass;
  throw std::invalid_argument("unknown filter sign '" + name + "'");
}

std::string to_string(FilterSign sign) { return sign == FilterSign::LowPass ? "low-pass" : "high-pass"; }

void FilterSpec::validate() const {
  if (order < 1) throw std::invalid_argument("filter order K must be >= 1");
  const bool needs_alpha = kind == FilterKind::PersonalizedPageRank;
  const bool needs_time = kind == FilterKind::HeatKernelPageRank;
  if (needs_alpha != alpha.has_value()) {
    throw std::invalid_argument(needs_alpha ? "PPR requires alpha" : "alpha is only valid for PPR");
  }
  if (needs_time != time.has_value()) {
    throw std::invalid_argument(needs_time ? "HKPR requires t" : "t is only valid for HKPR");
  }
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw std::invalid_argument("PPR alpha must lie in (0, 1)");
  if (time && !(*time > 0.0 && std::isfinite(*time))) throw std::invalid_argument("HKPR t must be positive");
}

Damping damping(const FilterSpec& spec) {
  spec.validate();
  const int k_max = spec.order;
  Damping d;
  switch (spec.kind) {
    case FilterKind::LinearRank: {
      const double denom = static_cast<double>(k_max) * static_cast<double>(k_max + 1);
      for (int k = 0; k < k_max; ++k) {
        d.coefficients.push_back(2.0 * static_cast<double>(k_max - k) / denom);
        d.powers.push_back(k);
      }
      break;
    }
    case FilterKind::MarkovDiffusion:
      for (int k = 1; k <= k_max; ++k) {
        d.coefficients.push_back(1.0 / static_cast<double>(k_max));
        d.powers.push_back(k);
      }
      break;
    case FilterKind::PersonalizedPageRank: {
      const double a = *spec.alpha;
      double power = 1.0;
      for (int k = 0; k < k_max; ++k) {
        d.coefficients.push_back((1.0 - a) * power);
        d.powers.push_back(k);
        power *= a;
      }
      break;
    }
    case FilterKind::HeatKernelPageRank: {
      const double t = *spec.time;
      double term = std::exp(-t);
      for (int k = 0; k < k_max; ++k) {
        d.coefficients.push_back(term);
        d.powers.push_back(k);
        term *= t / static_cast<double>(k + 1);
      }
      break;
    }
  }
  return d;
}

ComplexSparseMatrix gso(const DirectedGraph& g, Charge q, FilterSign sign, Symmetrization convention) {
  auto p = renormalized_magnetic_adjacency(g, q, convention);
  return sign == FilterSign::LowPass ? p : p.scaled(Complex{-1.0, 0.0});
}

namespace {

void require_finite(const ComplexMatrix& m, int step) {
  if (!m.allFinite()) {
    throw std::runtime_error("non-finite value in filtered features at propagation step " + std::to_string(step));
  }
}

}  // namespace

ComplexMatrix precompute_features(const ComplexSparseMatrix& p, const ComplexMatrix& x, const FilterSpec& spec) {
  spec.validate();
  if (p.rows() != p.cols() || p.cols() != x.rows()) {
    throw std::invalid_argument("shift operator is " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) +
                                " but features have " + std::to_string(x.rows()) + " rows");
  }
  const int order = spec.order;

  if (spec.kind == FilterKind::LinearRank) {
    ComplexMatrix term = (2.0 / static_cast<double>(order + 1)) * x;
    ComplexMatrix acc = term;
    // The k = K-1 update has coefficient 0, so the last useful step is k = K-2.
    for (int k = 0; k + 1 < order; ++k) {
      const double ratio = static_cast<double>(order - k - 1) / static_cast<double>(order - k);
      term = p.multiply(term);
      term *= ratio;
      acc += term;
      require_finite(acc, k + 1);
    }
    return acc;
  }

  const auto d = damping(spec);
  ComplexMatrix power = x;
  ComplexMatrix acc = ComplexMatrix::Zero(x.rows(), x.cols());
  int current = 0;
  for (std::size_t i = 0; i < d.powers.size(); ++i) {
    while (current < d.powers[i]) {
      power = p.multiply(power);
      ++current;
    }
    acc += d.coefficients[i] * power;
    require_finite(acc, current);
  }
  return acc;
}

ComplexMatrix precompute_features(const ComplexSparseMatrix& p, const RealMatrix& x, const FilterSpec& spec) {
  return precompute_features(p, ComplexMatrix(x.cast<Complex>()), spec);
}

Eigen::MatrixXcd apply_filter_dense(const Eigen::MatrixXcd& p, const FilterSpec& spec) {
  if (p.rows() != p.cols()) throw std::invalid_argument("dense filter needs a square operator");
  if (p.rows() > 200) throw std::invalid_argument("dense filter is limited to n <= 200");
  const auto d = damping(spec);
  const Index n = p.rows();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(n, n);
  int current = 0;
  for (std::size_t i = 0; i < d.powers.size(); ++i) {
    while (current < d.powers[i]) {
      power = power * p;
      ++current;
    }
    h += d.coefficients[i] * power;
  }
  return h;
}

std::optional<Eigen::MatrixXcd> linear_rank_closed_form(const Eigen::MatrixXcd& p, int order) {
  const Index n = p.rows();
  const auto k = static_cast<double>(order);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(id - p);
  if (!lu.isInvertible() || lu.rcond() < 1e-10) return std::nullopt;
  Eigen::MatrixXcd p_pow = id;
  for (int i = 0; i <= order; ++i) p_pow = p_pow * p;
  const Eigen::MatrixXcd inv = lu.inverse();
  const Eigen::MatrixXcd numerator = k * id - (k + 1.0) * p + p_pow;
  return Eigen::MatrixXcd((2.0 / (k * (k + 1.0))) * numerator * inv * inv);
}

}  // namespace magneto
