#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magneto/charge.hpp"
#include "magneto/dense.hpp"
#include "magneto/graph.hpp"
#include "magneto/sparse.hpp"

namespace magneto {

enum class FilterKind { LinearRank, MarkovDiffusion, PersonalizedPageRank, HeatKernelPageRank };

/// Low-pass uses P = +A~_q, high-pass P = -A~_q.
enum class FilterSign { LowPass, HighPass };

FilterKind parse_filter_kind(const std::string& name);
std::string to_string(FilterKind kind);
FilterSign parse_filter_sign(const std::string& name);
std::string to_string(FilterSign sign);

struct FilterSpec {
  FilterKind kind = FilterKind::LinearRank;
  int order = 1;                 // truncation order K >= 1
  std::optional<double> alpha;   // PPR restart probability in (0, 1)
  std::optional<double> time;    // HKPR diffusion time > 0
  FilterSign sign = FilterSign::LowPass;

  /// Throws std::invalid_argument unless the fields fit the kind.
  void validate() const;
};

/// Truncated generalized PageRank: H = sum_i coefficients[i] P^powers[i].
struct Damping {
  std::vector<double> coefficients;
  std::vector<int> powers;  // strictly ascending
};

/// LR: 2(K-k)/(K(K+1)) at k = 0..K-1. MD: 1/K at k = 1..K.
/// PPR: (1-alpha) alpha^k and HKPR: e^-t t^k / k! at k = 0..K-1, left
/// unrenormalized so the dropped tail mass stays visible.
Damping damping(const FilterSpec& spec);

/// Graph shift operator +-A~_q.
ComplexSparseMatrix gso(const DirectedGraph& g, Charge q, FilterSign sign,
                        Symmetrization convention = Symmetrization::HalfSum);

struct FilteredFeatures {
  ComplexMatrix values;  // n x c
  FilterSpec spec;
  Charge q;
  std::string dataset;
};

/// X_bar = H X. LinearRank runs the two-term recurrence
///   X_bar = T = 2/(K+1) X,  T <- (K-k-1)/(K-k) P T,  X_bar += T
/// for k = 0..K-2; the other kinds add coefficient * P^k X one sparse product
/// per power. Throws std::invalid_argument on a dimension mismatch and
/// std::runtime_error if a non-finite value appears.
ComplexMatrix precompute_features(const ComplexSparseMatrix& p, const ComplexMatrix& x, const FilterSpec& spec);
ComplexMatrix precompute_features(const ComplexSparseMatrix& p, const RealMatrix& x, const FilterSpec& spec);

/// Dense H = sum_k theta_k P^k by explicit powers, for n <= 200.
Eigen::MatrixXcd apply_filter_dense(const Eigen::MatrixXcd& p, const FilterSpec& spec);

/// LinearRank closed form 2/(K(K+1)) (K I - (K+1) P + P^(K+1)) (I - P)^-2.
/// Returns nullopt when I - P is numerically singular.
std::optional<Eigen::MatrixXcd> linear_rank_closed_form(const Eigen::MatrixXcd& p, int order);

}  // namespace magneto
