#include "magneto/magnetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace magneto {

Complex unit_phase(Charge q, int direction) {
  const std::int64_t turns_num = q.num * direction;
  if ((4 * turns_num) % q.den == 0) {
    const auto quarter = (((4 * turns_num) / q.den) % 4 + 4) % 4;
    switch (quarter) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(turns_num) / static_cast<double>(q.den);
  return std::polar(1.0, angle);
}

namespace {

int direction(const DirectedGraph& g, Index u, Index v) {
  return static_cast<int>(g.has_edge(u, v)) - static_cast<int>(g.has_edge(v, u));
}

std::vector<double> inverse_sqrt_degrees(const std::vector<double>& degrees, bool allow_zero) {
  std::vector<double> out(degrees.size());
  for (std::size_t u = 0; u < degrees.size(); ++u) {
    if (degrees[u] <= 0.0) {
      if (!allow_zero) {
        throw std::invalid_argument("node " + std::to_string(u) +
                                    " has zero degree; symmetric normalization is undefined");
      }
      out[u] = 0.0;
      continue;
    }
    out[u] = 1.0 / std::sqrt(degrees[u]);
  }
  return out;
}

// sum over the A_s support of scale(u, v) * A_s(u,v) * T_q(u,v), plus diagonal.
template <typename Scale>
std::vector<ComplexSparseMatrix::Triplet> weighted_phases(const DirectedGraph& g, const SymmetrizedGraph& sg, Charge q,
                                                          Scale scale) {
  std::vector<ComplexSparseMatrix::Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(sg.weights.nnz()) + static_cast<std::size_t>(g.num_nodes()));
  for (Index u = 0; u < sg.num_nodes(); ++u) {
    const auto cols = sg.weights.row_cols(u);
    const auto vals = sg.weights.row_values(u);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Index v = cols[k];
      triplets.push_back({u, v, scale(u, v) * vals[k] * unit_phase(q, direction(g, u, v))});
    }
  }
  return triplets;
}

}  // namespace

ComplexSparseMatrix transporter(const DirectedGraph& g, Charge q) {
  const auto sg = symmetrize(g);
  auto triplets = weighted_phases(g, sg, q, [&](Index u, Index v) { return 1.0 / sg.weights.coeff(u, v); });
  return ComplexSparseMatrix::from_triplets(g.num_nodes(), g.num_nodes(), std::move(triplets), /*hermitian=*/true);
}

ComplexSparseMatrix magnetic_laplacian(const DirectedGraph& g, Charge q, Normalization normalization,
                                       Symmetrization convention) {
  const auto sg = symmetrize(g, convention);
  const Index n = g.num_nodes();
  std::vector<ComplexSparseMatrix::Triplet> triplets;
  if (normalization == Normalization::None) {
    triplets = weighted_phases(g, sg, q, [](Index, Index) { return -1.0; });
    for (Index u = 0; u < n; ++u) triplets.push_back({u, u, Complex{sg.degrees[u], 0.0}});
  } else {
    const auto inv_sqrt = inverse_sqrt_degrees(sg.degrees, /*allow_zero=*/false);
    triplets = weighted_phases(g, sg, q, [&](Index u, Index v) { return -inv_sqrt[u] * inv_sqrt[v]; });
    for (Index u = 0; u < n; ++u) triplets.push_back({u, u, Complex{1.0, 0.0}});
  }
  return ComplexSparseMatrix::from_triplets(n, n, std::move(triplets), /*hermitian=*/true);
}

ComplexSparseMatrix normalized_magnetic_adjacency(const DirectedGraph& g, Charge q, Symmetrization convention) {
  const auto sg = symmetrize(g, convention);
  const auto inv_sqrt = inverse_sqrt_degrees(sg.degrees, /*allow_zero=*/false);
  auto triplets = weighted_phases(g, sg, q, [&](Index u, Index v) { return inv_sqrt[u] * inv_sqrt[v]; });
  return ComplexSparseMatrix::from_triplets(g.num_nodes(), g.num_nodes(), std::move(triplets), /*hermitian=*/true);
}

ComplexSparseMatrix renormalized_magnetic_adjacency(const DirectedGraph& g, Charge q, Symmetrization convention) {
  const auto sg = symmetrize(g, convention);
  const Index n = g.num_nodes();
  std::vector<double> degrees(sg.degrees);
  for (auto& d : degrees) d += 1.0;
  const auto inv_sqrt = inverse_sqrt_degrees(degrees, /*allow_zero=*/false);
  auto triplets = weighted_phases(g, sg, q, [&](Index u, Index v) { return inv_sqrt[u] * inv_sqrt[v]; });
  for (Index u = 0; u < n; ++u) triplets.push_back({u, u, Complex{inv_sqrt[u] * inv_sqrt[u], 0.0}});
  return ComplexSparseMatrix::from_triplets(n, n, std::move(triplets), /*hermitian=*/true);
}

}  // namespace magneto
