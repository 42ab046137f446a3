#include "magneto/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace magneto {

DirectedGraph::DirectedGraph(Index num_nodes, std::vector<Edge> edges) : n_(num_nodes) {
  if (n_ < 0) throw std::invalid_argument("negative node count");
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) {
      throw std::out_of_range("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") references a node outside [0, " +
                              std::to_string(n_) + ")");
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  std::vector<RealSparseMatrix::Triplet> triplets;
  triplets.reserve(edges_.size());
  for (const auto& [u, v] : edges_) triplets.push_back({u, v, 1.0});
  adjacency_ = RealSparseMatrix::from_triplets(n_, n_, std::move(triplets));
}

bool DirectedGraph::is_symmetric() const {
  return std::all_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return has_edge(e.second, e.first); });
}

double SymmetrizedGraph::average_degree() const {
  if (degrees.empty()) return 0.0;
  return std::accumulate(degrees.begin(), degrees.end(), 0.0) / static_cast<double>(degrees.size());
}

SymmetrizedGraph symmetrize(const DirectedGraph& g, Symmetrization convention) {
  const Index n = g.num_nodes();
  std::vector<RealSparseMatrix::Triplet> triplets;
  triplets.reserve(2 * g.edges().size());
  for (const auto& [u, v] : g.edges()) {
    if (u == v) {
      triplets.push_back({u, u, 1.0});
      continue;
    }
    const bool reciprocal = g.has_edge(v, u);
    double w = 0.5;
    if (convention == Symmetrization::Max || reciprocal) w = 1.0;
    if (reciprocal) {
      // Emit the pair once, from the lower endpoint.
      if (u < v) {
        triplets.push_back({u, v, w});
        triplets.push_back({v, u, w});
      }
    } else {
      triplets.push_back({u, v, w});
      triplets.push_back({v, u, w});
    }
  }
  SymmetrizedGraph sg;
  sg.convention = convention;
  sg.weights = RealSparseMatrix::from_triplets(n, n, std::move(triplets), /*hermitian=*/true);
  sg.degrees.assign(static_cast<std::size_t>(n), 0.0);
  for (Index u = 0; u < n; ++u) {
    for (double w : sg.weights.row_values(u)) sg.degrees[u] += w;
  }
  return sg;
}

int num_classes(const LabelVector& labels) {
  int top = -1;
  for (int y : labels) top = std::max(top, y);
  return top + 1;
}

double homophily_index(const DirectedGraph& g, const LabelVector& labels, IsolatedNodePolicy policy) {
  if (static_cast<Index>(labels.size()) != g.num_nodes()) {
    throw std::invalid_argument("label count does not match node count");
  }
  const auto sg = symmetrize(g);
  double total = 0.0;
  Index counted = 0;
  for (Index u = 0; u < g.num_nodes(); ++u) {
    if (labels[u] < 0) continue;
    Index neighbors = 0;
    Index same = 0;
    for (Index v : sg.weights.row_cols(u)) {
      if (v == u) continue;
      ++neighbors;
      if (labels[v] == labels[u]) ++same;
    }
    if (neighbors == 0) {
      if (policy == IsolatedNodePolicy::CountAsZero) ++counted;
      continue;
    }
    total += static_cast<double>(same) / static_cast<double>(neighbors);
    ++counted;
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

SplitMask split_nodes(const LabelVector& labels, SplitFractions fractions, std::uint64_t seed) {
  const double sum = fractions.train + fractions.val + fractions.test;
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");
  if (fractions.train <= 0.0 || fractions.val < 0.0 || fractions.test < 0.0) {
    throw std::invalid_argument("split fractions must be non-negative with a positive train share");
  }
  const int parts = 1 + (fractions.val > 0.0) + (fractions.test > 0.0);

  std::map<int, std::vector<Index>> by_class;
  for (Index u = 0; u < static_cast<Index>(labels.size()); ++u) {
    if (labels[u] >= 0) by_class[labels[u]].push_back(u);
  }

  std::mt19937_64 rng(seed);
  SplitMask split;
  for (auto& [cls, members] : by_class) {
    const auto m = static_cast<Index>(members.size());
    if (m < parts) {
      throw std::invalid_argument("class " + std::to_string(cls) + " has " + std::to_string(m) +
                                  " nodes, fewer than the " + std::to_string(parts) + " split parts");
    }
    std::shuffle(members.begin(), members.end(), rng);
    // Small epsilon so that e.g. 0.2 * 5 lands on 1 rather than 0.999...
    const auto n_val = static_cast<Index>(std::floor(fractions.val * static_cast<double>(m) + 1e-9));
    const auto n_test = static_cast<Index>(std::floor(fractions.test * static_cast<double>(m) + 1e-9));
    const Index n_train = m - n_val - n_test;
    auto it = members.begin();
    split.train.insert(split.train.end(), it, it + n_train);
    it += n_train;
    split.val.insert(split.val.end(), it, it + n_val);
    it += n_val;
    split.test.insert(split.test.end(), it, members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

double dirichlet_energy(const SymmetrizedGraph& sg, std::span<const double> x, int p, bool normalized) {
  if (p != 1 && p != 2) throw std::invalid_argument("Dirichlet energy supports p in {1, 2}, got " + std::to_string(p));
  const Index n = sg.num_nodes();
  if (static_cast<Index>(x.size()) != n) throw std::invalid_argument("signal length does not match node count");

  auto scaled = [&](Index u) {
    if (!normalized) return x[u];
    return sg.degrees[u] > 0.0 ? x[u] / std::sqrt(sg.degrees[u]) : 0.0;
  };

  double energy = 0.0;
  for (Index u = 0; u < n; ++u) {
    double local = 0.0;
    const auto cols = sg.weights.row_cols(u);
    const auto vals = sg.weights.row_values(u);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double diff = scaled(u) - scaled(cols[k]);
      local += vals[k] * diff * diff;
    }
    energy += p == 2 ? local : std::sqrt(local);
  }
  return energy / static_cast<double>(p);
}

}  // namespace magneto
