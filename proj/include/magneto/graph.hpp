#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "magneto/dense.hpp"
#include "magneto/sparse.hpp"

namespace magneto {

/// Unweighted directed graph on nodes 0..n-1. Edges are sorted and unique;
/// self-loops are kept. The adjacency matrix A has A(u,v) = 1 iff u -> v.
class DirectedGraph {
 public:
  using Edge = std::pair<Index, Index>;

  DirectedGraph() = default;
  /// Throws std::out_of_range on an endpoint outside [0, n). Duplicate edges
  /// collapse to one.
  DirectedGraph(Index num_nodes, std::vector<Edge> edges);

  Index num_nodes() const { return n_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Index> successors(Index u) const { return adjacency_.row_cols(u); }
  bool has_edge(Index u, Index v) const { return adjacency_.coeff(u, v) != 0.0; }
  const RealSparseMatrix& adjacency() const { return adjacency_; }

  /// True when every edge has its reverse (an undirected graph stored as a digraph).
  bool is_symmetric() const;

 private:
  Index n_ = 0;
  std::vector<Edge> edges_;
  RealSparseMatrix adjacency_;
};

enum class Symmetrization { HalfSum, Max };

/// Undirected view A_s of a digraph with its degree vector D_s.
struct SymmetrizedGraph {
  RealSparseMatrix weights;
  std::vector<double> degrees;
  Symmetrization convention = Symmetrization::HalfSum;

  Index num_nodes() const { return weights.rows(); }
  double average_degree() const;
};

/// A_s = (A + A^T)/2 (half-sum) or max(A, A^T) (max).
SymmetrizedGraph symmetrize(const DirectedGraph& g, Symmetrization convention = Symmetrization::HalfSum);

/// Label of every node; negative means unlabeled.
using LabelVector = std::vector<int>;

int num_classes(const LabelVector& labels);

enum class IsolatedNodePolicy {
  CountAsZero,  // isolated nodes contribute 0 to the mean
  Exclude,      // isolated nodes are dropped from the mean
};

/// Mean over labeled nodes of the fraction of neighbors (in the symmetrized
/// graph, self excluded) that share the node's label.
double homophily_index(const DirectedGraph& g, const LabelVector& labels,
                       IsolatedNodePolicy policy = IsolatedNodePolicy::CountAsZero);

struct SplitFractions {
  double train = 0.0;
  double val = 0.0;
  double test = 0.0;

  static SplitFractions citation() { return {0.05, 0.10, 0.85}; }
  static SplitFractions webpage() { return {0.60, 0.20, 0.20}; }
};

/// Disjoint sorted node index sets.
struct SplitMask {
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;
};

/// Per-class stratified random split. Each class of size m gets
/// floor(val*m) validation nodes, floor(test*m) test nodes and the remainder
/// in train. Throws if the fractions do not sum to 1 or a class has fewer
/// nodes than there are non-empty parts.
SplitMask split_nodes(const LabelVector& labels, SplitFractions fractions, std::uint64_t seed);

/// S_p(x) = (1/p) sum_u ( sum_v A_s(u,v) (x(u) - x(v))^2 )^(p/2) for p in {1, 2}.
/// With `normalized`, x(u) is replaced by x(u)/sqrt(d_u), so that for p = 2
/// the value equals x^T (I - D^-1/2 A_s D^-1/2) x on graphs without isolated
/// nodes (isolated nodes contribute 0 here).
double dirichlet_energy(const SymmetrizedGraph& sg, std::span<const double> x, int p, bool normalized = false);

}  // namespace magneto
