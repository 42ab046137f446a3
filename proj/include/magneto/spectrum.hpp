#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magneto/charge.hpp"
#include "magneto/dense.hpp"
#include "magneto/graph.hpp"

namespace magneto {

using DenseComplexMatrix = Eigen::MatrixXcd;

inline constexpr Index kDefaultDenseLimit = 4000;

struct Spectrum {
  std::vector<double> eigenvalues;               // ascending
  std::optional<DenseComplexMatrix> eigenvectors;  // n x k, orthonormal columns
};

struct EigenOptions {
  std::optional<Index> k;  // leading (smallest) pairs to keep; all when empty
  bool vectors = true;
  Index dense_limit = kDefaultDenseLimit;
};

/// Eigendecomposition of a dense Hermitian matrix through the real symmetric
/// embedding [[Re, -Im], [Im, Re]]. Every eigenvalue of the embedding occurs
/// twice; the pairs are collapsed and, for each eigenvalue cluster of
/// multiplicity r, r orthonormal complex eigenvectors are recovered from the
/// 2r real ones.
///
/// Throws std::invalid_argument if the input deviates from Hermitian by more
/// than 1e-10 or exceeds the dense size limit.
Spectrum hermitian_eigen(const DenseComplexMatrix& m, const EigenOptions& options = {});

enum class ShiftOperator {
  NormalizedAdjacency,    // D^-1/2 A_s D^-1/2 (.) T_q
  RenormalizedAdjacency,  // low-pass GSO
  NegativeRenormalized,   // high-pass GSO
};

ShiftOperator parse_shift_operator(const std::string& name);
std::string to_string(ShiftOperator gso);

enum class ResponseMode { Exact, Approx };

/// Ascending list of the graph frequency response of a shift operator.
/// Exact mode returns its eigenvalues; approx mode maps the eigenvalues
/// lambda_q of the normalized magnetic Laplacian through 1 - lambda,
/// 1 - d/(d+1) lambda or d/(d+1) lambda - 1 with d the average degree.
std::vector<double> frequency_response(const DirectedGraph& g, Charge q, ShiftOperator gso, ResponseMode mode,
                                       Symmetrization convention = Symmetrization::HalfSum,
                                       Index dense_limit = kDefaultDenseLimit);

struct Eigenmaps {
  std::vector<double> eigenvalues;
  DenseComplexMatrix vectors;  // n x k
};

/// First k eigenvectors of the normalized magnetic Laplacian. Each vector's
/// phase is fixed so its largest-modulus entry is real and positive.
Eigenmaps eigenmaps(const DirectedGraph& g, Charge q, Index k, Symmetrization convention = Symmetrization::HalfSum,
                    Index dense_limit = kDefaultDenseLimit);

/// CSV with header node,re_0,im_0,...; full round-trip precision.
std::string eigenmaps_csv(const Eigenmaps& maps);

}  // namespace magneto
