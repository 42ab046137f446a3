#include "magneto/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "magneto/magnetic.hpp"

namespace magneto {

namespace {

constexpr double kHermitianInputTolerance = 1e-10;

void check_dense_input(const DenseComplexMatrix& m, Index dense_limit) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigensolver input must be square");
  if (m.rows() > dense_limit) {
    throw std::invalid_argument("matrix size " + std::to_string(m.rows()) + " exceeds the dense limit " +
                                std::to_string(dense_limit));
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianInputTolerance * scale) {
    throw std::invalid_argument("eigensolver input is not Hermitian (max deviation " + std::to_string(asym) + ")");
  }
}

}  // namespace

Spectrum hermitian_eigen(const DenseComplexMatrix& m, const EigenOptions& options) {
  check_dense_input(m, options.dense_limit);
  const Index n = m.rows();
  const Index keep = std::min(n, options.k.value_or(n));
  if (keep < 0) throw std::invalid_argument("k must be non-negative");
  Spectrum out;
  if (n == 0) return out;

  const Eigen::MatrixXd re = m.real();
  const Eigen::MatrixXd im = m.imag();
  Eigen::MatrixXd embedded(2 * n, 2 * n);
  embedded << re, -im, im, re;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      embedded, options.vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
  const Eigen::VectorXd& values = solver.eigenvalues();

  // Eigenvalues of the embedding come in exact pairs; near-equal values are
  // clustered so that each cluster of size 2r stands for an r-fold eigenvalue.
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const double cluster_tol = 1e-8 * scale;
  std::vector<std::pair<Index, Index>> clusters;  // [begin, end) into values
  for (Index i = 0; i < 2 * n;) {
    Index j = i + 1;
    while (j < 2 * n && values[j] - values[j - 1] <= cluster_tol) ++j;
    if ((j - i) % 2 != 0) {
      throw std::runtime_error("unpaired eigenvalue in the real embedding; input too ill-conditioned");
    }
    clusters.emplace_back(i, j);
    i = j;
  }

  out.eigenvalues.reserve(static_cast<std::size_t>(keep));
  if (options.vectors) out.eigenvectors = DenseComplexMatrix(n, keep);
  Index filled = 0;
  for (const auto& [begin, end] : clusters) {
    if (filled >= keep) break;
    const Index multiplicity = (end - begin) / 2;
    const Index take = std::min(multiplicity, keep - filled);
    for (Index r = 0; r < take; ++r) out.eigenvalues.push_back(values[begin + 2 * r]);
    if (options.vectors) {
      const Eigen::MatrixXd& vecs = solver.eigenvectors();
      DenseComplexMatrix candidates(n, end - begin);
      for (Index c = begin; c < end; ++c) {
        candidates.col(c - begin).real() = vecs.col(c).head(n);
        candidates.col(c - begin).imag() = vecs.col(c).tail(n);
      }
      // The 2r real vectors span an r-dimensional complex subspace.
      Eigen::ColPivHouseholderQR<DenseComplexMatrix> qr(candidates);
      const DenseComplexMatrix basis = qr.householderQ() * DenseComplexMatrix::Identity(n, multiplicity);
      out.eigenvectors->middleCols(filled, take) = basis.leftCols(take);
    }
    filled += take;
  }
  return out;
}

ShiftOperator parse_shift_operator(const std::string& name) {
  if (name == "normalized-adjacency") return ShiftOperator::NormalizedAdjacency;
  if (name == "renormalized-adjacency" || name == "low-pass") return ShiftOperator::RenormalizedAdjacency;
  if (name == "negative-renormalized" || name == "high-pass") return ShiftOperator::NegativeRenormalized;
  throw std::invalid_argument("unknown shift operator '" + name + "'");
}

std::string to_string(ShiftOperator gso) {
  switch (gso) {
    case ShiftOperator::NormalizedAdjacency: return "normalized-adjacency";
    case ShiftOperator::RenormalizedAdjacency: return "renormalized-adjacency";
    case ShiftOperator::NegativeRenormalized: return "negative-renormalized";
  }
  return "unknown";
}

std::vector<double> frequency_response(const DirectedGraph& g, Charge q, ShiftOperator gso, ResponseMode mode,
                                       Symmetrization convention, Index dense_limit) {
  EigenOptions opts;
  opts.vectors = false;
  opts.dense_limit = dense_limit;
  std::vector<double> response;

  if (mode == ResponseMode::Exact) {
    ComplexSparseMatrix op;
    switch (gso) {
      case ShiftOperator::NormalizedAdjacency: op = normalized_magnetic_adjacency(g, q, convention); break;
      case ShiftOperator::RenormalizedAdjacency: op = renormalized_magnetic_adjacency(g, q, convention); break;
      case ShiftOperator::NegativeRenormalized:
        op = renormalized_magnetic_adjacency(g, q, convention).scaled(Complex{-1.0, 0.0});
        break;
    }
    response = hermitian_eigen(op.to_dense(), opts).eigenvalues;
  } else {
    const auto laplacian = magnetic_laplacian(g, q, Normalization::Symmetric, convention);
    const auto lambda = hermitian_eigen(laplacian.to_dense(), opts).eigenvalues;
    const double d = symmetrize(g, convention).average_degree();
    const double ratio = d / (d + 1.0);
    response.reserve(lambda.size());
    for (double l : lambda) {
      switch (gso) {
        case ShiftOperator::NormalizedAdjacency: response.push_back(1.0 - l); break;
        case ShiftOperator::RenormalizedAdjacency: response.push_back(1.0 - ratio * l); break;
        case ShiftOperator::NegativeRenormalized: response.push_back(ratio * l - 1.0); break;
      }
    }
  }
  std::sort(response.begin(), response.end());
  return response;
}

Eigenmaps eigenmaps(const DirectedGraph& g, Charge q, Index k, Symmetrization convention, Index dense_limit) {
  if (k < 1 || k > g.num_nodes()) throw std::invalid_argument("eigenmap count k must lie in [1, n]");
  const auto laplacian = magnetic_laplacian(g, q, Normalization::Symmetric, convention);
  EigenOptions opts;
  opts.k = k;
  opts.dense_limit = dense_limit;
  auto spectrum = hermitian_eigen(laplacian.to_dense(), opts);

  Eigenmaps maps;
  maps.eigenvalues = std::move(spectrum.eigenvalues);
  maps.vectors = std::move(*spectrum.eigenvectors);
  for (Index c = 0; c < maps.vectors.cols(); ++c) {
    Index pivot = 0;
    maps.vectors.col(c).cwiseAbs().maxCoeff(&pivot);
    const Complex entry = maps.vectors(pivot, c);
    maps.vectors.col(c) *= std::conj(entry) / std::abs(entry);
  }
  return maps;
}

std::string eigenmaps_csv(const Eigenmaps& maps) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "node";
  for (Index c = 0; c < maps.vectors.cols(); ++c) out << ",re_" << c << ",im_" << c;
  out << '\n';
  for (Index r = 0; r < maps.vectors.rows(); ++r) {
    out << r;
    for (Index c = 0; c < maps.vectors.cols(); ++c) {
      out << ',' << maps.vectors(r, c).real() << ',' << maps.vectors(r, c).imag();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace magneto
