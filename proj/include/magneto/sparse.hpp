#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "magneto/dense.hpp"

namespace magneto {

/// Entries whose magnitude falls below this are treated as numerical zeros
/// (phase cancellation) and never stored.
inline constexpr double kDropTolerance = 1e-15;

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
Scalar conjugate(const Scalar& v) {
  if constexpr (is_complex<Scalar>::value) {
    return std::conj(v);
  } else {
    return v;
  }
}

}  // namespace detail

/// Square-or-rectangular compressed sparse row matrix with sorted column
/// indices and no stored zeros. Immutable after assembly.
///
/// The `hermitian` tag is verified on construction: a tagged matrix must
/// satisfy entry(u,v) == conj(entry(v,u)) within 1e-12 on the union of both
/// supports.
template <typename Scalar>
class CsrMatrix {
 public:
  struct Triplet {
    Index row;
    Index col;
    Scalar value;
  };

  static constexpr double kHermitianTolerance = 1e-12;

  CsrMatrix() : row_ptr_(1, 0) {}

  /// Duplicates are summed, entries with |value| < kDropTolerance dropped.
  static CsrMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets,
                                 bool hermitian = false) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    for (const auto& t : triplets) {
      if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
        throw std::out_of_range("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
      }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
      const Index r = triplets[i].row;
      const Index c = triplets[i].col;
      Scalar sum{};
      for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i) sum += triplets[i].value;
      if (std::abs(sum) < kDropTolerance) continue;
      m.col_idx_.push_back(c);
      m.values_.push_back(sum);
      ++m.row_ptr_[static_cast<std::size_t>(r) + 1];
    }
    for (Index r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    m.hermitian_ = hermitian;
    if (hermitian && !m.check_hermitian(kHermitianTolerance)) {
      throw std::invalid_argument("matrix tagged hermitian fails conjugate symmetry");
    }
    return m;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }
  bool is_hermitian() const { return hermitian_; }

  std::span<const Index> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const Scalar> values() const { return values_; }

  std::span<const Index> row_cols(Index r) const {
    return std::span<const Index>(col_idx_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
  }
  std::span<const Scalar> row_values(Index r) const {
    return std::span<const Scalar>(values_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
  }

  Scalar coeff(Index r, Index c) const {
    const auto cols = row_cols(r);
    const auto it = std::lower_bound(cols.begin(), cols.end(), c);
    if (it == cols.end() || *it != c) return Scalar{};
    return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
  }

  bool check_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (Index r = 0; r < rows_; ++r) {
      const auto cols = row_cols(r);
      const auto vals = row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (std::abs(vals[k] - detail::conjugate(coeff(cols[k], r))) > tol) return false;
      }
    }
    return true;
  }

  CsrMatrix scaled(Scalar factor) const {
    CsrMatrix out = *this;
    for (auto& v : out.values_) v *= factor;
    if constexpr (detail::is_complex<Scalar>::value) {
      out.hermitian_ = hermitian_ && factor.imag() == 0.0;
    }
    return out;
  }

  /// y = M x, accumulated in ascending column order per row.
  template <typename VecScalar>
  Eigen::Matrix<std::common_type_t<Scalar, VecScalar>, Eigen::Dynamic, 1> multiply(
      const Eigen::Matrix<VecScalar, Eigen::Dynamic, 1>& x) const {
    using Out = std::common_type_t<Scalar, VecScalar>;
    if (x.size() != cols_) throw std::invalid_argument("matvec dimension mismatch");
    Eigen::Matrix<Out, Eigen::Dynamic, 1> y(rows_);
    for (Index r = 0; r < rows_; ++r) {
      Out acc{};
      for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += values_[p] * x[col_idx_[p]];
      y[r] = acc;
    }
    return y;
  }

  /// Y = M X for a row-major dense block.
  template <typename DenseScalar>
  Eigen::Matrix<std::common_type_t<Scalar, DenseScalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> multiply(
      const Eigen::Matrix<DenseScalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& x) const {
    using Out = std::common_type_t<Scalar, DenseScalar>;
    if (x.rows() != cols_) throw std::invalid_argument("matmul dimension mismatch");
    Eigen::Matrix<Out, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> y =
        Eigen::Matrix<Out, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(rows_, x.cols());
    for (Index r = 0; r < rows_; ++r) {
      for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
        y.row(r) += values_[p] * x.row(col_idx_[p]).template cast<Out>();
      }
    }
    return y;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(rows_, cols_);
    for (Index r = 0; r < rows_; ++r) {
      for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) d(r, col_idx_[p]) = values_[p];
    }
    return d;
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<Scalar> values_;
  bool hermitian_ = false;
};

using RealSparseMatrix = CsrMatrix<double>;
using ComplexSparseMatrix = CsrMatrix<Complex>;

}  // namespace magneto
