#include "magneto/denoise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "magneto/magnetic.hpp"

namespace magneto {

ComplexVector conjugate_gradient(const ComplexSparseMatrix& m, double shift, double scale, const ComplexVector& b,
                                 double tolerance, Index max_iterations) {
  auto apply = [&](const ComplexVector& v) -> ComplexVector { return shift * v + scale * m.multiply(v); };
  ComplexVector x = ComplexVector::Zero(b.size());
  const double b_norm = b.norm();
  if (b_norm == 0.0) return x;
  ComplexVector r = b;
  ComplexVector p = r;
  double rr = r.squaredNorm();
  for (Index it = 0; it < max_iterations; ++it) {
    const ComplexVector ap = apply(p);
    const Complex pap = p.dot(ap);  // conjugates p
    if (pap.real() <= 0.0) throw std::runtime_error("conjugate gradient: operator is not positive definite");
    const double alpha = rr / pap.real();
    x += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= tolerance * b_norm) {
      // Confirm against the true residual, not the recurrence.
      if ((b - apply(x)).norm() <= tolerance * b_norm * 10.0) return x;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  throw std::runtime_error("conjugate gradient did not reach relative residual " + std::to_string(tolerance) +
                           " within " + std::to_string(max_iterations) + " iterations");
}

ComplexVector denoise(const DirectedGraph& g, Charge q, const ComplexVector& x, double mu, DenoiseMethod method,
                      const SolverOptions& options, Symmetrization convention) {
  if (!(mu > 0.0)) throw std::invalid_argument("denoising trade-off mu must be positive");
  const Index n = g.num_nodes();
  if (x.size() != n) throw std::invalid_argument("signal length does not match node count");

  // Both forms reduce to (shift I + scale M) y = rhs.
  ComplexSparseMatrix m;
  double shift = 1.0;
  double scale = 1.0;
  double out_factor = 1.0;
  if (method == DenoiseMethod::PprForm) {
    const double alpha = 1.0 / (mu + 1.0);
    m = normalized_magnetic_adjacency(g, q, convention);
    scale = -alpha;
    out_factor = mu / (mu + 1.0);
  } else {
    m = magnetic_laplacian(g, q, Normalization::Symmetric, convention);
    scale = 1.0 / mu;
  }

  if (n <= options.dense_fallback) {
    Eigen::MatrixXcd op = scale * m.to_dense();
    op.diagonal().array() += shift;
    const Eigen::LLT<Eigen::MatrixXcd> llt(op);
    if (llt.info() != Eigen::Success) throw std::runtime_error("denoising system is not positive definite");
    return out_factor * llt.solve(x);
  }
  const Index max_it = options.max_iterations > 0 ? options.max_iterations : 10 * n;
  return out_factor * conjugate_gradient(m, shift, scale, x, options.tolerance, max_it);
}

}  // namespace magneto
