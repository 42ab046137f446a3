#pragma once

#include "magneto/charge.hpp"
#include "magneto/dense.hpp"
#include "magneto/graph.hpp"
#include "magneto/sparse.hpp"

namespace magneto {

enum class DenoiseMethod {
  PprForm,     // beta (I - alpha A_q)^-1 x, alpha = 1/(mu+1), beta = mu/(mu+1)
  VonNeumann,  // (I + L_q / mu)^-1 x
};

struct SolverOptions {
  double tolerance = 1e-12;   // relative residual ||b - Ax|| / ||b||
  Index max_iterations = 0;   // 0 means 10 n
  Index dense_fallback = 200; // direct solve at or below this size
};

/// Minimizer of mu ||x_out - x||^2 + x_out^* L_q x_out, with L_q the
/// symmetric normalized magnetic Laplacian. Both methods solve a Hermitian
/// positive definite system. Throws std::invalid_argument for mu <= 0 or a
/// zero-degree node, std::runtime_error when the iterative solver stalls.
ComplexVector denoise(const DirectedGraph& g, Charge q, const ComplexVector& x, double mu, DenoiseMethod method,
                      const SolverOptions& options = {}, Symmetrization convention = Symmetrization::HalfSum);

/// Solves (shift I + scale M) y = b for Hermitian M with conjugate gradients.
/// The operator must be positive definite.
ComplexVector conjugate_gradient(const ComplexSparseMatrix& m, double shift, double scale, const ComplexVector& b,
                                 double tolerance, Index max_iterations);

}  // namespace magneto
