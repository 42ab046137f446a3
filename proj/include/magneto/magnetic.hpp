#pragma once

#include "magneto/charge.hpp"
#include "magneto/graph.hpp"
#include "magneto/sparse.hpp"

namespace magneto {

/// exp(i 2 pi q d) for a direction d in {-1, 0, 1}. Quarter turns are
/// returned exactly, so q in {0, 1/4, 1/2} never leaves rounding residue in
/// the real or imaginary part.
Complex unit_phase(Charge q, int direction);

/// Parallel transporter T_q(u,v) = exp(i 2 pi q (A(u,v) - A(v,u))) stored on
/// the support of A_s (self-loops included with phase 1).
ComplexSparseMatrix transporter(const DirectedGraph& g, Charge q);

enum class Normalization { None, Symmetric };

/// L_q = D_s - A_s (.) T_q, or its symmetric normalization
/// I - D_s^-1/2 A_s D_s^-1/2 (.) T_q. Throws std::invalid_argument for a
/// zero-degree node under symmetric normalization.
ComplexSparseMatrix magnetic_laplacian(const DirectedGraph& g, Charge q, Normalization normalization,
                                       Symmetrization convention = Symmetrization::HalfSum);

/// D_s^-1/2 A_s D_s^-1/2 (.) T_q. Throws on a zero-degree node.
ComplexSparseMatrix normalized_magnetic_adjacency(const DirectedGraph& g, Charge q,
                                                  Symmetrization convention = Symmetrization::HalfSum);

/// D~^-1/2 (A_s + I) D~^-1/2 (.) T_q with D~ the degrees of A_s + I.
ComplexSparseMatrix renormalized_magnetic_adjacency(const DirectedGraph& g, Charge q,
                                                    Symmetrization convention = Symmetrization::HalfSum);

}  // namespace magneto
