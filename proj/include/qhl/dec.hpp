#ifndef QHL_DEC_HPP
#define QHL_DEC_HPP

#include "qhl/gauge_field.hpp"
#include "qhl/lattice.hpp"

#include <Eigen/Dense>

namespace qhl {

using VecR = Eigen::VectorXd;

// Discrete exterior calculus on the periodic cubic lattice. Scalar-valued
// cochains: 0-forms are site vectors (size N³); 1-forms are axis-major
// site vectors (size 3N³, component a at [a*N³ + site]); 2-forms are stored
// on the plane pairs (0,1), (0,2), (1,2) in that order (size 3N³).

VecR dec_d0(const LatticeTorus& torus, const VecR& f);
VecR dec_delta1(const LatticeTorus& torus, const VecR& u); // adjoint of d0
VecR dec_d1(const LatticeTorus& torus, const VecR& u);
VecR dec_delta2(const LatticeTorus& torus, const VecR& w); // adjoint of d1

/// Hodge Laplacian Δ = d0 δ1 + δ2 d1 on scalar lattice one-forms.
VecR hodge_laplacian_apply(const LatticeTorus& torus, const VecR& u);

/// Δ acting componentwise on the Lie-algebra factor of a g-valued one-form.
GaugeOneForm hodge_laplacian_apply(const GaugeOneForm& omega);

/// Dense matrix of the scalar one-form Laplacian (test-scale lattices only).
Eigen::MatrixXd hodge_laplacian_dense(const LatticeTorus& torus);

/// Symbol of the discrete Laplacian for the Fourier mode with integer wave
/// vector k: (2/h)² Σ_j sin²(π k_j / N). Terms are accumulated in descending
/// order so permuted wave vectors give bit-identical eigenvalues.
double laplacian_symbol(const LatticeTorus& torus, const Eigen::Vector3i& k);

} // namespace qhl

#endif
