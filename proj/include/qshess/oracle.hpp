#pragma once

#include <vector>

#include "qshess/dense.hpp"
#include "qshess/sequences.hpp"
#include "qshess/types.hpp"

namespace qshess {

// Everything in here is a straightforward dense algorithm used to cross-check
// the structured path. None of it may call into the structured code (the one
// shared ingredient is make_rotation, which both sides must use so that the
// two reductions produce identical rotations).

// Hermitian completion of the strictly lower triangle:
// t(B) = L + L^*, L = strict lower triangle of B.
DenseMatrix t_op(const DenseMatrix& B);

struct DenseHessenberg {
    DenseMatrix H;
    DenseMatrix Q; // H = Q A Q^*
};

// Column-by-column Givens reduction to Hessenberg form, eliminating each
// column from the bottom up. O(n^3).
DenseHessenberg dense_hessenberg(const DenseMatrix& A);

// Singular values by one-sided Jacobi (descending order).
std::vector<double> singular_values(const DenseMatrix& A);

// Rank against the threshold tol * smax.
int numerical_rank(const DenseMatrix& A, double tol);

// Lower/upper quasiseparable rank: max over i of the numerical rank of the
// submatrix A[i+1:, :i+1] (lower) or A[:i+1, i+1:] (upper). Exact but O(n^4)
// flavored; use the _bound variant for large matrices.
int qs_rank_lower(const DenseMatrix& A, double tol);
int qs_rank_upper(const DenseMatrix& A, double tol);

// Cheap certified upper bound on qs_rank_upper via column-pivoted
// Gram-Schmidt: for each split the returned rank r satisfies
// ||A_block - (rank-r approx)||_F <= tol * ||A||_F. Never smaller than the
// true numerical rank at that tolerance... it bounds from above.
int qs_rank_upper_bound(const DenseMatrix& A, double tol);

// det(xI - A) by LU with partial pivoting, exponent-scaled.
ScaledValue dense_char_det(const DenseMatrix& A, cx x);

// Eigenvalues of a Hessenberg matrix by the shifted explicit QR iteration.
std::vector<cx> hessenberg_eigs(DenseMatrix H);

// Residual of the one-step conjugation identity for a single descending sweep
// Q and diagonal D:  R = t(Q A Q^*) - Q (diag(D) + t(A)) Q^* restricted to...
// computed literally as stated; the caller decides what structure to demand.
DenseMatrix residual_qs1(const DenseMatrix& A, const RotationSequence1& Q,
                         const std::vector<double>& D);

} // namespace qshess
