#pragma once

#include <cstdint>
#include <vector>

#include "qshess/gv.hpp"

namespace qshess {

struct ReductionOptions {
    // Re-align the carrier against the rotated U every this many steps;
    // 0 means "every k steps" (default), negative disables.
    int reorth_every = 0;
    bool log_rotations = false;
};

struct LoggedRotation {
    cx c, s;
    int row; // global, acts on (row, row+1)
};

// Output of the reduction: H in compact form. The diagonal and subdiagonal
// are stored; everything above the subdiagonal is reachable through the
// rotated generators via entry():
//   H(i,j) = (Uf Vf^* - Vf Uf^*)(i,j)              for j > i+1
//   H(i,i+1) = conj(s_i) + (Uf Vf^* - Vf Uf^*)(i,i+1)
// which is the skew part identity; below the subdiagonal H is exactly zero.
struct HessenbergForm {
    int n = 0;
    int k = 0;
    std::vector<cx> d;
    std::vector<cx> s;
    DenseMatrix Uf, Vf;
    std::vector<LoggedRotation> qlog;
    std::uint64_t rotation_units = 0;
    double drop_residual = 0.0; // largest structural defect swallowed anywhere

    cx entry(int i, int j) const; // O(k)
    DenseMatrix dense() const;
    DenseMatrix qdense() const; // from qlog; identity if logging was off
};

struct CleanedColumn {
    RotationSequence1 P;
    cx alpha; // compressed subdiagonal value; v[0] is untouched by P
};

// Descending sweep eliminating v below its second entry, bottom up.
CleanedColumn clean_column(const std::vector<cx>& v);

// Conjugate by a full descending sweep and cut the first row/column.
// M is replaced by the trailing (m-1)-dimensional representation. R is the
// dropped-residue DAB of the trailing block, i.e.
//   P gv_to_dense(M_old) P^* = [ m11  r^* ; r  gv_to_dense(M_new) + dab(R) ].
// R.b depends only on P; R e_1 = 0 holds before the cut by construction.
struct ConjugateOutcome {
    Rank1QS R;
    double m11 = 0.0;
    double dropped = 0.0; // diagnostic: residue mass with no representable slot
};
ConjugateOutcome conjugate_and_truncate(GVMatrix& M, const RotationSequence1& P,
                                        OpCounter* ops = nullptr);

// Same contract with k = 1, for a matrix held in DAB form. The sweep is
// folded analytically: with u = (P a)[1:] and z = (P b)[1:],
//   trailing(P dab(S) P^*) = dab(S1) + dab(R),
// where S1 = (diag of the conjugated matrix, u, z) carries everything that
// the merge step folds into M, and R is the pure off-diagonal correction
// (d = 0) whose b chain matches the engine's residue from the same sweep
// bitwise, so the two close under dab_add. Keeping the diagonal in S1
// matters: it drains into M every step instead of accumulating here.
// S1.a[0] never enters t and is reported as the sweep leaves it.
struct DabConjugateOutcome {
    Rank1QS S1;
    Rank1QS R;
    double dropped = 0.0;
};
DabConjugateOutcome dab_conjugate_and_truncate(const Rank1QS& S, const RotationSequence1& P,
                                               OpCounter* ops = nullptr);

// Rebuild the carrier's rotations from the current U so the span property
// holds exactly again: fresh eliminating rotations, each rotated along its
// free phase fiber to stay as close as possible to the stored one. W and D
// are untouched. O(mk^2). scale_floor guards the small-mass test: entries
// are compared against the larger of it and the current |U|_F, so a layer
// that has decayed to roundoff of the original problem is left alone.
void reorthogonalize(GVMatrix& M, const DenseMatrix& U, OpCounter* ops = nullptr,
                     double scale_floor = 0.0);

// The full reduction: A = diag(D) + U V^* -> H = Q A Q^*.
HessenbergForm hessenberg_reduce(const std::vector<double>& D, const DenseMatrix& U,
                                 const DenseMatrix& V, const ReductionOptions& opt = {});

} // namespace qshess
