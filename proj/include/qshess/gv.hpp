#pragma once

#include <utility>
#include <vector>

#include "qshess/sequences.hpp"

namespace qshess {

// Hermitian matrix carried as diagonal + Givens-vector lower part. Column i
// (0-based, i < n-1) stores spike values W[i] on rows i+1..i+len; the dense
// strictly-lower column is the banded chase of G applied to that spike:
//
//   A e_i (below diag) = apply(slice(G, i+1, n-2), spike_i),   A(i,i) = D[i].
//
// The upper triangle is the conjugate mirror.
struct GVMatrix {
    int n = 0;
    int k = 0;
    RotationSequenceK G;
    std::vector<std::vector<cx>> W;
    std::vector<double> D;

    GVMatrix() = default;
    GVMatrix(int dim, int rank);

    static int spike_len(int dim, int rank, int i) {
        const int room = dim - 1 - i;
        return room < rank ? room : rank;
    }

    // Full n-vector: zeros through row i, spike chase below.
    std::vector<cx> column_lower(int i, OpCounter* ops = nullptr) const;
    DenseMatrix dense() const;
};

// Diagonal plus Hermitian rank-1 completion: dense = diag(d) + t(a b^*),
// t(X) = strict lower of X plus its adjoint. By convention a[0] and b[n-1]
// are kept at zero (neither enters any entry).
struct Rank1QS {
    int n = 0;
    std::vector<double> d;
    std::vector<cx> a, b;

    Rank1QS() = default;
    explicit Rank1QS(int dim)
        : n(dim), d(static_cast<size_t>(dim), 0.0), a(static_cast<size_t>(dim)),
          b(static_cast<size_t>(dim)) {}

    DenseMatrix dense() const;
};

DenseMatrix gv_to_dense(const GVMatrix& M);
DenseMatrix dab_to_dense(const Rank1QS& S);

// Recover (W, D) from a dense Hermitian A given the carrier G. Throws
// StructureError when G does not span A's lower part to the tolerance
// (relative to ||A||_F).
GVMatrix gv_from_dense(const DenseMatrix& A, const RotationSequenceK& G, double tol = 1e-10);

// True when every entry of B below the band (row > col + bw) is at most
// tol * max|B| in magnitude; also reports the largest relative offender.
std::pair<bool, double> is_lower_banded(const DenseMatrix& B, int bw, double tol);

struct SpanCheck {
    bool ok = false;
    double residual = 0.0; // ||(G^* U)[k+1:, :]||_F / ||U||_F
};
SpanCheck spans(const RotationSequenceK& G, const DenseMatrix& U, double tol);

// k-sequence whose adjoint compresses U into its top rows (columns eliminated
// bottom-up, one layer per column).
RotationSequenceK kseq_from_matrix(const DenseMatrix& U);

// Rank-1 Givens-vector view of a DAB matrix: carrier from the a vector, one
// spike value per column, diagonal carried through.
struct GV1View {
    RotationSequenceK G; // k = 1
    std::vector<cx> z;   // z[i], i = 0..n-2
    std::vector<double> d;
};
GV1View gv1_from_dab(const Rank1QS& S);

// Spike columns and diagonal expressing a rank-1 GV matrix in the span of a
// k-carrier G: the O(nk) backward recurrence. drop_residual is the largest
// column mass (relative to the column weight) that fell outside the k-window;
// it is roundoff-sized exactly when the span precondition holds.
struct Embedding {
    std::vector<std::vector<cx>> W;
    std::vector<double> D;
    double drop_residual = 0.0;
};
Embedding embed_gv1(const RotationSequenceK& F1, const std::vector<cx>& z,
                    const std::vector<double>& dS, const RotationSequenceK& G,
                    OpCounter* ops = nullptr);

// DAB -> embedding against carrier G. Checks the span precondition on the a
// vector (first entry exempt; no rotation reaches row 0) at 1e-8 relative and
// throws StructureError on failure.
Embedding embed_rank1(const Rank1QS& S, const RotationSequenceK& G,
                      OpCounter* ops = nullptr);

GVMatrix add_embedded(GVMatrix M, const Embedding& E);

// Sum of two DAB matrices whose b vectors are parallel (the form is closed
// under addition exactly then). Throws StructureError if they are not.
Rank1QS dab_add(const Rank1QS& R1, const Rank1QS& R2);

} // namespace qshess
