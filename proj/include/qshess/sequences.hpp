#pragma once

#include <optional>
#include <vector>

#include "qshess/rotation.hpp"

namespace qshess {

// Descending single sweep: one rotation per row r = 1..n-2 (0-based, acting on
// rows (r, r+1)). As a matrix the sequence is
//
//   dense(S) = G_1 G_2 ... G_{n-2}
//
// i.e. applied to a vector the bottom rotation G_{n-2} acts first and G_1
// last. This is the shape clean_column produces: eliminate from the bottom up.
struct RotationSequence1 {
    int n = 0;
    std::vector<Rotation> rots; // rots[r-1] acts on rows (r, r+1)

    RotationSequence1() = default;
    explicit RotationSequence1(int dim) : n(dim) {
        // one slot per row 1..n-2; dim < 3 means no slots
        rots.resize(dim >= 3 ? static_cast<size_t>(dim - 2) : 0);
        for (int r = 1; r <= dim - 2; ++r) rots[static_cast<size_t>(r - 1)].row = r;
    }

    Rotation& at(int row) { return rots[static_cast<size_t>(row - 1)]; }
    const Rotation& at(int row) const { return rots[static_cast<size_t>(row - 1)]; }

    void apply(DenseMatrix& M, bool adjoint = false, OpCounter* ops = nullptr) const;
    void apply(std::vector<cx>& v, bool adjoint = false, OpCounter* ops = nullptr) const;
    // M <- M * dense(S)^*  (used when conjugating: Q M Q^*).
    void apply_right_adjoint(DenseMatrix& M, OpCounter* ops = nullptr) const;
    DenseMatrix dense() const;
};

// k-layer rotation sequence (the carrier of a Givens-vector representation).
// Layer l = 0..k-1 holds one rotation per row r = l+1..n-2. As a matrix,
//
//   dense(G) = Lt_0 Lt_1 ... Lt_{k-1},   Lt_l = G(n-2,l) G(n-3,l) ... G(l+1,l)
//
// so applied to a vector the layers act in order l = k-1 first, l = 0 last,
// and within a layer the rows act in ascending order. The diagonal coordinate
// of a slot is m = r - l (0-based); slices select closed m-bands, and a sweep
// rotation passing through the layers only ever rewrites two adjacent
// m-diagonals.
struct RotationSequenceK {
    int n = 0;
    int k = 0;
    std::vector<std::vector<Rotation>> layers; // layers[l][r - (l+1)]
    // Trailing layers l >= k - dead_tail hold only identity rotations (the
    // generator they were built from had that many exactly-zero trailing
    // columns). An identity layer commutes with anything below it, so movers
    // exit ahead of it; a turnover would instead smear the mover into the
    // layer and the spikes stored against the sequence would pick up
    // components no generator column backs.
    int dead_tail = 0;

    RotationSequenceK() = default;
    RotationSequenceK(int dim, int rank) : n(dim), k(rank), layers(static_cast<size_t>(rank)) {
        for (int l = 0; l < rank; ++l) {
            auto& lay = layers[static_cast<size_t>(l)];
            const int lo = l + 1;
            if (n - 2 >= lo) lay.resize(static_cast<size_t>(n - 2 - lo + 1));
            for (int r = lo; r <= n - 2; ++r) lay[static_cast<size_t>(r - lo)].row = r;
        }
    }

    bool has(int l, int r) const { return l >= 0 && l < k && r >= l + 1 && r <= n - 2; }
    Rotation& at(int l, int r) { return layers[static_cast<size_t>(l)][static_cast<size_t>(r - l - 1)]; }
    const Rotation& at(int l, int r) const {
        return layers[static_cast<size_t>(l)][static_cast<size_t>(r - l - 1)];
    }

    // Restrict application to slots with md_lo <= r-l <= md_hi (pass the full
    // range to apply everything).
    void apply(DenseMatrix& M, bool adjoint = false, OpCounter* ops = nullptr) const;
    void apply(std::vector<cx>& v, bool adjoint = false, OpCounter* ops = nullptr) const;
    void apply_banded(std::vector<cx>& v, int md_lo, int md_hi, bool adjoint = false,
                      OpCounter* ops = nullptr) const;
    DenseMatrix dense() const;

    // Drop the lowest diagonal (m = 1 slots) and shift every remaining slot up
    // one row: the carrier of the trailing submatrix after one reduction step.
    RotationSequenceK truncated_head() const;
};

// Closed diagonal band: keeps slots with i1 <= r-l <= i2 (everything else
// becomes the identity). Band bounds outside [1, n-2] are clamped.
RotationSequenceK slice(const RotationSequenceK& G, int i1, int i2);

// Move a sweep rotation f (rows (f.row, f.row+1)) from the right of dense(G)
// to the left:   dense(G) * f = f_out * dense(G')   with G' replacing G in
// place. f_out sits k rows higher; when f.row <= k the mover is absorbed into
// the sequence and there is no outgoing rotation (nullopt).
std::optional<Rotation> pass_through(RotationSequenceK& G, const Rotation& f,
                                     OpCounter* ops = nullptr);

// Mirror direction, used by the conjugation sweep: f * dense(G) =
// dense(G') * f_out with f_out k rows lower, absorbed at the bottom edge.
std::optional<Rotation> pass_through_down(RotationSequenceK& G, const Rotation& f,
                                          OpCounter* ops = nullptr);

} // namespace qshess
