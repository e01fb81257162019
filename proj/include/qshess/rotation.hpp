#pragma once

#include <utility>
#include <vector>

#include "qshess/dense.hpp"
#include "qshess/types.hpp"

namespace qshess {

// Unitary core
//
//   G = [  c   s ]
//       [ -s~  c~ ]        (~ = complex conjugate, |c|^2 + |s|^2 = 1)
//
// acting on the row pair (row, row+1), 0-based. make_rotation always returns a
// real c >= 0; cores that come out of turnovers may carry a complex c (the
// real-cosine class is not closed under refactoring).
struct Rotation {
    cx c{1.0, 0.0};
    cx s{0.0, 0.0};
    int row = 0;

    bool is_identity() const { return s == cx{} && c == cx{1.0, 0.0}; }

    Rotation adjointed() const { return {std::conj(c), -s, row}; }

    // 2x2 action on a pair of scalars.
    void apply_pair(cx& x0, cx& x1) const {
        const cx y0 = c * x0 + s * x1;
        const cx y1 = -std::conj(s) * x0 + std::conj(c) * x1;
        x0 = y0;
        x1 = y1;
    }
    void apply_pair_adjoint(cx& x0, cx& x1) const {
        const cx y0 = std::conj(c) * x0 - s * x1;
        const cx y1 = std::conj(s) * x0 + c * x1;
        x0 = y0;
        x1 = y1;
    }

    DenseMatrix dense(int n) const;

    // Renormalize (c, s) onto the unit sphere; cheap insurance inside long
    // turnover chains.
    void renormalize();
};

// G * G2 for two cores on the same row pair; the result is a general core on
// that row.
Rotation compose(const Rotation& g, const Rotation& g2);

// Rotation annihilating the second component: G [v1 v2]^T = [alpha 0]^T with
// alpha = unimodular(v1) * hypot(|v1|,|v2|) (alpha = |v2| when v1 = 0, and the
// identity with alpha = v1 when v2 = 0). Returns (G, alpha); G.c is real >= 0.
std::pair<Rotation, cx> make_rotation(cx v1, cx v2, int row = 0);

// Left-multiplication by G or G^* on the full row pair of M (counts work).
void apply_rotation(const Rotation& g, DenseMatrix& M, bool adjoint = false,
                    OpCounter* ops = nullptr);
// Right-multiplication M <- M G or M G^* (column pair).
void apply_rotation_right(const Rotation& g, DenseMatrix& M, bool adjoint = false,
                          OpCounter* ops = nullptr);
void apply_rotation(const Rotation& g, std::vector<cx>& v, bool adjoint = false,
                    OpCounter* ops = nullptr);

// Turnover: re-factor a product of three cores across the shape boundary.
// Input rows must satisfy ga.row == f.row == r-1 and gb.row == r for some r
// (the "lambda" pattern Ga(r-1) Gb(r) F(r-1)); the output is the "vee" pattern
// F'(r) Ga'(r-1) Gb'(r) with
//
//     Ga * Gb * F  =  F' * Ga' * Gb'      (exactly, as 3x3 unitaries)
//
// Output cores are generally complex-cosine. Throws std::invalid_argument on a
// row mismatch.
struct TurnoverResult {
    Rotation f_out;
    Rotation ga_out;
    Rotation gb_out;
};
TurnoverResult turnover(const Rotation& ga, const Rotation& gb, const Rotation& f);

// 3x3 refactor primitives used by turnover and the pass-through engines.
// Local row pairs: (0,1) and (1,2) of a 3x3 unitary X.
//   refactor_vee:    X = V1(1,2) V2(0,1) V3(1,2)
//   refactor_lambda: X = L1(0,1) L2(1,2) L3(0,1)
struct Refactor3 {
    Rotation g1, g2, g3;
};
Refactor3 refactor_vee(const DenseMatrix& X);
Refactor3 refactor_lambda(const DenseMatrix& X);

// Dense 3x3 product of up to three cores given by local rows (0 or 1).
DenseMatrix product3(const Rotation& a, const Rotation& b, const Rotation& c);

} // namespace qshess
