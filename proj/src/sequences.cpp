#include "qshess/sequences.hpp"

#include <algorithm>
#include <stdexcept>

namespace qshess {

void RotationSequence1::apply(DenseMatrix& M, bool adjoint, OpCounter* ops) const {
    if (!adjoint) {
        for (int r = n - 2; r >= 1; --r) apply_rotation(at(r), M, false, ops);
    } else {
        for (int r = 1; r <= n - 2; ++r) apply_rotation(at(r), M, true, ops);
    }
}

void RotationSequence1::apply(std::vector<cx>& v, bool adjoint, OpCounter* ops) const {
    if (!adjoint) {
        for (int r = n - 2; r >= 1; --r) apply_rotation(at(r), v, false, ops);
    } else {
        for (int r = 1; r <= n - 2; ++r) apply_rotation(at(r), v, true, ops);
    }
}

void RotationSequence1::apply_right_adjoint(DenseMatrix& M, OpCounter* ops) const {
    // M * (G_1 ... G_{n-2})^* = M G_{n-2}^* ... G_1^*: bottom pair first.
    for (int r = n - 2; r >= 1; --r) apply_rotation_right(at(r), M, true, ops);
}

DenseMatrix RotationSequence1::dense() const {
    DenseMatrix M = DenseMatrix::identity(n);
    apply(M, false, nullptr);
    return M;
}

void RotationSequenceK::apply(DenseMatrix& M, bool adjoint, OpCounter* ops) const {
    if (!adjoint) {
        for (int l = k - 1; l >= 0; --l)
            for (int r = l + 1; r <= n - 2; ++r) apply_rotation(at(l, r), M, false, ops);
    } else {
        for (int l = 0; l <= k - 1; ++l)
            for (int r = n - 2; r >= l + 1; --r) apply_rotation(at(l, r), M, true, ops);
    }
}

void RotationSequenceK::apply(std::vector<cx>& v, bool adjoint, OpCounter* ops) const {
    apply_banded(v, 1, n - 2, adjoint, ops);
}

void RotationSequenceK::apply_banded(std::vector<cx>& v, int md_lo, int md_hi, bool adjoint,
                                     OpCounter* ops) const {
    md_lo = std::max(md_lo, 1);
    md_hi = std::min(md_hi, n - 2);
    if (md_hi < md_lo) return;
    if (!adjoint) {
        for (int l = k - 1; l >= 0; --l) {
            const int lo = std::max(l + 1, md_lo + l);
            const int hi = std::min(n - 2, md_hi + l);
            for (int r = lo; r <= hi; ++r) apply_rotation(at(l, r), v, false, ops);
        }
    } else {
        for (int l = 0; l <= k - 1; ++l) {
            const int lo = std::max(l + 1, md_lo + l);
            const int hi = std::min(n - 2, md_hi + l);
            for (int r = hi; r >= lo; --r) apply_rotation(at(l, r), v, true, ops);
        }
    }
}

DenseMatrix RotationSequenceK::dense() const {
    DenseMatrix M = DenseMatrix::identity(n);
    apply(M, false, nullptr);
    return M;
}

RotationSequenceK RotationSequenceK::truncated_head() const {
    RotationSequenceK T(n - 1, k);
    T.dead_tail = dead_tail;
    for (int l = 0; l < k; ++l) {
        for (int r = l + 2; r <= n - 2; ++r) {
            Rotation g = at(l, r);
            g.row = r - 1;
            T.at(l, r - 1) = g;
        }
    }
    return T;
}

RotationSequenceK slice(const RotationSequenceK& G, int i1, int i2) {
    RotationSequenceK S(G.n, G.k);
    S.dead_tail = G.dead_tail;
    for (int l = 0; l < G.k; ++l)
        for (int r = l + 1; r <= G.n - 2; ++r) {
            const int m = r - l;
            if (m >= i1 && m <= i2) S.at(l, r) = G.at(l, r);
        }
    return S;
}

// The two pass-through directions are chains of turnovers. turnover(ga, gb, f)
// rewrites ga(r-1) gb(r) f(r-1) as f'(r) ga'(r-1) gb'(r); read left to right
// these are matrix products, so "leftmost" factors are applied last.

std::optional<Rotation> pass_through(RotationSequenceK& G, const Rotation& f,
                                     OpCounter* ops) {
    const int n = G.n;
    const int k = G.k;
    if (f.row < 1 || f.row > n - 2) throw std::invalid_argument("pass_through: row out of range");
    if (f.is_identity()) {
        if (f.row - k >= 1) {
            Rotation out = f;
            out.row = f.row - k;
            return out;
        }
        return std::nullopt;
    }

    Rotation mover = f;
    if (f.row >= k + 1) {
        // Generic path: the mover crosses each layer once, climbing one row per
        // layer. In layer l it hits the adjacent pair (G(l,r), G(l,r-1)); the
        // vee product G(l,r) G(l,r-1) mover(r) refactors to
        // mover'(r-1) G'(l,r) G'(l,r-1), and mover' exits to the next layer.
        for (int l = k - 1; l >= 0; --l) {
            const int r = mover.row;
            Rotation la = G.at(l, r), lb = G.at(l, r - 1), lf = mover;
            la.row = 1;
            lb.row = 0;
            lf.row = 1;
            const Refactor3 fac = refactor_lambda(product3(la, lb, lf));
            Rotation out;
            out = fac.g1;
            out.row = r - 1;
            Rotation a_new = fac.g2;
            a_new.row = r;
            Rotation b_new = fac.g3;
            b_new.row = r - 1;
            G.at(l, r) = a_new;
            G.at(l, r - 1) = b_new;
            mover = out;
            if (ops) ops->add(3);
        }
        return mover;
    }
    if (f.row == k) {
        // The mover lands exactly on the bottom slot of the first-applied
        // layer: absorb it there.
        G.at(k - 1, k) = compose(G.at(k - 1, k), f);
        if (ops) ops->add(1);
        return std::nullopt;
    }
    // 1 <= f.row <= k-1: no room to exit. The mover zig-zags down the bottom
    // ends of layers (f.row-1, f.row), one turnover per row, and is absorbed
    // into the last row of layer f.row-1.
    const int la = f.row - 1;
    const int lb = f.row;
    int r = f.row;
    while (r + 1 <= n - 2) {
        const TurnoverResult t = turnover(G.at(la, r), G.at(lb, r + 1), mover);
        G.at(la, r) = t.ga_out;
        G.at(lb, r + 1) = t.gb_out;
        mover = t.f_out;
        r += 1;
        if (ops) ops->add(3);
    }
    G.at(la, n - 2) = compose(G.at(la, n - 2), mover);
    if (ops) ops->add(1);
    return std::nullopt;
}

std::optional<Rotation> pass_through_down(RotationSequenceK& G, const Rotation& f,
                                          OpCounter* ops) {
    const int n = G.n;
    // Identity layers at the tail commute with the exit core, so the mover
    // only has to cross the live ones.
    const int k = G.k - G.dead_tail;
    if (f.row < 1 || f.row > n - 2)
        throw std::invalid_argument("pass_through_down: row out of range");
    if (f.is_identity()) {
        if (f.row + k <= n - 2) {
            Rotation out = f;
            out.row = f.row + k;
            return out;
        }
        return std::nullopt;
    }

    Rotation mover = f;
    // The mover crosses layers 0..k-1, descending one row per layer; the
    // lambda product mover(r) G(l,r+1) G(l,r) refactors to
    // G'(l,r+1) G'(l,r) mover'(r+1). At the bottom edge it is absorbed.
    for (int l = 0; l <= k - 1; ++l) {
        const int r = mover.row;
        if (r == n - 2) {
            G.at(l, n - 2) = compose(mover, G.at(l, n - 2));
            if (ops) ops->add(1);
            return std::nullopt;
        }
        const TurnoverResult t = turnover(mover, G.at(l, r + 1), G.at(l, r));
        G.at(l, r + 1) = t.f_out;
        G.at(l, r) = t.ga_out;
        mover = t.gb_out;
        if (ops) ops->add(3);
    }
    return mover;
}

} // namespace qshess
