#include "qshess/rotation.hpp"

#include <cmath>
#include <stdexcept>

namespace qshess {

DenseMatrix Rotation::dense(int n) const {
    if (row < 0 || row + 1 >= n) throw std::invalid_argument("Rotation::dense: row out of range");
    DenseMatrix G = DenseMatrix::identity(n);
    G(row, row) = c;
    G(row, row + 1) = s;
    G(row + 1, row) = -std::conj(s);
    G(row + 1, row + 1) = std::conj(c);
    return G;
}

void Rotation::renormalize() {
    const double t = std::sqrt(std::norm(c) + std::norm(s));
    if (t > 0.0 && t != 1.0) {
        c /= t;
        s /= t;
    }
}

Rotation compose(const Rotation& g, const Rotation& g2) {
    // [c s; -s~ c~][c2 s2; -s2~ c2~]: the product of two cores is a core.
    Rotation r;
    r.row = g.row;
    r.c = g.c * g2.c - g.s * std::conj(g2.s);
    r.s = g.c * g2.s + g.s * std::conj(g2.c);
    r.renormalize();
    return r;
}

std::pair<Rotation, cx> make_rotation(cx v1, cx v2, int row) {
    Rotation g;
    g.row = row;
    if (v2 == cx{}) {
        // Includes (0,0): identity, alpha = v1.
        return {g, v1};
    }
    const double a1 = std::abs(v1);
    const double a2 = std::abs(v2);
    if (a1 == 0.0) {
        g.c = 0.0;
        g.s = std::conj(v2) / a2;
        return {g, cx{a2}};
    }
    const double r = std::hypot(a1, a2);
    const cx phase = v1 / a1;
    g.c = a1 / r;
    g.s = phase * std::conj(v2) / r;
    return {g, phase * r};
}

void apply_rotation(const Rotation& g, DenseMatrix& M, bool adjoint, OpCounter* ops) {
    const int r = g.row;
    for (int j = 0; j < M.cols; ++j) {
        if (adjoint)
            g.apply_pair_adjoint(M(r, j), M(r + 1, j));
        else
            g.apply_pair(M(r, j), M(r + 1, j));
    }
    if (ops) ops->add(static_cast<std::uint64_t>(M.cols));
}

void apply_rotation_right(const Rotation& g, DenseMatrix& M, bool adjoint, OpCounter* ops) {
    const int r = g.row;
    // M G: col_r' = c col_r - s~ col_{r+1}, col_{r+1}' = s col_r + c~ col_{r+1}
    // M G^*: col_r' = c~ col_r + s~ col_{r+1}, col_{r+1}' = -s col_r + c col_{r+1}
    for (int i = 0; i < M.rows; ++i) {
        const cx x0 = M(i, r);
        const cx x1 = M(i, r + 1);
        if (adjoint) {
            M(i, r) = std::conj(g.c) * x0 + std::conj(g.s) * x1;
            M(i, r + 1) = -g.s * x0 + g.c * x1;
        } else {
            M(i, r) = g.c * x0 - std::conj(g.s) * x1;
            M(i, r + 1) = g.s * x0 + std::conj(g.c) * x1;
        }
    }
    if (ops) ops->add(static_cast<std::uint64_t>(M.rows));
}

void apply_rotation(const Rotation& g, std::vector<cx>& v, bool adjoint, OpCounter* ops) {
    if (adjoint)
        g.apply_pair_adjoint(v[static_cast<size_t>(g.row)], v[static_cast<size_t>(g.row) + 1]);
    else
        g.apply_pair(v[static_cast<size_t>(g.row)], v[static_cast<size_t>(g.row) + 1]);
    if (ops) ops->add(1);
}

DenseMatrix product3(const Rotation& a, const Rotation& b, const Rotation& c) {
    DenseMatrix X = a.dense(3) * b.dense(3) * c.dense(3);
    return X;
}

Refactor3 refactor_vee(const DenseMatrix& X) {
    // Peel rotations off the first column, then read the trailing core.
    Refactor3 out;
    // V1 acts on rows (1,2) and must move all of column 0 into rows 0..1:
    // V1^* X has a zero at (2,0), so V1^* is the annihilating rotation.
    auto [r1, a1] = make_rotation(X(1, 0), X(2, 0), 1);
    (void)a1;
    out.g1 = r1.adjointed();
    out.g1.row = 1;
    DenseMatrix Y = X;
    apply_rotation(r1, Y, false); // r1 = V1^*
    // V2 on rows (0,1) reproduces column 0 of Y: Y(:,0) = (c2, -s2~, 0).
    out.g2.row = 0;
    out.g2.c = Y(0, 0);
    out.g2.s = -std::conj(Y(1, 0));
    out.g2.renormalize();
    DenseMatrix Z = Y;
    apply_rotation(out.g2, Z, true);
    // Remaining factor is a core on rows (1,2): Z = V3 up to roundoff.
    out.g3.row = 1;
    out.g3.c = Z(1, 1);
    out.g3.s = Z(1, 2);
    out.g3.renormalize();
    return out;
}

namespace {

// Conjugation by the 3x3 anti-diagonal flip J maps a core on local rows (0,1)
// with parameters (c,s) to a core on rows (1,2) with (conj(c), -conj(s)), and
// vice versa.
Rotation flip3(const Rotation& g) {
    Rotation h;
    h.row = 1 - g.row;
    h.c = std::conj(g.c);
    h.s = -std::conj(g.s);
    return h;
}

DenseMatrix flip3(const DenseMatrix& X) {
    DenseMatrix Y(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) Y(i, j) = X(2 - i, 2 - j);
    return Y;
}

} // namespace

Refactor3 refactor_lambda(const DenseMatrix& X) {
    const Refactor3 v = refactor_vee(flip3(X));
    return {flip3(v.g1), flip3(v.g2), flip3(v.g3)};
}

TurnoverResult turnover(const Rotation& ga, const Rotation& gb, const Rotation& f) {
    if (ga.row != f.row || gb.row != ga.row + 1)
        throw std::invalid_argument("turnover: rows must form the pattern (r-1, r, r-1)");
    const int base = ga.row; // local row 0 of the 3x3 window
    Rotation la = ga, lb = gb, lf = f;
    la.row = 0;
    lb.row = 1;
    lf.row = 0;
    const DenseMatrix X = product3(la, lb, lf);
    const Refactor3 v = refactor_vee(X);
    TurnoverResult out;
    out.f_out = v.g1;
    out.f_out.row = base + 1;
    out.ga_out = v.g2;
    out.ga_out.row = base;
    out.gb_out = v.g3;
    out.gb_out.row = base + 1;
    return out;
}

} // namespace qshess
