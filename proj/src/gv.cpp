#include "qshess/gv.hpp"

#include <algorithm>
#include <cmath>

namespace qshess {

GVMatrix::GVMatrix(int dim, int rank) : n(dim), k(rank), G(dim, rank) {
    D.assign(static_cast<size_t>(dim), 0.0);
    W.resize(dim > 0 ? static_cast<size_t>(dim - 1) : 0);
    for (int i = 0; i + 1 < dim; ++i)
        W[static_cast<size_t>(i)].assign(static_cast<size_t>(spike_len(dim, rank, i)), cx{});
}

std::vector<cx> GVMatrix::column_lower(int i, OpCounter* ops) const {
    std::vector<cx> v(static_cast<size_t>(n), cx{});
    const auto& w = W[static_cast<size_t>(i)];
    for (size_t t = 0; t < w.size(); ++t) v[static_cast<size_t>(i) + 1 + t] = w[t];
    G.apply_banded(v, i + 1, n - 2, false, ops);
    return v;
}

DenseMatrix GVMatrix::dense() const {
    DenseMatrix A(n, n);
    for (int i = 0; i < n; ++i) A(i, i) = D[static_cast<size_t>(i)];
    for (int i = 0; i + 1 < n; ++i) {
        const std::vector<cx> v = column_lower(i);
        for (int r = i + 1; r < n; ++r) {
            A(r, i) = v[static_cast<size_t>(r)];
            A(i, r) = std::conj(v[static_cast<size_t>(r)]);
        }
    }
    return A;
}

DenseMatrix Rank1QS::dense() const {
    DenseMatrix A(n, n);
    for (int i = 0; i < n; ++i) A(i, i) = d[static_cast<size_t>(i)];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const cx v = a[static_cast<size_t>(i)] * std::conj(b[static_cast<size_t>(j)]);
            A(i, j) += v;
            A(j, i) += std::conj(v);
        }
    return A;
}

DenseMatrix gv_to_dense(const GVMatrix& M) { return M.dense(); }
DenseMatrix dab_to_dense(const Rank1QS& S) { return S.dense(); }

GVMatrix gv_from_dense(const DenseMatrix& A, const RotationSequenceK& G, double tol) {
    const int n = A.rows;
    const int k = G.k;
    GVMatrix M(n, k);
    M.G = G;
    const double scale = A.norm_fro();
    double worst = 0.0;
    int worst_col = -1;
    for (int i = 0; i < n; ++i) {
        M.D[static_cast<size_t>(i)] = A(i, i).real();
        if (i == n - 1) break;
        std::vector<cx> v(static_cast<size_t>(n), cx{});
        for (int r = i + 1; r < n; ++r) v[static_cast<size_t>(r)] = A(r, i);
        G.apply_banded(v, i + 1, n - 2, true);
        const int len = GVMatrix::spike_len(n, k, i);
        auto& w = M.W[static_cast<size_t>(i)];
        for (int t = 0; t < len; ++t) w[static_cast<size_t>(t)] = v[static_cast<size_t>(i) + 1 + t];
        double tail = 0.0;
        for (int r = i + 1 + len; r < n; ++r) tail += std::norm(v[static_cast<size_t>(r)]);
        tail = std::sqrt(tail);
        if (tail > worst) {
            worst = tail;
            worst_col = i;
        }
    }
    if (scale > 0.0 && worst > tol * scale)
        throw StructureError("gv_from_dense: carrier does not span the lower part", worst_col,
                             worst / scale);
    return M;
}

std::pair<bool, double> is_lower_banded(const DenseMatrix& B, int bw, double tol) {
    const double scale = B.norm_max();
    double worst = 0.0;
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j + bw < i; ++j) worst = std::max(worst, std::abs(B(i, j)));
    const double rel = scale > 0.0 ? worst / scale : 0.0;
    return {rel <= tol, rel};
}

SpanCheck spans(const RotationSequenceK& G, const DenseMatrix& U, double tol) {
    DenseMatrix B = U;
    G.apply(B, true);
    double tail = 0.0;
    for (int i = G.k + 1; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j) tail += std::norm(B(i, j));
    const double scale = U.norm_fro();
    SpanCheck out;
    out.residual = scale > 0.0 ? std::sqrt(tail) / scale : 0.0;
    out.ok = out.residual <= tol;
    return out;
}

RotationSequenceK kseq_from_matrix(const DenseMatrix& U) {
    const int n = U.rows;
    const int k = U.cols;
    RotationSequenceK G(n, k);
    DenseMatrix B = U;
    for (int l = 0; l < k; ++l) {
        for (int r = n - 2; r >= l + 1; --r) {
            auto [rot, alpha] = make_rotation(B(r, l), B(r + 1, l), r);
            // Store the restoring rotation; its adjoint eliminates.
            G.at(l, r) = rot.adjointed();
            if (rot.is_identity()) continue;
            apply_rotation(rot, B, false);
            B(r, l) = alpha;
            B(r + 1, l) = 0.0;
        }
    }
    for (int l = k - 1; l >= 0; --l) {
        bool all_id = true;
        for (int r = l + 1; r <= n - 2 && all_id; ++r) all_id = G.at(l, r).is_identity();
        if (!all_id) break;
        ++G.dead_tail;
    }
    return G;
}

GV1View gv1_from_dab(const Rank1QS& S) {
    const int n = S.n;
    GV1View out;
    out.G = RotationSequenceK(n, 1);
    out.z.assign(n > 0 ? static_cast<size_t>(n - 1) : 0, cx{});
    out.d = S.d;
    // Eliminate a bottom-up, remembering the running compressed value at each
    // row: the sliced restoring chase applied to e_{i+1} rebuilds
    // a[i+1:] / val[i+1], so the spike value is conj(b_i) * val[i+1].
    std::vector<cx> work = S.a;
    std::vector<cx> val(static_cast<size_t>(n), cx{});
    if (n >= 1) val[static_cast<size_t>(n - 1)] = S.a[static_cast<size_t>(n - 1)];
    for (int r = n - 2; r >= 1; --r) {
        auto [rot, alpha] = make_rotation(work[static_cast<size_t>(r)],
                                          work[static_cast<size_t>(r) + 1], r);
        out.G.at(0, r) = rot.adjointed();
        work[static_cast<size_t>(r)] = alpha;
        work[static_cast<size_t>(r) + 1] = 0.0;
        val[static_cast<size_t>(r)] = alpha;
    }
    for (int i = 0; i + 1 < n; ++i)
        out.z[static_cast<size_t>(i)] =
            std::conj(S.b[static_cast<size_t>(i)]) * val[static_cast<size_t>(i) + 1];
    return out;
}

Embedding embed_gv1(const RotationSequenceK& F1, const std::vector<cx>& z,
                    const std::vector<double>& dS, const RotationSequenceK& G,
                    OpCounter* ops) {
    const int n = G.n;
    const int k = G.k;
    Embedding out;
    out.D = dS;
    out.W.resize(n > 0 ? static_cast<size_t>(n - 1) : 0);

    // y_i = unit spike column of the rank-1 carrier re-expressed in G's
    // coordinates, truncated to the k-window below row i. Backward recurrence:
    // y_{n-2} = e_{n-1};  y_i = J*_{i+1} (c e_{i+1} - conj(s) y_{i+1}) where
    // (c, s) is F1's rotation at row i+1 and J_{i+1} is the staircase of G on
    // the diagonal m = i+1.
    std::vector<cx> y(static_cast<size_t>(n), cx{});
    for (int i = n - 2; i >= 0; --i) {
        if (i == n - 2) {
            y[static_cast<size_t>(n - 1)] = 1.0;
        } else {
            const Rotation& f = F1.at(0, i + 1);
            // u = c e_{i+1} - conj(s) y_prev; y_prev lives on rows [i+2, i+1+k]
            for (int r = i + 2; r <= std::min(n - 1, i + 1 + k); ++r)
                y[static_cast<size_t>(r)] *= -std::conj(f.s);
            y[static_cast<size_t>(i) + 1] = f.c;
            for (int l = 0; l < k; ++l) {
                const int r = i + 1 + l;
                if (r > n - 2) break;
                apply_rotation(G.at(l, r), y, true, ops);
            }
            // Everything below the window is the out-of-span defect.
            if (i + 1 + k <= n - 1) {
                const double lost =
                    std::abs(z[static_cast<size_t>(i)]) * std::abs(y[static_cast<size_t>(i) + 1 + k]);
                out.drop_residual = std::max(out.drop_residual, lost);
                y[static_cast<size_t>(i) + 1 + k] = 0.0;
            }
        }
        const int len = GVMatrix::spike_len(n, k, i);
        auto& w = out.W[static_cast<size_t>(i)];
        w.assign(static_cast<size_t>(len), cx{});
        for (int t = 0; t < len; ++t)
            w[static_cast<size_t>(t)] = z[static_cast<size_t>(i)] * y[static_cast<size_t>(i) + 1 + t];
    }
    return out;
}

Embedding embed_rank1(const Rank1QS& S, const RotationSequenceK& G, OpCounter* ops) {
    // Span precondition on the a vector alone; the first entry never enters
    // (no rotation touches row 0), which is the "set the first entry to an
    // appropriate value" freedom.
    DenseMatrix acol(S.n, 1);
    for (int i = 0; i < S.n; ++i) acol(i, 0) = S.a[static_cast<size_t>(i)];
    const SpanCheck chk = spans(G, acol, 1e-8);
    if (!chk.ok)
        throw StructureError("embed_rank1: a vector outside carrier span", -1, chk.residual);
    const GV1View view = gv1_from_dab(S);
    return embed_gv1(view.G, view.z, view.d, G, ops);
}

GVMatrix add_embedded(GVMatrix M, const Embedding& E) {
    for (int i = 0; i < M.n; ++i) M.D[static_cast<size_t>(i)] += E.D[static_cast<size_t>(i)];
    for (int i = 0; i + 1 < M.n; ++i) {
        auto& w = M.W[static_cast<size_t>(i)];
        const auto& e = E.W[static_cast<size_t>(i)];
        for (size_t t = 0; t < w.size(); ++t) w[t] += e[t];
    }
    return M;
}

Rank1QS dab_add(const Rank1QS& R1, const Rank1QS& R2) {
    Rank1QS out(R1.n);
    for (int i = 0; i < R1.n; ++i)
        out.d[static_cast<size_t>(i)] = R1.d[static_cast<size_t>(i)] + R2.d[static_cast<size_t>(i)];

    const auto weight = [](const Rank1QS& R) {
        double na = 0.0, nb = 0.0;
        for (const cx& v : R.a) na += std::norm(v);
        for (const cx& v : R.b) nb += std::norm(v);
        return std::sqrt(na) * std::sqrt(nb);
    };
    const bool e1 = weight(R1) == 0.0;
    const bool e2 = weight(R2) == 0.0;
    if (e1 && e2) return out;
    if (e1) {
        out.a = R2.a;
        out.b = R2.b;
        return out;
    }
    if (e2) {
        out.a = R1.a;
        out.b = R1.b;
        return out;
    }
    // b2 = gamma * b1 required; pick gamma at b1's largest entry and verify.
    size_t piv = 0;
    double best = 0.0;
    for (size_t i = 0; i < R1.b.size(); ++i)
        if (std::abs(R1.b[i]) > best) {
            best = std::abs(R1.b[i]);
            piv = i;
        }
    const cx gamma = R2.b[piv] / R1.b[piv];
    double mism = 0.0, scale = 0.0;
    for (size_t i = 0; i < R1.b.size(); ++i) {
        mism += std::norm(R2.b[i] - gamma * R1.b[i]);
        scale += std::norm(R2.b[i]);
    }
    if (scale > 0.0 && std::sqrt(mism) > 1e-8 * std::sqrt(scale))
        throw StructureError("dab_add: b vectors are not parallel", -1,
                             std::sqrt(mism / scale));
    out.b = R1.b;
    out.a = R1.a;
    const cx gbar = std::conj(gamma);
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += gbar * R2.a[i];
    return out;
}

} // namespace qshess
