#include "qshess/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#ifdef QSHESS_TRACE
#include <cstdio>
namespace qshess_trace {
inline double alpha_m = 0.0;  // largest engine residue deposit this step
inline double alpha_s = 0.0;  // largest dab-lane residue deposit this step
inline double win_m = 0.0;    // largest engine window value this step
inline double ech_min = 1.0;  // smallest engine pivot used this step
inline int slot_min = 999;    // shallowest solve slot used this step
inline int slot_full = 0;     // window length L at that solve
} // namespace qshess_trace
#endif

namespace qshess {

namespace {

// Residue of one conjugation sweep, maintained in DAB form. Each sweep step
// that leaves a non-representable value alpha at slot (r+1, r) calls step();
// the running t(a b^*) is conjugated by the step's core and the fresh alpha
// deposited. The b chain is a function of the sweep alone (seeded from the
// first live core, updated by (c, s) only), which is what lets the two
// residue lanes of one reduction step share b exactly and their sum stay in
// DAB form.
struct DabAccum {
    int m = 0;
    std::vector<cx> a, b;
    bool started = false;
    double dropped = 0.0;

    static constexpr double kTiny = 0x1p-200;
    static constexpr double kScale = 0x1p+200;

    explicit DabAccum(int dim)
        : m(dim), a(static_cast<size_t>(dim)), b(static_cast<size_t>(dim)) {}

    // f is the sweep core at rows (r, r+1), alpha the residue to deposit at
    // (r+1, r) in post-step coordinates. Must be called for every live core
    // of the sweep, in sweep order (descending r), alpha = 0 included.
    void step(const Rotation& f, cx alpha) {
        const size_t r = static_cast<size_t>(f.row);
        if (!started) {
            b[r] = f.s;
            started = true;
        } else {
            const cx t = b[r + 1];
            b[r] = f.s * t;
            b[r + 1] = std::conj(f.c) * t;
        }
        if (b[r] == cx{}) {
            a[r + 1] = cx{};
            if (alpha != cx{}) dropped = std::max(dropped, std::abs(alpha));
            return;
        }
        while (std::abs(b[r]) < kTiny) {
            for (auto& x : b) x *= kScale;
            for (auto& x : a) x *= 1.0 / kScale;
        }
        a[r + 1] = alpha / std::conj(b[r]);
    }

    // Drop row/column 0 (never touched: a[1] and b[0] stay zero) and shift.
    Rank1QS truncated() const {
        Rank1QS R(m - 1);
        for (int i = 0; i + 1 < m; ++i) {
            R.a[static_cast<size_t>(i)] = a[static_cast<size_t>(i) + 1];
            R.b[static_cast<size_t>(i)] = b[static_cast<size_t>(i) + 1];
        }
        return R;
    }
};

// Apply the md = r+1 staircase of G (slots (l, r+1+l)) to a window vector w
// whose entry 0 sits at global row r. Forward order is descending l (largest
// row acts first); the adjoint reverses that.
void staircase_apply(const RotationSequenceK& G, int r, std::vector<cx>& w, bool adjoint,
                     OpCounter* ops) {
    const int top = static_cast<int>(w.size()) - 2;
    if (!adjoint) {
        for (int l = G.k - 1; l >= 0; --l) {
            const int rr = r + 1 + l;
            const int li = 1 + l;
            if (rr > G.n - 2 || li > top) continue;
            G.at(l, rr).apply_pair(w[static_cast<size_t>(li)], w[static_cast<size_t>(li) + 1]);
            if (ops) ops->add(1);
        }
    } else {
        for (int l = 0; l < G.k; ++l) {
            const int rr = r + 1 + l;
            const int li = 1 + l;
            if (rr > G.n - 2 || li > top) continue;
            G.at(l, rr).apply_pair_adjoint(w[static_cast<size_t>(li)],
                                           w[static_cast<size_t>(li) + 1]);
            if (ops) ops->add(1);
        }
    }
}

} // namespace

CleanedColumn clean_column(const std::vector<cx>& v) {
    const int m = static_cast<int>(v.size());
    CleanedColumn out{RotationSequence1(m), cx{}};
    std::vector<cx> work = v;
    for (int r = m - 2; r >= 1; --r) {
        auto [g, alpha] = make_rotation(work[static_cast<size_t>(r)],
                                        work[static_cast<size_t>(r) + 1], r);
        work[static_cast<size_t>(r)] = alpha;
        work[static_cast<size_t>(r) + 1] = cx{};
        out.P.at(r) = g;
    }
    out.alpha = m >= 2 ? work[1] : cx{};
    return out;
}

ConjugateOutcome conjugate_and_truncate(GVMatrix& M, const RotationSequence1& P, OpCounter* ops) {
    const int m = M.n;
    const int k = M.k;
    if (P.n != m) throw std::invalid_argument("conjugate_and_truncate: dimension mismatch");
    if (m < 2) throw std::invalid_argument("conjugate_and_truncate: dimension < 2");

    DabAccum acc(m);
    double dropped = 0.0;

    for (int r = m - 2; r >= 1; --r) {
        const Rotation f = P.at(r);
        if (f.is_identity()) continue;

        // Window rows r..r+L-1 in the frame with the md >= r+2 chase factored
        // out. Column r of the current matrix spreads its spike through the
        // old md = r+1 staircase; column r+1 is its raw spike.
        const int L = std::min(k + 2, m - r);
        std::vector<cx> colA(static_cast<size_t>(L), cx{});
        colA[0] = cx{M.D[static_cast<size_t>(r)], 0.0};
        {
            const auto& wr = M.W[static_cast<size_t>(r)];
            for (size_t t = 0; t < wr.size(); ++t) colA[t + 1] = wr[t];
        }
        staircase_apply(M.G, r, colA, false, ops);

        std::vector<cx> colB(static_cast<size_t>(L), cx{});
        colB[0] = std::conj(colA[1]); // Hermitian mirror of the subdiagonal entry
        colB[1] = cx{M.D[static_cast<size_t>(r) + 1], 0.0};
        if (r + 1 <= m - 2) {
            const auto& wr1 = M.W[static_cast<size_t>(r) + 1];
            for (size_t t = 0; t < wr1.size(); ++t) colB[t + 2] = wr1[t];
        }

        // Move the sweep core through the carrier; only the md in {r, r+1}
        // slots change, so the window frame is untouched. The emerging core
        // acts below every remaining spike and is dropped.
        pass_through_down(M.G, f, ops);

        // Conjugate the two-column window: rows, then columns.
        f.apply_pair(colA[0], colA[1]);
        f.apply_pair(colB[0], colB[1]);
        if (ops) ops->add(2 + 2 * static_cast<std::uint64_t>(L));
        std::vector<cx> C1(static_cast<size_t>(L)), C2(static_cast<size_t>(L));
        const cx cc = std::conj(f.c), cs = std::conj(f.s);
        for (int i = 0; i < L; ++i) {
            C1[static_cast<size_t>(i)] = cc * colA[static_cast<size_t>(i)] + cs * colB[static_cast<size_t>(i)];
            C2[static_cast<size_t>(i)] = -f.s * colA[static_cast<size_t>(i)] + f.c * colB[static_cast<size_t>(i)];
        }

        // Column r+1: read off directly (its chase is the unchanged frame).
        M.D[static_cast<size_t>(r) + 1] = C2[1].real();
        if (r + 1 <= m - 2) {
            auto& wr1 = M.W[static_cast<size_t>(r) + 1];
            for (size_t t = 0; t < wr1.size(); ++t) wr1[t] = C2[t + 2];
        }

        // Column r: pull C1 back through the new staircase. With a full
        // window there is one more equation than spike slots; the bottom
        // coordinate is cancelled exactly by the residue alpha at (r+1, r).
        std::vector<cx> tv = C1;
        staircase_apply(M.G, r, tv, true, ops);
        cx alpha{};
        if (L == k + 2) {
            std::vector<cx> ech(static_cast<size_t>(L), cx{});
            ech[1] = cx{1.0, 0.0};
            staircase_apply(M.G, r, ech, true, ops);
            // The window system is consistent, so any live slot determines
            // alpha; solve at the deepest one with a safe pivot. Slots below
            // it belong to directions the staircase cannot reach (identity
            // layers from a rank-deficient generator, or a nearly vanishing
            // chain product) and dividing by them would amplify roundoff
            // into the spikes, so their leftovers are truncated instead.
            int j = L - 1;
            while (j > 1 && std::abs(ech[static_cast<size_t>(j)]) <= 1e-8) --j;
#ifdef QSHESS_TRACE
            qshess_trace::ech_min =
                std::min(qshess_trace::ech_min, std::abs(ech[static_cast<size_t>(j)]));
            if (j < qshess_trace::slot_min) {
                qshess_trace::slot_min = j;
                qshess_trace::slot_full = L;
            }
#endif
            if (std::abs(ech[static_cast<size_t>(j)]) > 1e-8) {
                alpha = -tv[static_cast<size_t>(j)] / ech[static_cast<size_t>(j)];
                for (int i = 0; i <= j; ++i) tv[static_cast<size_t>(i)] += alpha * ech[static_cast<size_t>(i)];
                for (int i = j + 1; i < L; ++i) {
                    const cx left = tv[static_cast<size_t>(i)] + alpha * ech[static_cast<size_t>(i)];
                    dropped = std::max(dropped, std::abs(left));
                    tv[static_cast<size_t>(i)] = cx{};
                }
                tv[static_cast<size_t>(j)] = cx{};
            } else {
                dropped = std::max(dropped, std::abs(tv[static_cast<size_t>(L) - 1]));
                tv[static_cast<size_t>(L) - 1] = cx{};
            }
        }
        M.D[static_cast<size_t>(r)] = tv[0].real();
        {
            auto& wr = M.W[static_cast<size_t>(r)];
            for (size_t t = 0; t < wr.size(); ++t) wr[t] = tv[t + 1];
        }

#ifdef QSHESS_TRACE
        qshess_trace::alpha_m = std::max(qshess_trace::alpha_m, std::abs(alpha));
        for (int i = 0; i < L; ++i)
            qshess_trace::win_m = std::max({qshess_trace::win_m,
                                            std::abs(C1[static_cast<size_t>(i)]),
                                            std::abs(C2[static_cast<size_t>(i)])});
#endif
        // Represented = true + alpha e_{r+1} e_r^* (plus mirror), so the
        // residue carries -alpha.
        acc.step(f, -alpha);
    }

    ConjugateOutcome out;
    out.m11 = M.D[0];
    out.R = acc.truncated();
    out.dropped = std::max(dropped, acc.dropped);

    // Cut row/column 0.
    GVMatrix Mt(m - 1, k);
    Mt.G = M.G.truncated_head();
    for (int i = 0; i + 1 < m; ++i) Mt.D[static_cast<size_t>(i)] = M.D[static_cast<size_t>(i) + 1];
    for (int i = 0; i + 2 < m; ++i) {
        auto& w = Mt.W[static_cast<size_t>(i)];
        const auto& wo = M.W[static_cast<size_t>(i) + 1];
        for (size_t t = 0; t < w.size(); ++t) w[t] = wo[t];
    }
    M = std::move(Mt);
    return out;
}

DabConjugateOutcome dab_conjugate_and_truncate(const Rank1QS& S, const RotationSequence1& P,
                                               OpCounter* ops) {
    const int m = S.n;
    if (P.n != m) throw std::invalid_argument("dab_conjugate_and_truncate: size mismatch");

    // Conjugating the rank-one product is plain vector arithmetic:
    //   t(P a b^* P^*) = t((Pa)(Pb)^*),
    // so the whole sweep reduces to tracking the correction
    //   Rc := t((Pa)(Pb)^*) - P dab(S) P^*,
    // which obeys the same one-step recursion the engine uses, fed with the
    // partially swept window of a b^* and the diagonal instead of stored spikes.
    // Peeling the sweep's outermost (lowest-row) rotation Z at row r:
    //   Rc_new = W + (Z (+) I) (diag(-d_r) (+) Rc_old) (Z^* (+) I)
    // with W the Hermitian-from-strict-lower window of the rotated slice.
    std::vector<cx> at = S.a, bt = S.b;
    std::vector<double> dR(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) dR[static_cast<size_t>(i)] = -S.d[static_cast<size_t>(i)];
    DabAccum acc(m);
    for (int r = m - 2; r >= 1; --r) {
        const Rotation& f = P.at(r);
        if (f.is_identity()) continue;
        const double c = f.c.real(); // real and >= 0 for every sweep rotation
        const cx s = f.s;
        const double dhat = dR[static_cast<size_t>(r) + 1];
        const double delta = -S.d[static_cast<size_t>(r)];
        const cx B11 = at[static_cast<size_t>(r)] * std::conj(bt[static_cast<size_t>(r)]);
        const cx B12 = at[static_cast<size_t>(r)] * std::conj(bt[static_cast<size_t>(r) + 1]);
        const cx B21 = at[static_cast<size_t>(r) + 1] * std::conj(bt[static_cast<size_t>(r)]);
        const cx B22 = at[static_cast<size_t>(r) + 1] * std::conj(bt[static_cast<size_t>(r) + 1]);
        const double w11 = -2.0 * c * (s * B21).real();
        const cx w21 = -std::conj(s) *
                       (c * B11 + std::conj(s) * B12 - c * B22 - std::conj(s) * std::conj(B21));
        dR[static_cast<size_t>(r)] = c * c * delta + std::norm(s) * dhat + w11;
        dR[static_cast<size_t>(r) + 1] = std::norm(s) * delta + c * c * dhat - w11;
        const cx alpha = c * std::conj(s) * (dhat - delta) + w21;
#ifdef QSHESS_TRACE
        qshess_trace::alpha_s = std::max(qshess_trace::alpha_s, std::abs(alpha));
#endif
        acc.step(f, alpha);
        f.apply_pair(at[static_cast<size_t>(r)], at[static_cast<size_t>(r) + 1]);
        f.apply_pair(bt[static_cast<size_t>(r)], bt[static_cast<size_t>(r) + 1]);
        if (ops) ops->add(2);
    }

    DabConjugateOutcome out;
    out.S1 = Rank1QS(m - 1);
    for (int i = 0; i + 1 < m; ++i) {
        out.S1.d[static_cast<size_t>(i)] = -dR[static_cast<size_t>(i) + 1];
        out.S1.a[static_cast<size_t>(i)] = at[static_cast<size_t>(i) + 1];
        out.S1.b[static_cast<size_t>(i)] = bt[static_cast<size_t>(i) + 1];
    }
    if (m >= 2) out.S1.b[static_cast<size_t>(m) - 2] = cx{};
    Rank1QS Rc = acc.truncated();
    out.R = Rank1QS(m - 1);
    for (int i = 0; i + 1 < m; ++i) {
        out.R.a[static_cast<size_t>(i)] = -Rc.a[static_cast<size_t>(i)];
        out.R.b[static_cast<size_t>(i)] = Rc.b[static_cast<size_t>(i)];
    }
    out.dropped = acc.dropped;
    return out;
}

void reorthogonalize(GVMatrix& M, const DenseMatrix& U, OpCounter* ops, double scale_floor) {
    const int m = M.n;
    const int k = M.k;
    if (U.rows != m || U.cols != k)
        throw std::invalid_argument("reorthogonalize: generator shape mismatch");
    const double scale = std::max(U.norm_fro(), scale_floor);
    if (scale == 0.0) return;
    const double tol = 1e-11 * scale;
    DenseMatrix B = U;
    for (int l = 0; l < k; ++l) {
        for (int r = m - 2; r >= l + 1; --r) {
            const cx v1 = B(r, l);
            const cx v2 = B(r + 1, l);
            if (std::hypot(std::abs(v1), std::abs(v2)) <= tol) {
                // Nothing real left to eliminate: the generator loses column
                // rank below its head as the reduction proceeds, so whole
                // stretches of a layer see only roundoff. A core recomputed
                // from that noise is an arbitrary frame the stored spikes were
                // never expressed in; the transported core is still exact
                // here, so keep it.
                apply_rotation(M.G.at(l, r), B, true, ops);
                continue;
            }
            auto [g0, alpha] = make_rotation(v1, v2, r);
            (void)alpha;
            const Rotation fresh = g0.adjointed();
            const Rotation& old = M.G.at(l, r);
            // fresh * diag(p, conj p) eliminates just the same; pick the
            // phase that lands closest to the stored core.
            const cx w = fresh.c * std::conj(old.c) + std::conj(fresh.s * std::conj(old.s));
            const double aw = std::abs(w);
            const cx p = aw > 0.0 ? std::conj(w) / aw : cx{1.0, 0.0};
            Rotation g{fresh.c * p, fresh.s * std::conj(p), r};
            g.renormalize();
            M.G.at(l, r) = g;
            apply_rotation(g, B, true, ops);
            B(r + 1, l) = cx{};
        }
    }
}

namespace {

// Column 0 of diag-part + U V^* + M + S at the current trailing size.
std::vector<cx> leading_column(const DenseMatrix& U, const DenseMatrix& V, const GVMatrix& M,
                               const Rank1QS& S, OpCounter* ops) {
    const int m = U.rows;
    const int k = U.cols;
    std::vector<cx> v(static_cast<size_t>(m), cx{});
    for (int j = 0; j < k; ++j) {
        const cx vj = std::conj(V(0, j));
        for (int i = 0; i < m; ++i) v[static_cast<size_t>(i)] += U(i, j) * vj;
    }
    const std::vector<cx> mc = M.column_lower(0, ops);
    for (int i = 1; i < m; ++i) v[static_cast<size_t>(i)] += mc[static_cast<size_t>(i)];
    v[0] += cx{M.D[0] + S.d[0], 0.0};
    const cx b0 = std::conj(S.b[0]);
    if (b0 != cx{})
        for (int i = 1; i < m; ++i) v[static_cast<size_t>(i)] += S.a[static_cast<size_t>(i)] * b0;
    return v;
}

// X <- X (I - tau w w^*), a unitary column mix shared by U and V so that
// U V^* is preserved exactly.
void apply_reflector(DenseMatrix& X, const std::vector<cx>& w, double tau) {
    const int k = static_cast<int>(w.size());
    for (int i = 0; i < X.rows; ++i) {
        cx s{};
        for (int j = 0; j < k; ++j) s += X(i, j) * w[static_cast<size_t>(j)];
        s *= tau;
        for (int j = 0; j < k; ++j) X(i, j) -= s * std::conj(w[static_cast<size_t>(j)]);
    }
}

} // namespace

HessenbergForm hessenberg_reduce(const std::vector<double>& D, const DenseMatrix& U,
                                 const DenseMatrix& V, const ReductionOptions& opt) {
    const int n = static_cast<int>(D.size());
    const int k = U.cols;
    if (U.rows != n || V.rows != n || V.cols != k)
        throw std::invalid_argument("hessenberg_reduce: generator shape mismatch");
    if (n < 1 || k < 1) throw std::invalid_argument("hessenberg_reduce: empty problem");

    HessenbergForm hf;
    hf.n = n;
    hf.k = k;
    hf.Uf = DenseMatrix(n, k);
    hf.Vf = DenseMatrix(n, k);
    hf.d.reserve(static_cast<size_t>(n));
    if (n > 1) hf.s.reserve(static_cast<size_t>(n) - 1);
    OpCounter ops;

    DenseMatrix Ucur = U, Vcur = V;
    const double gen_scale = U.norm_fro();
    GVMatrix M(n, k);
    M.G = kseq_from_matrix(U);
    Rank1QS S(n);
    S.d = D;

    const int reorth_every = opt.reorth_every == 0 ? k : opt.reorth_every;
    int offset = 0;
    int since_reorth = 0;
    bool shrunk = (k < 2);
    std::vector<cx> xcap(static_cast<size_t>(k));

    while (n - offset > k + 2) {
        const int m = n - offset;
        const std::vector<cx> v = leading_column(Ucur, Vcur, M, S, &ops);
        const CleanedColumn cc = clean_column(v);
        hf.d.push_back(v[0]);
        hf.s.push_back(cc.alpha);

        bool live = false;
        if (!shrunk) {
            for (int r = 1; r <= m - 2 && !live; ++r)
                if (!cc.P.at(r).is_identity()) live = true;
            if (live)
                for (int j = 0; j < k; ++j) xcap[static_cast<size_t>(j)] = std::conj(Vcur(0, j));
        }

        cc.P.apply(Ucur, false, &ops);
        cc.P.apply(Vcur, false, &ops);
        if (opt.log_rotations)
            for (int r = m - 2; r >= 1; --r) {
                const Rotation& g = cc.P.at(r);
                if (!g.is_identity()) hf.qlog.push_back({g.c, g.s, offset + r});
            }

        for (int j = 0; j < k; ++j) {
            hf.Uf(offset, j) = Ucur(0, j);
            hf.Vf(offset, j) = Vcur(0, j);
        }
        Ucur = Ucur.block(1, m, 0, k);
        Vcur = Vcur.block(1, m, 0, k);

#ifdef QSHESS_TRACE
        qshess_trace::alpha_m = 0.0;
        qshess_trace::alpha_s = 0.0;
        qshess_trace::win_m = 0.0;
        qshess_trace::ech_min = 1.0;
        qshess_trace::slot_min = 999;
        qshess_trace::slot_full = 0;
#endif
        const ConjugateOutcome mo = conjugate_and_truncate(M, cc.P, &ops);
        const DabConjugateOutcome so = dab_conjugate_and_truncate(S, cc.P, &ops);
        const Embedding emb = embed_rank1(so.S1, M.G, &ops);
        M = add_embedded(std::move(M), emb);
        S = dab_add(mo.R, so.R);

        if (!shrunk && live) {
            // Up to this step every sweep was the identity, so the swept
            // column obeyed v[1:] = Ucur x with x = V^* e_0, and stripping
            // the top row leaves a generator of rank k - 1. Rotate that
            // direction into the last column: it is exactly zero below the
            // stripped row and stays zero for the rest of the reduction,
            // which keeps the staircase solves away from it. The carrier
            // can be rebuilt outright while the spikes are still all zero.
            double xn2 = 0.0;
            for (const auto& c : xcap) xn2 += std::norm(c);
            if (xn2 > 0.0) {
                const double xn = std::sqrt(xn2);
                std::vector<cx> w(xcap);
                for (auto& c : w) c /= xn;
                const cx tail = w[static_cast<size_t>(k) - 1];
                const double ta = std::abs(tail);
                const cx sigma = ta > 0.0 ? cx{-tail / ta} : cx{-1.0, 0.0};
                w[static_cast<size_t>(k) - 1] -= sigma;
                double wn2 = 0.0;
                for (const auto& c : w) wn2 += std::norm(c);
                const double tau = 2.0 / wn2;
                apply_reflector(Ucur, w, tau);
                apply_reflector(Vcur, w, tau);
                apply_reflector(hf.Uf, w, tau);
                apply_reflector(hf.Vf, w, tau);
                M.G = kseq_from_matrix(Ucur);
            }
            shrunk = true;
        }

#ifdef QSHESS_TRACE
        {
            double mw = 0.0, md = 0.0, ssub = 0.0, scol = 0.0, mcol = 0.0, wklast = 0.0;
            for (const auto& row : M.W)
                for (const auto& e : row) mw = std::max(mw, std::abs(e));
            for (const auto& row : M.W)
                if (row.size() == static_cast<size_t>(k))
                    wklast = std::max(wklast, std::abs(row.back()));
            for (double e : M.D) md = std::max(md, std::abs(e));
            for (size_t i = 1; i < S.a.size(); ++i)
                ssub = std::max(ssub, std::abs(S.a[i] * std::conj(S.b[i - 1])));
            for (size_t i = 1; i < S.a.size(); ++i)
                scol = std::max(scol, std::abs(S.a[i] * std::conj(S.b[0])));
            const std::vector<cx> mc0 = M.column_lower(0, nullptr);
            for (const auto& e : mc0) mcol = std::max(mcol, std::abs(e));
            std::fprintf(stderr,
                         "step %4d m=%4d |MD|=%9.2e |MW|=%9.2e Ssub=%9.2e Scol0=%9.2e "
                         "Mcol0=%9.2e dM=%9.2e dS=%9.2e dE=%9.2e aM=%9.2e aS=%9.2e "
                         "win=%9.2e ech=%9.2e j=%d/%d wk=%9.2e\n",
                         offset, m, md, mw, ssub, scol, mcol, mo.dropped, so.dropped,
                         emb.drop_residual, qshess_trace::alpha_m, qshess_trace::alpha_s,
                         qshess_trace::win_m, qshess_trace::ech_min, qshess_trace::slot_min,
                         qshess_trace::slot_full, wklast);
        }
#endif
        hf.drop_residual =
            std::max({hf.drop_residual, mo.dropped, so.dropped, emb.drop_residual});
        ++offset;
        ++since_reorth;
        if (reorth_every > 0 && since_reorth >= reorth_every && n - offset > k + 2) {
            reorthogonalize(M, Ucur, &ops, gen_scale);
            since_reorth = 0;
        }
    }

    // Dense finish on the trailing block (at most (k+2) x (k+2)).
    const int mt = n - offset;
    DenseMatrix T = (Ucur * Vcur.adjoint()) + M.dense() + S.dense();
    for (int j = 0; j + 2 < mt; ++j)
        for (int r = mt - 2; r >= j + 1; --r) {
            auto [g, alpha] = make_rotation(T(r, j), T(r + 1, j), r);
            if (g.is_identity()) continue;
            apply_rotation(g, T, false, &ops);
            apply_rotation_right(g, T, true, &ops);
            apply_rotation(g, Ucur, false, &ops);
            apply_rotation(g, Vcur, false, &ops);
            T(r, j) = alpha;
            T(r + 1, j) = cx{};
            if (opt.log_rotations) hf.qlog.push_back({g.c, g.s, offset + r});
        }
    for (int i = 0; i < mt; ++i) {
        hf.d.push_back(T(i, i));
        if (i + 1 < mt) hf.s.push_back(T(i + 1, i));
        for (int j = 0; j < k; ++j) {
            hf.Uf(offset + i, j) = Ucur(i, j);
            hf.Vf(offset + i, j) = Vcur(i, j);
        }
    }
    hf.rotation_units = ops.units;
    return hf;
}

cx HessenbergForm::entry(int i, int j) const {
    if (i > j + 1) return cx{};
    if (i == j) return d[static_cast<size_t>(i)];
    if (i == j + 1) return s[static_cast<size_t>(j)];
    cx skw{};
    for (int t = 0; t < k; ++t)
        skw += Uf(i, t) * std::conj(Vf(j, t)) - Vf(i, t) * std::conj(Uf(j, t));
    if (j == i + 1) return std::conj(s[static_cast<size_t>(i)]) + skw;
    return skw;
}

DenseMatrix HessenbergForm::dense() const {
    DenseMatrix H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i > 0 ? i - 1 : 0; j < n; ++j) H(i, j) = entry(i, j);
    return H;
}

DenseMatrix HessenbergForm::qdense() const {
    DenseMatrix Q = DenseMatrix::identity(n);
    for (const auto& lg : qlog) {
        const Rotation g{lg.c, lg.s, lg.row};
        apply_rotation(g, Q, false, nullptr);
    }
    return Q;
}

} // namespace qshess
