#include "doctest.h"

#include <cmath>
#include <optional>
#include <vector>

#include "qshess/prng.hpp"
#include "qshess/sequences.hpp"

using namespace qshess;

namespace {

Rotation random_core(Rng& rng, int row) {
    auto [g, a] = make_rotation(rng.cnormal(), rng.cnormal(), row);
    (void)a;
    return g;
}

RotationSequence1 random_seq1(Rng& rng, int n) {
    RotationSequence1 s(n);
    for (int r = 1; r <= n - 2; ++r) s.at(r) = random_core(rng, r);
    return s;
}

RotationSequenceK random_seqk(Rng& rng, int n, int k) {
    RotationSequenceK g(n, k);
    for (int l = 0; l < k; ++l)
        for (int r = l + 1; r <= n - 2; ++r) g.at(l, r) = random_core(rng, r);
    return g;
}

std::vector<cx> random_vec(Rng& rng, int n) {
    std::vector<cx> v(static_cast<size_t>(n));
    for (auto& x : v) x = rng.cnormal();
    return v;
}

DenseMatrix random_mat(Rng& rng, int n) {
    DenseMatrix A(n, n);
    for (auto& x : A.a) x = rng.cnormal();
    return A;
}

double vec_err(const std::vector<cx>& a, const std::vector<cx>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<cx> matvec(const DenseMatrix& M, const std::vector<cx>& v) {
    std::vector<cx> out(static_cast<size_t>(M.rows));
    for (int i = 0; i < M.rows; ++i) {
        cx acc{};
        for (int j = 0; j < M.cols; ++j) acc += M(i, j) * v[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

} // namespace

TEST_CASE("single sweep: dense factorization order is G_1 G_2 ... G_{n-2}") {
    Rng rng(101);
    const int n = 7;
    const RotationSequence1 s = random_seq1(rng, n);
    DenseMatrix prod = DenseMatrix::identity(n);
    for (int r = 1; r <= n - 2; ++r) prod = prod * s.at(r).dense(n);
    CHECK((s.dense() - prod).norm_max() < 1e-14);
}

TEST_CASE("single sweep: vector and matrix application match the dense form") {
    Rng rng(103);
    const int n = 8;
    const RotationSequence1 s = random_seq1(rng, n);
    const DenseMatrix S = s.dense();

    const std::vector<cx> v = random_vec(rng, n);
    std::vector<cx> w = v;
    s.apply(w);
    CHECK(vec_err(w, matvec(S, v)) < 1e-13);

    std::vector<cx> wa = v;
    s.apply(wa, true);
    CHECK(vec_err(wa, matvec(S.adjoint(), v)) < 1e-13);

    const DenseMatrix A = random_mat(rng, n);
    DenseMatrix B = A;
    s.apply(B);
    CHECK((B - S * A).norm_max() < 1e-13);

    DenseMatrix Ba = A;
    s.apply(Ba, true);
    CHECK((Ba - S.adjoint() * A).norm_max() < 1e-13);

    DenseMatrix Br = A;
    s.apply_right_adjoint(Br);
    CHECK((Br - A * S.adjoint()).norm_max() < 1e-13);
}

TEST_CASE("k-layer sequence: dense factorization order is Lt_0 ... Lt_{k-1}") {
    Rng rng(107);
    const int n = 7, k = 3;
    const RotationSequenceK g = random_seqk(rng, n, k);
    DenseMatrix prod = DenseMatrix::identity(n);
    for (int l = 0; l < k; ++l) {
        DenseMatrix lt = DenseMatrix::identity(n);
        for (int r = n - 2; r >= l + 1; --r) lt = lt * g.at(l, r).dense(n);
        prod = prod * lt;
    }
    CHECK((g.dense() - prod).norm_max() < 1e-13);
}

TEST_CASE("k-layer sequence: application matches the dense form") {
    Rng rng(109);
    const int n = 9, k = 3;
    const RotationSequenceK g = random_seqk(rng, n, k);
    const DenseMatrix G = g.dense();

    const std::vector<cx> v = random_vec(rng, n);
    std::vector<cx> w = v;
    g.apply(w);
    CHECK(vec_err(w, matvec(G, v)) < 1e-13);

    std::vector<cx> wa = v;
    g.apply(wa, true);
    CHECK(vec_err(wa, matvec(G.adjoint(), v)) < 1e-13);

    const DenseMatrix A = random_mat(rng, n);
    DenseMatrix B = A;
    g.apply(B, true);
    CHECK((B - G.adjoint() * A).norm_max() < 1e-13);
}

TEST_CASE("apply_banded restricts to a closed m-band") {
    Rng rng(113);
    const int n = 9, k = 3;
    const RotationSequenceK g = random_seqk(rng, n, k);
    for (int lo = 1; lo <= n - 2; ++lo) {
        for (int hi = lo; hi <= n - 2; ++hi) {
            const RotationSequenceK gs = slice(g, lo, hi);
            const DenseMatrix Gs = gs.dense();
            const std::vector<cx> v = random_vec(rng, n);
            std::vector<cx> w = v;
            g.apply_banded(w, lo, hi);
            CHECK(vec_err(w, matvec(Gs, v)) < 1e-13);
            std::vector<cx> wa = v;
            g.apply_banded(wa, lo, hi, true);
            CHECK(vec_err(wa, matvec(Gs.adjoint(), v)) < 1e-13);
        }
    }
}

TEST_CASE("slice keeps exactly the slots in the band") {
    Rng rng(127);
    const int n = 7, k = 2;
    const RotationSequenceK g = random_seqk(rng, n, k);
    const RotationSequenceK gs = slice(g, 2, 4);
    // slots with 2 <= r - l <= 4 survive:
    //   l = 0: r in {2, 3, 4};  l = 1: r in {3, 4, 5}
    for (int l = 0; l < k; ++l) {
        for (int r = l + 1; r <= n - 2; ++r) {
            const int md = r - l;
            if (md >= 2 && md <= 4) {
                CHECK(gs.at(l, r).c == g.at(l, r).c);
                CHECK(gs.at(l, r).s == g.at(l, r).s);
            } else {
                CHECK(gs.at(l, r).is_identity());
            }
        }
    }
    // clamping: the full band is the whole sequence
    const RotationSequenceK gfull = slice(g, -5, 100);
    CHECK((gfull.dense() - g.dense()).norm_max() == 0.0);
}

TEST_CASE("slice splits the sequence into commuting pieces only at band edges") {
    // dense(G) = dense(slice(G, lo, n-2)) * dense(slice(G, 1, lo-1)) holds for
    // every lo: the lower band acts first on a vector.
    Rng rng(131);
    const int n = 8, k = 3;
    const RotationSequenceK g = random_seqk(rng, n, k);
    for (int lo = 2; lo <= n - 2; ++lo) {
        const DenseMatrix hi = slice(g, lo, n - 2).dense();
        const DenseMatrix lo_part = slice(g, 1, lo - 1).dense();
        CHECK((g.dense() - hi * lo_part).norm_max() < 1e-13);
    }
}

TEST_CASE("pass_through: dense contract and slot locality") {
    for (int n = 4; n <= 9; ++n) {
        for (int k = 1; k <= 4 && k < n - 1; ++k) {
            Rng rng(1000 + static_cast<unsigned>(n * 10 + k));
            for (int frow = 1; frow <= n - 2; ++frow) {
                const RotationSequenceK g0 = random_seqk(rng, n, k);
                const Rotation f = random_core(rng, frow);
                RotationSequenceK g = g0;
                const std::optional<Rotation> out = pass_through(g, f);

                DenseMatrix lhs = g0.dense() * f.dense(n);
                DenseMatrix rhs = g.dense();
                if (out) {
                    CHECK(out->row == frow - k);
                    rhs = out->dense(n) * rhs;
                } else {
                    CHECK(frow <= k);
                }
                CHECK((lhs - rhs).norm_max() < 1e-13);

                // exit case: only the two m-diagonals at the mover's path
                // change; absorbed case: the damage stays inside the two
                // layers the mover zig-zags between
                for (int l = 0; l < k; ++l) {
                    for (int r = l + 1; r <= n - 2; ++r) {
                        const int md = r - l;
                        if (frow >= k + 1) {
                            if (md == frow - k || md == frow - k + 1) continue;
                        } else if (frow == k) {
                            if (l == k - 1 && r == k) continue;
                        } else {
                            if (l == frow - 1 || l == frow) continue;
                        }
                        CHECK(g.at(l, r).c == g0.at(l, r).c);
                        CHECK(g.at(l, r).s == g0.at(l, r).s);
                    }
                }
            }
        }
    }
}

TEST_CASE("pass_through_down: dense contract and slot locality") {
    for (int n = 4; n <= 9; ++n) {
        for (int k = 1; k <= 4 && k < n - 1; ++k) {
            Rng rng(2000 + static_cast<unsigned>(n * 10 + k));
            for (int frow = 1; frow <= n - 2; ++frow) {
                const RotationSequenceK g0 = random_seqk(rng, n, k);
                const Rotation f = random_core(rng, frow);
                RotationSequenceK g = g0;
                const std::optional<Rotation> out = pass_through_down(g, f);

                DenseMatrix lhs = f.dense(n) * g0.dense();
                DenseMatrix rhs = g.dense();
                if (out) {
                    CHECK(out->row == frow + k);
                    rhs = rhs * out->dense(n);
                } else {
                    CHECK(frow + k > n - 2);
                }
                CHECK((lhs - rhs).norm_max() < 1e-13);

                for (int l = 0; l < k; ++l) {
                    for (int r = l + 1; r <= n - 2; ++r) {
                        const int md = r - l;
                        if (md == frow || md == frow + 1) continue;
                        CHECK(g.at(l, r).c == g0.at(l, r).c);
                        CHECK(g.at(l, r).s == g0.at(l, r).s);
                    }
                }
            }
        }
    }
}

TEST_CASE("truncated_head drops the lowest diagonal and shifts rows up") {
    Rng rng(137);
    const int n = 8, k = 3;
    const RotationSequenceK g = random_seqk(rng, n, k);
    const RotationSequenceK t = g.truncated_head();
    CHECK(t.n == n - 1);
    CHECK(t.k == k);
    for (int l = 0; l < k; ++l) {
        for (int r = l + 1; r <= n - 3; ++r) {
            // slot (l, r) of the truncation came from slot (l, r+1), which had
            // m-diagonal (r+1) - l >= 2
            CHECK(t.at(l, r).c == g.at(l, r + 1).c);
            CHECK(t.at(l, r).s == g.at(l, r + 1).s);
            CHECK(t.at(l, r).row == r);
        }
    }
}
