#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qshess/gv.hpp"
#include "qshess/oracle.hpp"
#include "qshess/prng.hpp"
#include "qshess/reduction.hpp"

using namespace qshess;

namespace {

DenseMatrix random_tall(Rng& rng, int n, int k) {
    DenseMatrix U(n, k);
    for (auto& v : U.a) v = rng.cnormal();
    return U;
}

GVMatrix random_gv(Rng& rng, int n, int k) {
    GVMatrix M(n, k);
    M.G = kseq_from_matrix(random_tall(rng, n, k));
    for (int i = 0; i < n; ++i) M.D[static_cast<size_t>(i)] = rng.normal();
    for (int i = 0; i + 1 < n; ++i)
        for (auto& w : M.W[static_cast<size_t>(i)]) w = rng.cnormal();
    return M;
}

std::vector<cx> random_vec(Rng& rng, int n) {
    std::vector<cx> v(static_cast<size_t>(n));
    for (auto& x : v) x = rng.cnormal();
    return v;
}

Rank1QS random_dab(Rng& rng, int n) {
    Rank1QS S(n);
    for (int i = 0; i < n; ++i) S.d[static_cast<size_t>(i)] = rng.normal();
    for (int i = 1; i < n; ++i) S.a[static_cast<size_t>(i)] = rng.cnormal();
    for (int i = 0; i + 1 < n; ++i) S.b[static_cast<size_t>(i)] = rng.cnormal();
    return S;
}

} // namespace

TEST_CASE("clean_column eliminates below the second entry") {
    Rng rng(401);
    const int m = 9;
    const std::vector<cx> v = random_vec(rng, m);
    const CleanedColumn cc = clean_column(v);
    std::vector<cx> w = v;
    cc.P.apply(w);
    CHECK(std::abs(w[0] - v[0]) == 0.0); // row 0 untouched
    CHECK(std::abs(w[1] - cc.alpha) < 1e-14);
    for (int i = 2; i < m; ++i) CHECK(std::abs(w[static_cast<size_t>(i)]) < 1e-14);
    // alpha carries the full mass of v[1:]
    double mass = 0.0;
    for (int i = 1; i < m; ++i) mass += std::norm(v[static_cast<size_t>(i)]);
    CHECK(std::abs(cc.alpha) == doctest::Approx(std::sqrt(mass)).epsilon(1e-12));
}

TEST_CASE("conjugation engine: dense contract on the k-spike form") {
    for (int n : {5, 6, 7, 9}) {
        for (int k : {1, 2, 3}) {
            if (k + 2 >= n) continue;
            Rng rng(500 + static_cast<unsigned>(10 * n + k));
            GVMatrix M = random_gv(rng, n, k);
            const DenseMatrix Md = M.dense();
            const CleanedColumn cc = clean_column(random_vec(rng, n));
            const DenseMatrix P = cc.P.dense();

            const ConjugateOutcome oc = conjugate_and_truncate(M, cc.P);
            const DenseMatrix X = P * Md * P.adjoint();

            CHECK(oc.dropped < 1e-12 * Md.norm_max());
            CHECK(std::abs(X(0, 0) - cx{oc.m11, 0.0}) < 1e-12 * Md.norm_max());
            CHECK(oc.R.a[0] == cx{});

            const DenseMatrix want = X.block(1, n, 1, n);
            const DenseMatrix got = M.dense() + oc.R.dense();
            CHECK((got - want).norm_max() < 1e-11 * Md.norm_max());
        }
    }
}

TEST_CASE("conjugation engine: dab lane dense contract") {
    for (int n : {2, 3, 5, 7, 10}) {
        for (int diag_only : {0, 1}) {
            Rng rng(600 + static_cast<unsigned>(2 * n + diag_only));
            Rank1QS S = random_dab(rng, n);
            if (diag_only) {
                // the step-one shape: pure diagonal, no rank-one part at all
                std::fill(S.a.begin(), S.a.end(), cx{});
                std::fill(S.b.begin(), S.b.end(), cx{});
            }
            const DenseMatrix Sd = S.dense();
            const CleanedColumn cc = clean_column(random_vec(rng, n));
            const DenseMatrix P = cc.P.dense();

            const DabConjugateOutcome oc = dab_conjugate_and_truncate(S, cc.P);
            const DenseMatrix X = P * Sd * P.adjoint();

            CHECK(oc.dropped < 1e-12);
            REQUIRE(oc.S1.n == n - 1);
            for (int i = 0; i < n - 1; ++i) CHECK(oc.R.d[static_cast<size_t>(i)] == 0.0);

            const DenseMatrix want = X.block(1, n, 1, n);
            const DenseMatrix got = oc.S1.dense() + oc.R.dense();
            const double scale = std::max(1.0, Sd.norm_max());
            CHECK((got - want).norm_max() < 1e-12 * scale);
        }
    }
}

TEST_CASE("the two residue lanes share the b chain bitwise") {
    Rng rng(701);
    const int n = 9, k = 2;
    GVMatrix M = random_gv(rng, n, k);
    const Rank1QS S = random_dab(rng, n);
    const CleanedColumn cc = clean_column(random_vec(rng, n));

    const ConjugateOutcome mo = conjugate_and_truncate(M, cc.P);
    const DabConjugateOutcome so = dab_conjugate_and_truncate(S, cc.P);
    REQUIRE(mo.R.n == so.R.n);
    for (size_t i = 0; i < mo.R.b.size(); ++i) CHECK(mo.R.b[i] == so.R.b[i]);
    // so their sum must stay in dab form
    CHECK_NOTHROW(dab_add(mo.R, so.R));
}

TEST_CASE("reorthogonalize restores the carrier without touching the values") {
    Rng rng(703);
    const int n = 9, k = 2;
    const DenseMatrix U = random_tall(rng, n, k);
    GVMatrix M = random_gv(rng, n, k);
    M.G = kseq_from_matrix(U);
    for (int i = 0; i + 1 < n; ++i)
        for (auto& w : M.W[static_cast<size_t>(i)]) w = rng.cnormal();
    const DenseMatrix before = M.dense();
    const std::vector<std::vector<cx>> W0 = M.W;
    const std::vector<double> D0 = M.D;

    // nudge the carrier off the generator, as accumulated roundoff would
    for (int l = 0; l < k; ++l)
        for (int r = l + 1; r <= n - 2; ++r) {
            Rotation& g = M.G.at(l, r);
            g.c += cx{1e-13, -5e-14};
            g.renormalize();
        }
    reorthogonalize(M, U);

    // values bitwise intact, carrier spans the generator again
    for (int i = 0; i < n; ++i) CHECK(M.D[static_cast<size_t>(i)] == D0[static_cast<size_t>(i)]);
    for (int i = 0; i + 1 < n; ++i)
        for (size_t t = 0; t < W0[static_cast<size_t>(i)].size(); ++t)
            CHECK(M.W[static_cast<size_t>(i)][t] == W0[static_cast<size_t>(i)][t]);
    const SpanCheck chk = spans(M.G, U, 1e-12);
    CHECK(chk.ok);
    // and the represented matrix moved only at roundoff scale
    CHECK((M.dense() - before).norm_max() < 1e-10 * before.norm_max());
}

TEST_CASE("hessenberg_reduce: similarity and structure on small problems") {
    for (int n : {6, 8, 10, 12}) {
        for (int k : {1, 2, 3}) {
            if (n <= k + 2) continue;
            Rng rng(800 + static_cast<unsigned>(10 * n + k));
            std::vector<double> D(static_cast<size_t>(n));
            for (auto& d : D) d = rng.normal();
            const DenseMatrix U = random_tall(rng, n, k);
            const DenseMatrix V = random_tall(rng, n, k);

            ReductionOptions opt;
            opt.log_rotations = true;
            const HessenbergForm hf = hessenberg_reduce(D, U, V, opt);

            DenseMatrix A(n, n);
            for (int i = 0; i < n; ++i) A(i, i) = D[static_cast<size_t>(i)];
            A = A + U * V.adjoint();

            const DenseMatrix H = hf.dense();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j + 1 < i; ++j) CHECK(H(i, j) == cx{});

            const DenseMatrix Q = hf.qdense();
            CHECK((Q * Q.adjoint() - DenseMatrix::identity(n)).norm_max() < 1e-12);
            const double rel = (Q * A * Q.adjoint() - H).norm_fro() / A.norm_fro();
            CAPTURE(n);
            CAPTURE(k);
            CAPTURE(hf.drop_residual);
            CHECK(rel < 1e-11 * n);
            CHECK(hf.drop_residual < 1e-9);
        }
    }
}

TEST_CASE("hessenberg_reduce is deterministic, counters included") {
    Rng rng(901);
    const int n = 20, k = 3;
    std::vector<double> D(static_cast<size_t>(n));
    for (auto& d : D) d = rng.normal();
    const DenseMatrix U = random_tall(rng, n, k);
    const DenseMatrix V = random_tall(rng, n, k);
    const HessenbergForm h1 = hessenberg_reduce(D, U, V);
    const HessenbergForm h2 = hessenberg_reduce(D, U, V);
    CHECK(h1.rotation_units == h2.rotation_units);
    CHECK(h1.rotation_units > 0);
    for (size_t i = 0; i < h1.d.size(); ++i) CHECK(h1.d[i] == h2.d[i]);
    for (size_t i = 0; i < h1.s.size(); ++i) CHECK(h1.s[i] == h2.s[i]);
}
