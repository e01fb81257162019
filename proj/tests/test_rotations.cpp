#include "doctest.h"

#include <cmath>

#include "qshess/oracle.hpp"
#include "qshess/prng.hpp"
#include "qshess/rotation.hpp"

using namespace qshess;

namespace {

Rotation random_core(Rng& rng, int row) {
    auto [g, a] = make_rotation(rng.cnormal(), rng.cnormal(), row);
    (void)a;
    return g;
}

double unitary_defect(const DenseMatrix& X) {
    const DenseMatrix E = X * X.adjoint() - DenseMatrix::identity(X.rows);
    return E.norm_max();
}

} // namespace

TEST_CASE("make_rotation on (3, 4) gives the 3-4-5 core exactly") {
    auto [g, alpha] = make_rotation(cx{3.0, 0.0}, cx{4.0, 0.0});
    CHECK(g.c == cx{0.6, 0.0});
    CHECK(g.s == cx{0.8, 0.0});
    CHECK(alpha == cx{5.0, 0.0});
    // and it does eliminate
    cx x0{3.0, 0.0}, x1{4.0, 0.0};
    g.apply_pair(x0, x1);
    CHECK(std::abs(x0 - alpha) < 1e-15);
    CHECK(std::abs(x1) < 1e-15);
}

TEST_CASE("make_rotation edge cases") {
    SUBCASE("second entry zero: identity, alpha carries the first entry") {
        auto [g, alpha] = make_rotation(cx{-2.0, 1.0}, cx{});
        CHECK(g.is_identity());
        CHECK(alpha == cx{-2.0, 1.0});
    }
    SUBCASE("first entry zero: c = 0, alpha = |v2|") {
        auto [g, alpha] = make_rotation(cx{}, cx{0.0, -3.0});
        CHECK(g.c == cx{});
        CHECK(std::abs(alpha - cx{3.0, 0.0}) < 1e-15);
        cx x0{}, x1{0.0, -3.0};
        g.apply_pair(x0, x1);
        CHECK(std::abs(x0 - alpha) < 1e-15);
        CHECK(std::abs(x1) < 1e-15);
    }
    SUBCASE("both zero: identity, alpha zero") {
        auto [g, alpha] = make_rotation(cx{}, cx{});
        CHECK(g.is_identity());
        CHECK(alpha == cx{});
    }
    SUBCASE("complex pair: real nonnegative cosine, exact elimination") {
        Rng rng(7);
        for (int it = 0; it < 50; ++it) {
            const cx v1 = rng.cnormal(), v2 = rng.cnormal();
            auto [g, alpha] = make_rotation(v1, v2);
            CHECK(g.c.imag() == 0.0);
            CHECK(g.c.real() >= 0.0);
            cx x0 = v1, x1 = v2;
            g.apply_pair(x0, x1);
            CHECK(std::abs(x1) <= 1e-15 * std::abs(alpha));
            CHECK(std::abs(x0 - alpha) <= 1e-14 * std::abs(alpha));
            // alpha keeps v1's phase
            if (v1 != cx{}) {
                const cx ph = alpha / std::abs(alpha) - v1 / std::abs(v1);
                CHECK(std::abs(ph) < 1e-14);
            }
        }
    }
}

TEST_CASE("apply_pair matches the dense 2x2 action") {
    Rng rng(3);
    for (int it = 0; it < 20; ++it) {
        const Rotation g = random_core(rng, 0);
        const DenseMatrix G = g.dense(2);
        CHECK(unitary_defect(G) < 1e-15);
        const cx v0 = rng.cnormal(), v1 = rng.cnormal();
        cx x0 = v0, x1 = v1;
        g.apply_pair(x0, x1);
        CHECK(std::abs(x0 - (G(0, 0) * v0 + G(0, 1) * v1)) < 1e-15);
        CHECK(std::abs(x1 - (G(1, 0) * v0 + G(1, 1) * v1)) < 1e-15);
        cx y0 = x0, y1 = x1;
        g.apply_pair_adjoint(y0, y1);
        CHECK(std::abs(y0 - v0) < 1e-14);
        CHECK(std::abs(y1 - v1) < 1e-14);
    }
}

TEST_CASE("compose matches the dense product") {
    Rng rng(11);
    for (int it = 0; it < 20; ++it) {
        const Rotation g = random_core(rng, 2), h = random_core(rng, 2);
        const Rotation p = compose(g, h);
        const DenseMatrix E = p.dense(4) - g.dense(4) * h.dense(4);
        CHECK(E.norm_max() < 1e-14);
    }
}

TEST_CASE("apply_rotation acts on the right row and column pairs") {
    Rng rng(4);
    DenseMatrix A(5, 5);
    for (auto& v : A.a) v = rng.cnormal();
    const Rotation g = random_core(rng, 2);

    DenseMatrix L = A;
    apply_rotation(g, L);
    CHECK((L - g.dense(5) * A).norm_max() < 1e-14);

    DenseMatrix Lh = A;
    apply_rotation(g, Lh, true);
    CHECK((Lh - g.dense(5).adjoint() * A).norm_max() < 1e-14);

    DenseMatrix R = A;
    apply_rotation_right(g, R);
    CHECK((R - A * g.dense(5)).norm_max() < 1e-14);

    DenseMatrix Rh = A;
    apply_rotation_right(g, Rh, true);
    CHECK((Rh - A * g.dense(5).adjoint()).norm_max() < 1e-14);
}

TEST_CASE("turnover re-factors the three-core product exactly") {
    Rng rng(19);
    for (int it = 0; it < 200; ++it) {
        const Rotation ga = random_core(rng, 3);
        const Rotation gb = random_core(rng, 4);
        const Rotation f = random_core(rng, 3);
        const TurnoverResult tr = turnover(ga, gb, f);
        CHECK(tr.f_out.row == 4);
        CHECK(tr.ga_out.row == 3);
        CHECK(tr.gb_out.row == 4);
        const DenseMatrix lhs = ga.dense(6) * gb.dense(6) * f.dense(6);
        const DenseMatrix rhs = tr.f_out.dense(6) * tr.ga_out.dense(6) * tr.gb_out.dense(6);
        CHECK((lhs - rhs).norm_max() < 1e-13);
        CHECK(unitary_defect(tr.f_out.dense(6)) < 1e-13);
    }
}

TEST_CASE("turnover rejects mismatched rows") {
    Rng rng(23);
    const Rotation ga = random_core(rng, 3);
    const Rotation gb = random_core(rng, 5);
    const Rotation f = random_core(rng, 3);
    CHECK_THROWS_AS(turnover(ga, gb, f), std::invalid_argument);
}

TEST_CASE("turnover handles degenerate members") {
    Rng rng(29);
    SUBCASE("identity middle") {
        const Rotation ga = random_core(rng, 0);
        const Rotation gb{cx{1.0, 0.0}, cx{}, 1};
        const Rotation f = random_core(rng, 0);
        const TurnoverResult tr = turnover(ga, gb, f);
        const DenseMatrix lhs = ga.dense(3) * f.dense(3);
        const DenseMatrix rhs = tr.f_out.dense(3) * tr.ga_out.dense(3) * tr.gb_out.dense(3);
        CHECK((lhs - rhs).norm_max() < 1e-13);
    }
    SUBCASE("zero cosine members") {
        const Rotation ga{cx{}, cx{1.0, 0.0}, 0};
        const Rotation gb = random_core(rng, 1);
        const Rotation f{cx{}, cx{0.0, 1.0}, 0};
        const TurnoverResult tr = turnover(ga, gb, f);
        const DenseMatrix lhs = ga.dense(3) * gb.dense(3) * f.dense(3);
        const DenseMatrix rhs = tr.f_out.dense(3) * tr.ga_out.dense(3) * tr.gb_out.dense(3);
        CHECK((lhs - rhs).norm_max() < 1e-13);
    }
}

TEST_CASE("refactor primitives reproduce their patterns") {
    Rng rng(31);
    for (int it = 0; it < 50; ++it) {
        SUBCASE("") {}
        const Rotation a = random_core(rng, 1), b = random_core(rng, 0), c = random_core(rng, 1);
        // vee: rows (1,2), (0,1), (1,2)
        {
            Rotation a3 = a, b3 = b, c3 = c;
            a3.row = 1;
            b3.row = 0;
            c3.row = 1;
            const DenseMatrix X = a3.dense(3) * b3.dense(3) * c3.dense(3);
            const Refactor3 rf = refactor_vee(X);
            Rotation v1 = rf.g1, v2 = rf.g2, v3 = rf.g3;
            v1.row = 1;
            v2.row = 0;
            v3.row = 1;
            CHECK((X - v1.dense(3) * v2.dense(3) * v3.dense(3)).norm_max() < 1e-13);
        }
        // lambda: rows (0,1), (1,2), (0,1)
        {
            Rotation a3 = a, b3 = b, c3 = c;
            a3.row = 0;
            b3.row = 1;
            c3.row = 0;
            const DenseMatrix X = a3.dense(3) * b3.dense(3) * c3.dense(3);
            const Refactor3 rf = refactor_lambda(X);
            Rotation l1 = rf.g1, l2 = rf.g2, l3 = rf.g3;
            l1.row = 0;
            l2.row = 1;
            l3.row = 0;
            CHECK((X - l1.dense(3) * l2.dense(3) * l3.dense(3)).norm_max() < 1e-13);
        }
    }
}
