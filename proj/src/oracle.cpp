#include "qshess/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qshess {

DenseMatrix t_op(const DenseMatrix& B) {
    const int n = B.rows;
    DenseMatrix T(n, n);
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            T(i, j) = B(i, j);
            T(j, i) = std::conj(B(i, j));
        }
    return T;
}

DenseHessenberg dense_hessenberg(const DenseMatrix& A) {
    const int n = A.rows;
    DenseHessenberg out{A, DenseMatrix::identity(n)};
    DenseMatrix& H = out.H;
    for (int j = 0; j <= n - 3; ++j) {
        for (int r = n - 2; r >= j + 1; --r) {
            auto [g, alpha] = make_rotation(H(r, j), H(r + 1, j), r);
            if (g.is_identity()) continue;
            apply_rotation(g, H, false);
            apply_rotation_right(g, H, true);
            apply_rotation(g, out.Q, false);
            // Pin the eliminated pair to its exact values; the rotated entries
            // agree only to roundoff.
            H(r, j) = alpha;
            H(r + 1, j) = 0.0;
        }
    }
    return out;
}

std::vector<double> singular_values(const DenseMatrix& A) {
    DenseMatrix B = (A.rows >= A.cols) ? A : A.adjoint();
    const int m = B.rows;
    const int n = B.cols;
    std::vector<double> sv(static_cast<size_t>(n), 0.0);
    if (n == 0) return sv;

    const double tol = 1e-15;
    for (int sweep = 0; sweep < 40; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                cx apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += std::norm(B(i, p));
                    aqq += std::norm(B(i, q));
                    apq += std::conj(B(i, p)) * B(i, q);
                }
                const double mag = std::abs(apq);
                if (mag <= tol * std::sqrt(app * aqq) || mag == 0.0) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double cs = 1.0 / std::hypot(1.0, t);
                const cx sn = (cs * t) * (apq / mag);
                for (int i = 0; i < m; ++i) {
                    const cx u = B(i, p);
                    const cx v = B(i, q);
                    B(i, p) = cs * u - std::conj(sn) * v;
                    B(i, q) = sn * u + cs * v;
                }
            }
        }
        if (!rotated) break;
    }
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::norm(B(i, j));
        sv[static_cast<size_t>(j)] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

int numerical_rank(const DenseMatrix& A, double tol) {
    if (A.rows == 0 || A.cols == 0) return 0;
    const std::vector<double> sv = singular_values(A);
    if (sv.empty() || sv[0] == 0.0) return 0;
    int r = 0;
    for (double s : sv)
        if (s > tol * sv[0]) ++r;
    return r;
}

int qs_rank_lower(const DenseMatrix& A, double tol) {
    const int n = A.rows;
    int rk = 0;
    for (int i = 0; i + 1 < n; ++i)
        rk = std::max(rk, numerical_rank(A.block(i + 1, n, 0, i + 1), tol));
    return rk;
}

int qs_rank_upper(const DenseMatrix& A, double tol) {
    return qs_rank_lower(A.adjoint(), tol);
}

int qs_rank_upper_bound(const DenseMatrix& A, double tol) {
    const int n = A.rows;
    const double thresh = tol * A.norm_fro();
    int rk = 0;
    for (int i = 0; i + 1 < n; ++i) {
        DenseMatrix B = A.block(0, i + 1, i + 1, n);
        const int bm = B.rows, bn = B.cols;
        std::vector<double> cn(static_cast<size_t>(bn));
        for (int j = 0; j < bn; ++j) cn[static_cast<size_t>(j)] = norm2(B.col(j));
        int r = 0;
        while (true) {
            int piv = -1;
            double best = thresh;
            for (int j = 0; j < bn; ++j)
                if (cn[static_cast<size_t>(j)] > best) {
                    best = cn[static_cast<size_t>(j)];
                    piv = j;
                }
            if (piv < 0 || r >= std::min(bm, bn)) break;
            ++r;
            std::vector<cx> u = B.col(piv);
            const double un = norm2(u);
            for (cx& z : u) z /= un;
            for (int j = 0; j < bn; ++j) {
                if (cn[static_cast<size_t>(j)] == 0.0) continue;
                std::vector<cx> v = B.col(j);
                const cx proj = dot_conj(u, v);
                for (int i2 = 0; i2 < bm; ++i2) v[static_cast<size_t>(i2)] -= proj * u[static_cast<size_t>(i2)];
                B.set_col(j, v);
                cn[static_cast<size_t>(j)] = norm2(v);
            }
            cn[static_cast<size_t>(piv)] = 0.0;
        }
        rk = std::max(rk, r);
    }
    return rk;
}

ScaledValue dense_char_det(const DenseMatrix& A, cx x) {
    const int n = A.rows;
    DenseMatrix B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = (i == j ? x - A(i, j) : -A(i, j));

    ScaledValue det;
    det.mantissa = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(B(c, c));
        for (int i = c + 1; i < n; ++i)
            if (std::abs(B(i, c)) > best) {
                best = std::abs(B(i, c));
                piv = i;
            }
        if (best == 0.0) {
            det.mantissa = 0.0;
            det.exp2 = 0;
            return det;
        }
        if (piv != c) {
            for (int j = c; j < n; ++j) std::swap(B(c, j), B(piv, j));
            det.mantissa = -det.mantissa;
        }
        det.mantissa *= B(c, c);
        det.normalize();
        for (int i = c + 1; i < n; ++i) {
            const cx f = B(i, c) / B(c, c);
            if (f == cx{}) continue;
            for (int j = c + 1; j < n; ++j) B(i, j) -= f * B(c, j);
        }
    }
    return det;
}

namespace {

cx wilkinson_shift(const DenseMatrix& H, int hi) {
    const cx a = H(hi - 1, hi - 1);
    const cx b = H(hi - 1, hi);
    const cx c = H(hi, hi - 1);
    const cx d = H(hi, hi);
    const cx tr2 = 0.5 * (a + d);
    const cx disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
    const cx r1 = tr2 + disc;
    const cx r2 = tr2 - disc;
    return (std::abs(r1 - d) < std::abs(r2 - d)) ? r1 : r2;
}

} // namespace

std::vector<cx> hessenberg_eigs(DenseMatrix H) {
    const int n = H.rows;
    std::vector<cx> eigs;
    eigs.reserve(static_cast<size_t>(n));
    if (n == 0) return eigs;
    if (n == 1) return {H(0, 0)};

    const double eps = 2.22e-16;
    int hi = n - 1;
    long iters = 0;
    const long cap = 30L * n + 100;
    int since_deflate = 0;

    while (hi >= 0) {
        if (hi == 0) {
            eigs.push_back(H(0, 0));
            break;
        }
        // Kill negligible subdiagonals.
        for (int i = 1; i <= hi; ++i)
            if (std::abs(H(i, i - 1)) <= eps * (std::abs(H(i - 1, i - 1)) + std::abs(H(i, i))))
                H(i, i - 1) = 0.0;

        if (H(hi, hi - 1) == cx{}) {
            eigs.push_back(H(hi, hi));
            --hi;
            since_deflate = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && H(lo, lo - 1) != cx{}) --lo;
        if (lo == hi - 1) {
            // 2x2 block: closed form.
            const cx a = H(lo, lo), b = H(lo, hi), c = H(hi, lo), d = H(hi, hi);
            const cx tr2 = 0.5 * (a + d);
            const cx disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
            eigs.push_back(tr2 + disc);
            eigs.push_back(tr2 - disc);
            hi -= 2;
            since_deflate = 0;
            continue;
        }

        if (++iters > cap) throw std::runtime_error("hessenberg_eigs: QR iteration stalled");
        ++since_deflate;
        cx sigma = wilkinson_shift(H, hi);
        if (since_deflate % 13 == 12)
            sigma = H(hi, hi) + cx{1.25, 0.25} * std::abs(H(hi, hi - 1));

        for (int i = lo; i <= hi; ++i) H(i, i) -= sigma;
        std::vector<Rotation> gs;
        gs.reserve(static_cast<size_t>(hi - lo));
        for (int r = lo; r < hi; ++r) {
            auto [g, alpha] = make_rotation(H(r, r), H(r + 1, r), r);
            apply_rotation(g, H, false);
            H(r, r) = alpha;
            H(r + 1, r) = 0.0;
            gs.push_back(g);
        }
        for (const Rotation& g : gs) apply_rotation_right(g, H, true);
        for (int i = lo; i <= hi; ++i) H(i, i) += sigma;
    }
    return eigs;
}

DenseMatrix residual_qs1(const DenseMatrix& A, const RotationSequence1& Q,
                         const std::vector<double>& D) {
    DenseMatrix Aconj = A;
    Q.apply(Aconj, false);
    Q.apply_right_adjoint(Aconj);

    DenseMatrix Herm = DenseMatrix::diag(D) + t_op(A);
    Q.apply(Herm, false);
    Q.apply_right_adjoint(Herm);

    return t_op(Aconj) - Herm;
}

} // namespace qshess
