#include "qshess/charpoly.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qshess/prng.hpp"

namespace qshess {

namespace {

constexpr double kSplit = 1e-300; // subdiagonal entries below this split H

std::vector<std::pair<int, int>> split_blocks(const HessenbergForm& H) {
    std::vector<std::pair<int, int>> seg;
    int lo = 0;
    for (int i = 0; i + 1 < H.n; ++i)
        if (std::abs(H.s[static_cast<size_t>(i)]) < kSplit) {
            seg.emplace_back(lo, i);
            lo = i + 1;
        }
    if (H.n > 0) seg.emplace_back(lo, H.n - 1);
    return seg;
}

struct SegEval {
    ScaledValue det;          // det(xI - H[lo..hi, lo..hi])
    cx ratio{};               // p'/p for the block; valid when det != 0
    bool dzero = false;       // p(x) == 0 exactly
    std::uint64_t flops = 0;
};

// Hyman's recurrence on one unreduced block. Solve (xI - H) v = gamma e_lo
// with v_hi = 1 by back substitution; then det = gamma * prod(s) and
// p'/p = gamma'/gamma. The upper part enters through running rank-k sums
//   p = sum_{j > r} conj(Vf[j,:]) v_j,   q = sum_{j > r} conj(Uf[j,:]) v_j
// so one evaluation is O((hi-lo) k).
SegEval seg_eval(const HessenbergForm& H, int lo, int hi, cx x) {
    SegEval out;
    const int k = H.k;
    const auto& d = H.d;
    const auto& s = H.s;

    if (lo == hi) {
        const cx g = x - d[static_cast<size_t>(lo)];
        out.det.mantissa = g;
        out.det.normalize();
        out.dzero = g == cx{};
        out.ratio = out.dzero ? cx{} : 1.0 / g;
        out.flops = 4;
        return out;
    }

    ScaledValue sprod;
    sprod.mantissa = 1.0;
    for (int i = lo; i < hi; ++i) {
        sprod.mantissa *= s[static_cast<size_t>(i)];
        sprod.normalize();
    }

    // Rolling window of v and v' plus the compressed tails.
    cx v1{1.0, 0.0}, v2{}; // v_{r+1}, v_{r+2}
    cx w1{}, w2{};         // derivatives
    std::vector<cx> p(static_cast<size_t>(k)), q(static_cast<size_t>(k));
    std::vector<cx> pd(static_cast<size_t>(k)), qd(static_cast<size_t>(k));
    long ev = 0; // everything above carries a hidden factor 2^ev

    constexpr double kBig = 0x1p+512;
    constexpr double kSmall = 0x1p-512;

    std::uint64_t fl = 0;
    auto row_value = [&](int row, cx& num, cx& numd) {
        const size_t ro = static_cast<size_t>(row);
        num = (x - d[ro]) * v1;
        numd = v1 + (x - d[ro]) * w1;
        if (row < hi) {
            num -= std::conj(s[ro]) * v2;
            numd -= std::conj(s[ro]) * w2;
        }
        cx su{}, sv{}, sud{}, svd{};
        for (int t = 0; t < k; ++t) {
            su += H.Uf(row, t) * p[static_cast<size_t>(t)];
            sv += H.Vf(row, t) * q[static_cast<size_t>(t)];
            sud += H.Uf(row, t) * pd[static_cast<size_t>(t)];
            svd += H.Vf(row, t) * qd[static_cast<size_t>(t)];
        }
        num += sv - su;
        numd += svd - sud;
        fl += 8 * static_cast<std::uint64_t>(k) + 8;
    };

    for (int r = hi - 1; r >= lo; --r) {
        cx num, numd;
        row_value(r + 1, num, numd);
        const cx v0 = num / s[static_cast<size_t>(r)];
        const cx w0 = numd / s[static_cast<size_t>(r)];
        // fold j = r+1 into the tails
        for (int t = 0; t < k; ++t) {
            p[static_cast<size_t>(t)] += std::conj(H.Vf(r + 1, t)) * v1;
            q[static_cast<size_t>(t)] += std::conj(H.Uf(r + 1, t)) * v1;
            pd[static_cast<size_t>(t)] += std::conj(H.Vf(r + 1, t)) * w1;
            qd[static_cast<size_t>(t)] += std::conj(H.Uf(r + 1, t)) * w1;
        }
        fl += 4 * static_cast<std::uint64_t>(k) + 4;
        v2 = v1;
        v1 = v0;
        w2 = w1;
        w1 = w0;

        const double mag = std::max(std::abs(v1), std::abs(w1));
        if (mag > kBig || (mag > 0.0 && mag < kSmall)) {
            int e = 0;
            std::frexp(mag, &e);
            const double f = std::ldexp(1.0, -e);
            v1 *= f;
            v2 *= f;
            w1 *= f;
            w2 *= f;
            for (auto& t : p) t *= f;
            for (auto& t : q) t *= f;
            for (auto& t : pd) t *= f;
            for (auto& t : qd) t *= f;
            ev += e;
        }
    }

    cx gamma, gammad;
    row_value(lo, gamma, gammad);
    out.flops = fl;

    if (gamma == cx{}) {
        out.dzero = true;
        out.det.mantissa = cx{};
        return out;
    }
    out.det.mantissa = gamma;
    out.det.exp2 = ev;
    out.det.normalize();
    out.det.mantissa *= sprod.mantissa;
    out.det.exp2 += sprod.exp2;
    out.det.normalize();
    out.ratio = gammad / gamma;
    return out;
}

} // namespace

EvalResult hyman_eval(const HessenbergForm& H, cx x) {
    EvalResult out;
    out.det.mantissa = 1.0;
    cx inv_newton{};
    bool any_zero = false;
    for (const auto& [lo, hi] : split_blocks(H)) {
        const SegEval se = seg_eval(H, lo, hi, x);
        out.flops += se.flops;
        if (se.dzero) {
            any_zero = true;
            continue;
        }
        out.det.mantissa *= se.det.mantissa;
        out.det.exp2 += se.det.exp2;
        out.det.normalize();
        inv_newton += se.ratio;
    }
    if (any_zero) {
        out.det.mantissa = cx{};
        out.det.exp2 = 0;
        out.newton = cx{};
        return out;
    }
    if (inv_newton == cx{}) {
        out.breakdown = true;
        return out;
    }
    out.newton = 1.0 / inv_newton;
    return out;
}

AberthResult aberth_roots(const HessenbergForm& H, const AberthOptions& opt) {
    AberthResult out;
    out.roots.reserve(static_cast<size_t>(H.n));

    for (const auto& [lo, hi] : split_blocks(H)) {
        const int m = hi - lo + 1;
        if (m == 1) {
            out.roots.push_back(H.d[static_cast<size_t>(lo)]);
            continue;
        }

        double dmax = 0.0, smax = 0.0, ufn = 0.0, vfn = 0.0;
        for (int i = lo; i <= hi; ++i) {
            dmax = std::max(dmax, std::abs(H.d[static_cast<size_t>(i)]));
            if (i < hi) smax = std::max(smax, std::abs(H.s[static_cast<size_t>(i)]));
            for (int t = 0; t < H.k; ++t) {
                ufn += std::norm(H.Uf(i, t));
                vfn += std::norm(H.Vf(i, t));
            }
        }
        const double radius = dmax + smax + 2.0 * std::sqrt(ufn) * std::sqrt(vfn);
        if (radius == 0.0) {
            // the block is the zero matrix
            for (int i = 0; i < m; ++i) out.roots.push_back(cx{});
            continue;
        }

        Rng rng(opt.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(lo + 1)));
        std::vector<cx> z(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            const double th =
                2.0 * 3.14159265358979323846 * (i + 0.26 + 0.48 * rng.uniform()) / m;
            z[static_cast<size_t>(i)] = radius * cx{std::cos(th), std::sin(th)};
        }

        std::vector<cx> corr(static_cast<size_t>(m));
        std::vector<char> bad(static_cast<size_t>(m));
        std::vector<std::uint64_t> fl(static_cast<size_t>(m));
        int iter = 0;
        bool done = false;
        while (iter < opt.max_iter && !done) {
            ++iter;
            // One Jacobi sweep: every correction reads only the previous z,
            // so the schedule (and the thread count) cannot change the bits.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (opt.parallel && m >= 8)
#endif
            for (int i = 0; i < m; ++i) {
                const SegEval se = seg_eval(H, lo, hi, z[static_cast<size_t>(i)]);
                fl[static_cast<size_t>(i)] = se.flops;
                bad[static_cast<size_t>(i)] = 0;
                cx N{};
                if (se.dzero) {
                    corr[static_cast<size_t>(i)] = cx{};
                } else if (se.ratio == cx{}) {
                    bad[static_cast<size_t>(i)] = 1; // p' vanished; nudge below
                    corr[static_cast<size_t>(i)] = cx{};
                } else {
                    N = 1.0 / se.ratio;
                    cx sum{};
                    for (int j = 0; j < m; ++j) {
                        if (j == i) continue;
                        const cx dz = z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
                        if (dz == cx{})
                            sum += (i < j ? 1.0 : -1.0) / (1e-12 * radius);
                        else
                            sum += 1.0 / dz;
                    }
                    const cx den = 1.0 - N * sum;
                    corr[static_cast<size_t>(i)] = den == cx{} ? N : N / den;
                }
            }
            bool all_small = true;
            for (int i = 0; i < m; ++i) {
                out.flops += fl[static_cast<size_t>(i)];
                if (bad[static_cast<size_t>(i)]) {
                    all_small = false;
                    z[static_cast<size_t>(i)] +=
                        radius * 1e-6 * cx{1.0, 0.5} * (1.0 + static_cast<double>(i));
                    continue;
                }
                if (std::abs(corr[static_cast<size_t>(i)]) >
                    opt.tol * (1.0 + std::abs(z[static_cast<size_t>(i)])))
                    all_small = false;
            }
            if (all_small) {
                done = true;
                break;
            }
            for (int i = 0; i < m; ++i)
                if (!bad[static_cast<size_t>(i)])
                    z[static_cast<size_t>(i)] -= corr[static_cast<size_t>(i)];
        }
        out.iterations = std::max(out.iterations, iter);
        if (!done) out.converged = false;
        for (int i = 0; i < m; ++i) out.roots.push_back(z[static_cast<size_t>(i)]);
    }
    return out;
}

} // namespace qshess
