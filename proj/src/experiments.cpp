#include "qshess/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qshess/oracle.hpp"
#include "qshess/prng.hpp"

namespace qshess {

ProblemFile random_problem(int n, int k, std::uint64_t seed, bool complex_entries) {
    if (n <= k || k < 1) throw std::invalid_argument("random_problem: need n > k >= 1");
    Rng rng(seed);
    ProblemFile pf;
    pf.n = n;
    pf.k = k;
    pf.complex_entries = complex_entries;
    pf.D.resize(static_cast<size_t>(n));
    for (auto& x : pf.D) x = rng.normal();
    pf.U = DenseMatrix(n, k);
    pf.V = DenseMatrix(n, k);
    for (DenseMatrix* M : {&pf.U, &pf.V})
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j)
                (*M)(i, j) = complex_entries ? rng.cnormal() : cx{rng.normal(), 0.0};
    return pf;
}

DenseMatrix assemble_dense(const ProblemFile& pf) {
    DenseMatrix A = pf.U * pf.V.adjoint();
    for (int i = 0; i < pf.n; ++i) A(i, i) += pf.D[static_cast<size_t>(i)];
    return A;
}

double similarity_residual(const ProblemFile& pf, const HessenbergForm& hf) {
    const DenseMatrix A = assemble_dense(pf);
    const DenseMatrix Q = hf.qdense();
    const DenseMatrix R = Q * A * Q.adjoint() - hf.dense();
    const double an = A.norm_fro();
    return an > 0.0 ? R.norm_fro() / an : R.norm_fro();
}

BenchPoint run_bench_point(const std::string& mode, int n, int k, std::uint64_t seed,
                           int repeats) {
    BenchPoint bp;
    bp.mode = mode;
    bp.n = n;
    bp.k = k;
    bp.seed = seed;
    bp.repeats = repeats;
    const ProblemFile pf = random_problem(n, k, seed, false);
    double total = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const HessenbergForm hf = hessenberg_reduce(pf.D, pf.U, pf.V);
        const auto t1 = std::chrono::steady_clock::now();
        total += std::chrono::duration<double>(t1 - t0).count();
        bp.rotations = hf.rotation_units;
    }
    bp.mean_time_s = repeats > 0 ? total / repeats : 0.0;
    return bp;
}

std::string bench_csv(const std::vector<BenchPoint>& rows) {
    std::ostringstream out;
    out << "mode,n,k,seed,repeats,mean_time_s,rotations\n";
    for (const auto& r : rows)
        out << r.mode << ',' << r.n << ',' << r.k << ',' << r.seed << ',' << r.repeats << ','
            << format_double(r.mean_time_s) << ',' << r.rotations << '\n';
    return out.str();
}

ErrStats match_errors(const std::vector<cx>& computed, const std::vector<cx>& reference) {
    if (computed.size() != reference.size())
        throw std::invalid_argument("match_errors: multiset sizes differ");
    const size_t n = computed.size();
    ErrStats st;
    if (n == 0) return st;

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return std::abs(computed[a]) > std::abs(computed[b]);
    });

    std::vector<char> used(n, 0);
    std::vector<double> abs_err(n), rel_err(n);
    for (size_t oi = 0; oi < n; ++oi) {
        const cx z = computed[order[oi]];
        size_t best = n;
        double bd = 0.0;
        for (size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double dist = std::abs(z - reference[j]);
            if (best == n || dist < bd) {
                best = j;
                bd = dist;
            }
        }
        used[best] = 1;
        abs_err[oi] = bd;
        const double refmag = std::abs(reference[best]);
        rel_err[oi] = refmag > 0.0 ? bd / refmag : bd;
    }

    auto fold = [n](const std::vector<double>& e, double& mean, double& mn, double& mx) {
        mean = 0.0;
        mn = e[0];
        mx = e[0];
        for (const double x : e) {
            mean += x;
            mn = std::min(mn, x);
            mx = std::max(mx, x);
        }
        mean /= static_cast<double>(n);
    };
    fold(abs_err, st.mean_abs, st.min_abs, st.max_abs);
    fold(rel_err, st.mean_rel, st.min_rel, st.max_rel);
    return st;
}

EigErrPoint run_eigerr_point(int n, int k, std::uint64_t seed) {
    EigErrPoint ep;
    ep.n = n;
    ep.k = k;
    ep.seed = seed;
    const ProblemFile pf = random_problem(n, k, seed, false);

    const HessenbergForm hf = hessenberg_reduce(pf.D, pf.U, pf.V);
    const std::vector<cx> computed = hessenberg_eigs(hf.dense());

    const DenseMatrix A = assemble_dense(pf);
    const DenseHessenberg oh = dense_hessenberg(A);
    const std::vector<cx> reference = hessenberg_eigs(oh.H);

    ep.err = match_errors(computed, reference);
    return ep;
}

std::string eigerr_csv(const std::vector<EigErrPoint>& rows) {
    std::ostringstream out;
    out << "n,k,seed,mean_abs,min_abs,max_abs,mean_rel,min_rel,max_rel\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.k << ',' << r.seed << ',' << format_double(r.err.mean_abs)
            << ',' << format_double(r.err.min_abs) << ',' << format_double(r.err.max_abs)
            << ',' << format_double(r.err.mean_rel) << ',' << format_double(r.err.min_rel)
            << ',' << format_double(r.err.max_rel) << '\n';
    return out.str();
}

std::string roots_csv(const HessenbergForm& hf, const std::vector<cx>& roots) {
    std::ostringstream out;
    out << "idx,re,im,newton_abs\n";
    for (size_t i = 0; i < roots.size(); ++i) {
        const EvalResult ev = hyman_eval(hf, roots[i]);
        const double na = ev.breakdown ? 0.0 : std::abs(ev.newton);
        out << i << ',' << format_double(roots[i].real()) << ','
            << format_double(roots[i].imag()) << ',' << format_double(na) << '\n';
    }
    return out.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need two or more points");
    const size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

} // namespace qshess
