#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "qshess/experiments.hpp"
#include "qshess/oracle.hpp"

using namespace qshess;

namespace {

void write_text(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot write");
    out << body;
    if (!out.flush()) throw std::runtime_error(path + ": write failed");
}

struct ReduceRun {
    ProblemFile pf;
    HessenbergForm hf;
    double seconds = 0.0;
};

ReduceRun do_reduce(const std::string& input, int reorth_every, bool log_rotations) {
    ReduceRun rr;
    rr.pf = read_problem(input);
    ReductionOptions opt;
    opt.reorth_every = reorth_every;
    opt.log_rotations = log_rotations;
    const auto t0 = std::chrono::steady_clock::now();
    rr.hf = hessenberg_reduce(rr.pf.D, rr.pf.U, rr.pf.V, opt);
    rr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rr;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hessenberg reduction of diagonal-plus-rank-k matrices"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a random problem file");
    int gen_n = 0, gen_k = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    bool gen_complex = false;
    gen->add_option("n", gen_n, "matrix dimension")->required();
    gen->add_option("k", gen_k, "generator rank")->required();
    gen->add_option("--seed", gen_seed, "PRNG seed");
    gen->add_option("--out", gen_out, "output path (stdout if omitted)");
    gen->add_flag("--complex", gen_complex, "complex generator entries");

    // reduce
    auto* red = app.add_subcommand("reduce", "reduce a problem file to Hessenberg form");
    std::string red_in, red_out;
    int red_reorth = 0;
    double red_tol = 1e-9;
    bool red_log = false, red_noverify = false;
    red->add_option("input", red_in, "problem file")->required();
    red->add_option("--out", red_out, "write the compact Hessenberg form here");
    red->add_option("--reorth-every", red_reorth, "carrier refresh period (0 = every k steps)");
    red->add_option("--tol", red_tol, "similarity residual bound for the self-check");
    red->add_flag("--log-rotations", red_log, "keep the rotation log in the output");
    red->add_flag("--no-verify", red_noverify, "skip the dense self-check");

    // verify
    auto* ver = app.add_subcommand("verify", "reduce and compare against the dense oracle");
    std::string ver_in;
    int ver_reorth = 0;
    double ver_tol = 1e-9;
    ver->add_option("input", ver_in, "problem file")->required();
    ver->add_option("--reorth-every", ver_reorth, "carrier refresh period");
    ver->add_option("--tol", ver_tol, "similarity residual bound");

    // bench
    auto* ben = app.add_subcommand("bench", "timing and rotation-count sweeps");
    std::string ben_mode = "size", ben_out;
    std::uint64_t ben_seed = 1;
    int ben_repeats = 10;
    ben->add_option("--mode", ben_mode, "size (n sweep, k=10) or rank (k sweep, n=400)")
        ->check(CLI::IsMember({"size", "rank"}));
    ben->add_option("--seed", ben_seed, "PRNG seed");
    ben->add_option("--repeats", ben_repeats, "repetitions per point");
    ben->add_option("--out", ben_out, "CSV path (stdout if omitted)");

    // eigerr
    auto* eig = app.add_subcommand("eigerr", "eigenvalue accuracy against the dense pipeline");
    std::vector<int> eig_sizes{40, 80, 160, 320};
    int eig_k = 30, eig_nseeds = 10;
    std::uint64_t eig_seed = 1;
    std::string eig_out;
    eig->add_option("--sizes", eig_sizes, "matrix dimensions");
    eig->add_option("--k", eig_k, "generator rank");
    eig->add_option("--seeds", eig_nseeds, "trials per size");
    eig->add_option("--seed", eig_seed, "base seed");
    eig->add_option("--out", eig_out, "CSV path (stdout if omitted)");

    // roots
    auto* roo = app.add_subcommand("roots", "reduce and compute all eigenvalues");
    std::string roo_in, roo_out;
    std::uint64_t roo_seed = 1;
    double roo_tol = 1e-12;
    int roo_maxit = 100;
    bool roo_serial = false;
    roo->add_option("input", roo_in, "problem file")->required();
    roo->add_option("--out", roo_out, "CSV path (stdout if omitted)");
    roo->add_option("--seed", roo_seed, "start-point seed");
    roo->add_option("--tol", roo_tol, "Newton-correction stop size");
    roo->add_option("--max-iter", roo_maxit, "iteration cap per block");
    roo->add_flag("--serial", roo_serial, "disable parallel sweeps");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const ProblemFile pf = random_problem(gen_n, gen_k, gen_seed, gen_complex);
            if (gen_out.empty()) {
                const std::string tmp = "/dev/stdout";
                write_problem(pf, tmp);
            } else {
                write_problem(pf, gen_out);
            }
            return 0;
        }

        if (*red) {
            const bool verify = !red_noverify;
            ReduceRun rr = do_reduce(red_in, red_reorth, red_log || verify);
            std::cout << "n=" << rr.hf.n << " k=" << rr.hf.k
                      << " rotations=" << rr.hf.rotation_units << " time_s=" << rr.seconds
                      << " drop=" << rr.hf.drop_residual << '\n';
            int rc = 0;
            if (verify) {
                if (rr.hf.n <= 512) {
                    const double res = similarity_residual(rr.pf, rr.hf);
                    std::cout << "similarity_residual=" << res << '\n';
                    if (res > red_tol) {
                        std::cerr << "verification failed: residual " << res << " > " << red_tol
                                  << '\n';
                        rc = 2;
                    }
                } else {
                    std::cout << "similarity_residual=skipped (n > 512)\n";
                }
            }
            if (!red_log) rr.hf.qlog.clear();
            if (!red_out.empty()) write_hessenberg(rr.hf, red_out);
            return rc;
        }

        if (*ver) {
            const ReduceRun rr = do_reduce(ver_in, ver_reorth, true);
            const double res = similarity_residual(rr.pf, rr.hf);
            const DenseMatrix H = rr.hf.dense();
            bool lower_clean = true;
            for (int j = 0; j < H.cols && lower_clean; ++j)
                for (int i = j + 2; i < H.rows; ++i)
                    if (H(i, j) != cx{}) {
                        lower_clean = false;
                        break;
                    }
            std::cout << "similarity_residual=" << res << '\n';
            std::cout << "hessenberg_zeros=" << (lower_clean ? "exact" : "VIOLATED") << '\n';
            std::cout << "rotations=" << rr.hf.rotation_units << '\n';
            const bool ok = lower_clean && res <= ver_tol;
            std::cout << (ok ? "OK" : "FAIL") << '\n';
            return ok ? 0 : 2;
        }

        if (*ben) {
            std::vector<BenchPoint> rows;
            if (ben_mode == "size") {
                for (int n = 100; n <= 1000; n += 100)
                    rows.push_back(run_bench_point("size", n, 10, ben_seed, ben_repeats));
            } else {
                for (const int k : {5, 10, 20, 40, 80, 160})
                    rows.push_back(run_bench_point("rank", 400, k, ben_seed, ben_repeats));
            }
            write_text(ben_out, bench_csv(rows));
            std::vector<double> xs, ts, rs;
            for (const auto& r : rows) {
                xs.push_back(ben_mode == "size" ? r.n : r.k);
                ts.push_back(r.mean_time_s);
                rs.push_back(static_cast<double>(r.rotations));
            }
            std::ostream& info = ben_out.empty() ? std::cerr : std::cout;
            info << "time_slope=" << loglog_slope(xs, ts)
                 << " rotation_slope=" << loglog_slope(xs, rs) << '\n';
            return 0;
        }

        if (*eig) {
            std::vector<EigErrPoint> rows(eig_sizes.size() * static_cast<size_t>(eig_nseeds));
            const int total = static_cast<int>(rows.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (int idx = 0; idx < total; ++idx) {
                const int si = idx / eig_nseeds;
                const int ti = idx % eig_nseeds;
                rows[static_cast<size_t>(idx)] =
                    run_eigerr_point(eig_sizes[static_cast<size_t>(si)], eig_k,
                                     eig_seed + static_cast<std::uint64_t>(ti));
            }
            write_text(eig_out, eigerr_csv(rows));
            return 0;
        }

        if (*roo) {
            const ReduceRun rr = do_reduce(roo_in, 0, false);
            AberthOptions opt;
            opt.seed = roo_seed;
            opt.tol = roo_tol;
            opt.max_iter = roo_maxit;
            opt.parallel = !roo_serial;
            const AberthResult ar = aberth_roots(rr.hf, opt);
            write_text(roo_out, roots_csv(rr.hf, ar.roots));
            if (!ar.converged) {
                std::cerr << "warning: not all roots reached tolerance in " << opt.max_iter
                          << " sweeps\n";
                return 3;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
