#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qshess/charpoly.hpp"
#include "qshess/io.hpp"

namespace qshess {

// Standard-normal problem instance; identical seed, identical bytes.
ProblemFile random_problem(int n, int k, std::uint64_t seed, bool complex_entries = false);

DenseMatrix assemble_dense(const ProblemFile& pf);

// ||Q A Q^* - H||_F / ||A||_F; hf must carry its rotation log.
double similarity_residual(const ProblemFile& pf, const HessenbergForm& hf);

struct BenchPoint {
    std::string mode;
    int n = 0, k = 0;
    std::uint64_t seed = 0;
    int repeats = 0;
    double mean_time_s = 0.0;
    std::uint64_t rotations = 0;
};
BenchPoint run_bench_point(const std::string& mode, int n, int k, std::uint64_t seed,
                           int repeats);
std::string bench_csv(const std::vector<BenchPoint>& rows);

struct ErrStats {
    double mean_abs = 0.0, min_abs = 0.0, max_abs = 0.0;
    double mean_rel = 0.0, min_rel = 0.0, max_rel = 0.0;
};
// Greedy nearest-neighbor pairing of two same-size eigenvalue multisets,
// largest magnitudes first; relative errors are against the reference.
ErrStats match_errors(const std::vector<cx>& computed, const std::vector<cx>& reference);

struct EigErrPoint {
    int n = 0, k = 0;
    std::uint64_t seed = 0;
    ErrStats err;
};
// Reduce, reconstruct H, eigensolve; reference from the dense reduction of
// the same instance through the same eigensolver.
EigErrPoint run_eigerr_point(int n, int k, std::uint64_t seed);
std::string eigerr_csv(const std::vector<EigErrPoint>& rows);

// idx,re,im,newton_abs rows; the last column re-evaluates |p/p'| at the root.
std::string roots_csv(const HessenbergForm& hf, const std::vector<cx>& roots);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace qshess
