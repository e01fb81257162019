#pragma once

#include <string>
#include <vector>

#include "qshess/dense.hpp"
#include "qshess/reduction.hpp"

namespace qshess {

// A = diag(D) + U V^* as read from or written to a problem file:
//
//   QSHESS 1
//   n k real|complex
//   n lines of D, then n rows of U, then n rows of V (k entries per row,
//   each `re` or `re,im`)
//
// Numbers use the shortest decimal form that parses back to the same bits,
// so write -> read -> write is byte-stable.
struct ProblemFile {
    int n = 0;
    int k = 0;
    bool complex_entries = false;
    std::vector<double> D;
    DenseMatrix U, V;
};

std::string format_double(double x);
std::string format_cx(cx z, bool force_pair = false); // force "re,im" even when im = 0

ProblemFile read_problem(const std::string& path);
void write_problem(const ProblemFile& pf, const std::string& path);

// Compact Hessenberg output:
//
//   QSHESS-H 1
//   n k
//   d (n lines), s (n-1 lines), Uf rows, Vf rows, all entries `re,im`
//
// Rotation logs and counters are run artifacts and are not serialized.
void write_hessenberg(const HessenbergForm& hf, const std::string& path);
HessenbergForm read_hessenberg(const std::string& path);

} // namespace qshess
