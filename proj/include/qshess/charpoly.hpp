#pragma once

#include <cstdint>
#include <vector>

#include "qshess/reduction.hpp"

namespace qshess {

// Characteristic polynomial machinery on the compact Hessenberg form:
// p(x) = det(xI - H) and the Newton correction p(x)/p'(x) in O(nk) per
// evaluation, reading the upper part of H through the generators instead of
// forming it. Zero subdiagonal entries split H into independent blocks; all
// results combine across them.
struct EvalResult {
    ScaledValue det;
    cx newton{};            // p(x)/p'(x); meaningless when breakdown is set
    bool breakdown = false; // p'(x) = 0 while p(x) != 0
    std::uint64_t flops = 0;
};
EvalResult hyman_eval(const HessenbergForm& H, cx x);

struct AberthOptions {
    int max_iter = 100;
    double tol = 1e-12; // accept when |p/p'| <= tol * (1 + |z|) at every root
    std::uint64_t seed = 1;
    bool parallel = true; // Jacobi-style sweeps: same bits either way
};

struct AberthResult {
    std::vector<cx> roots;
    int iterations = 0; // largest sweep count over the blocks
    bool converged = true;
    std::uint64_t flops = 0;
};
AberthResult aberth_roots(const HessenbergForm& H, const AberthOptions& opt = {});

} // namespace qshess
