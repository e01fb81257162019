#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qshess/experiments.hpp"

using namespace qshess;

namespace {

double time_roots(const HessenbergForm& hf, bool parallel, std::vector<cx>& roots) {
    AberthOptions opt;
    opt.parallel = parallel;
    opt.seed = 11;
    const auto t0 = std::chrono::steady_clock::now();
    const AberthResult ar = aberth_roots(hf, opt);
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    roots = ar.roots;
    return dt;
}

} // namespace

// Root finding runs its sweeps either serially or across threads; the sweeps
// are Jacobi-style, so the two must agree bit for bit. This compares their
// wall time and checks that agreement on a few instance shapes.
int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%6s %4s %12s %12s %9s %8s\n", "n", "k", "serial_s", "parallel_s", "speedup",
                "bitwise");

    int rc = 0;
    const std::pair<int, int> shapes[] = {{160, 4}, {240, 12}, {400, 8}};
    for (const auto& [n, k] : shapes) {
        const ProblemFile pf = random_problem(n, k, 5, false);
        const HessenbergForm hf = hessenberg_reduce(pf.D, pf.U, pf.V);

        std::vector<cx> rs, rp;
        const double ts = time_roots(hf, false, rs);
        const double tp = time_roots(hf, true, rp);

        bool same = rs.size() == rp.size();
        for (size_t i = 0; same && i < rs.size(); ++i) same = rs[i] == rp[i];
        if (!same) rc = 1;

        std::printf("%6d %4d %12.4f %12.4f %8.2fx %8s\n", n, k, ts, tp, tp > 0.0 ? ts / tp : 0.0,
                    same ? "yes" : "NO");
    }
    return rc;
}
