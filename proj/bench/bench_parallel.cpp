// Timing of the OpenMP kernels against their serial reference paths:
// the coefficient-table build and the outcome scan.
#include <omp.h>

#include <cstdio>
#include <cstdlib>

#include "herald/analysis.hpp"
#include "herald/heralding.hpp"

using namespace herald;

int main(int argc, char** argv) {
    const int n3_max = argc > 1 ? std::atoi(argv[1]) : 180;
    std::printf("threads available: %d\n", omp_get_max_threads());

    std::printf("coefficient table, n3_max = %d\n", n3_max);
    double t0 = omp_get_wtime();
    CCoefficientTable ser = CCoefficientTable::build(n3_max, false);
    const double t_ser = omp_get_wtime() - t0;
    t0 = omp_get_wtime();
    CCoefficientTable par = CCoefficientTable::build(n3_max, true);
    const double t_par = omp_get_wtime() - t0;
    double dev = 0.0;
    for (int n3 = 1; n3 <= n3_max; ++n3)
        for (int n1 = 1; n1 <= n3; n1 += 2)
            dev = std::max(dev, std::abs(ser.c(n1, 2 * n3 - n1) - par.c(n1, 2 * n3 - n1)));
    std::printf("  serial %.3f s, parallel %.3f s, speedup %.2fx, max dev %.1e\n", t_ser,
                t_par, t_ser / t_par, dev);

    DotParams p;
    p.lambda = lambda_from_mean(2.0);
    BsElementTable table;
    auto outs = outcome_grid(80);
    table.ensure(42);
    std::printf("outcome scan, %zu outcomes\n", outs.size());
    t0 = omp_get_wtime();
    auto a = outcome_scan(p, p, 1.7, outs, table, false);
    const double s_ser = omp_get_wtime() - t0;
    t0 = omp_get_wtime();
    auto b = outcome_scan(p, p, 1.7, outs, table, true);
    const double s_par = omp_get_wtime() - t0;
    dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        dev = std::max(dev, std::abs(a[i].probability - b[i].probability));
    std::printf("  serial %.3f s, parallel %.3f s, speedup %.2fx, max dev %.1e\n", s_ser,
                s_par, s_ser / s_par, dev);
    return 0;
}
