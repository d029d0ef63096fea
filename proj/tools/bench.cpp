// Timing comparison between the serial reference kernels and the OpenMP
// kernels, plus an end-to-end scan benchmark. Results are checked for
// bit-identical agreement while timing.
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif
#include <chrono>

#include "dsqed/config.hpp"
#include "dsqed/effective.hpp"
#include "dsqed/hilbert.hpp"
#include "dsqed/linalg.hpp"
#include "dsqed/probe.hpp"

using namespace dsqed;

namespace {

double now_s() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

Matrix random_matrix(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = Complex(u(rng), u(rng));
    return m;
}

void report(const std::string& name, double serial_s, double parallel_s,
            bool identical) {
    std::printf("%-28s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx   %s\n",
                name.c_str(), serial_s * 1e3, parallel_s * 1e3,
                parallel_s > 0 ? serial_s / parallel_s : 0.0,
                identical ? "results identical" : "RESULTS DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    int reps = 20;
    if (argc > 1) reps = std::max(1, std::atoi(argv[1]));
    std::printf("threads: %d, reps: %d\n", worker_threads(), reps);

    {
        const Matrix a = random_matrix(32, 1), b = random_matrix(32, 2);
        Matrix rs, rp;
        double t0 = now_s();
        for (int r = 0; r < reps; ++r) rs = kernels::kron_serial(a, b);
        double t1 = now_s();
        for (int r = 0; r < reps; ++r) rp = kernels::kron_parallel(a, b);
        double t2 = now_s();
        report("kron 32x32 (x) 32x32", (t1 - t0) / reps, (t2 - t1) / reps,
               max_abs(rs - rp) == 0.0);
    }

    {
        const Matrix m = random_matrix(1024, 3);
        const Matrix vsrc = random_matrix(1024, 4);
        const Vector x = vsrc.col(0);
        Vector ys(1024), yp(1024);
        double t0 = now_s();
        for (int r = 0; r < reps; ++r) kernels::matvec_serial(m, x, ys);
        double t1 = now_s();
        for (int r = 0; r < reps; ++r) kernels::matvec_parallel(m, x, yp);
        double t2 = now_s();
        report("matvec 1024x1024", (t1 - t0) / reps, (t2 - t1) / reps,
               (ys - yp).cwiseAbs().maxCoeff() == 0.0);
    }

    {
        SystemParams p = preset_params("setB");
        p.n1_cutoff = 3;
        p.n2_cutoff = 3;
        Matrix ls, lp;
        set_parallel_enabled(false);
        double t0 = now_s();
        for (int r = 0; r < std::max(1, reps / 4); ++r) ls = build_liouvillian(p);
        double t1 = now_s();
        set_parallel_enabled(true);
        for (int r = 0; r < std::max(1, reps / 4); ++r) lp = build_liouvillian(p);
        double t2 = now_s();
        const int n = std::max(1, reps / 4);
        report("liouvillian build (3,3)", (t1 - t0) / n, (t2 - t1) / n,
               max_abs(ls - lp) == 0.0);
    }

    {
        SystemParams p = preset_params("setB");
        p.n1_cutoff = 2;
        p.n2_cutoff = 2;
        const double eps = 0.01 * effective_params(p).g_eff;
        std::vector<double> grid;
        for (int i = 0; i < 16; ++i) grid.push_back(-0.08 + i * 0.01);
        set_parallel_enabled(false);
        double t0 = now_s();
        ScanResult ss = g2_scan(p, eps, grid, DriveTarget::emitter);
        double t1 = now_s();
        set_parallel_enabled(true);
        ScanResult sp = g2_scan(p, eps, grid, DriveTarget::emitter);
        double t2 = now_s();
        report("g2 scan, 16 points (2,2)", t1 - t0, t2 - t1,
               ss.column("g2") == sp.column("g2"));
    }

    return 0;
}
