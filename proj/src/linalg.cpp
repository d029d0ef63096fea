#include "dsqed/linalg.hpp"

#include <atomic>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dsqed {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() {
#ifdef _OPENMP
    return g_parallel.load();
#else
    return false;
#endif
}

void set_parallel_enabled(bool on) { g_parallel.store(on); }

int worker_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace kernels {

Matrix kron_serial(const Matrix& a, const Matrix& b) {
    const Eigen::Index ra = a.rows(), ca = a.cols();
    const Eigen::Index rb = b.rows(), cb = b.cols();
    Matrix c(ra * rb, ca * cb);
    for (Eigen::Index col = 0; col < ca * cb; ++col) {
        const Eigen::Index j = col / cb, l = col % cb;
        for (Eigen::Index i = 0; i < ra; ++i)
            c.block(i * rb, col, rb, 1) = a(i, j) * b.col(l);
    }
    return c;
}

Matrix kron_parallel(const Matrix& a, const Matrix& b) {
    const Eigen::Index ra = a.rows(), ca = a.cols();
    const Eigen::Index rb = b.rows(), cb = b.cols();
    Matrix c(ra * rb, ca * cb);
#pragma omp parallel for schedule(static)
    for (Eigen::Index col = 0; col < ca * cb; ++col) {
        const Eigen::Index j = col / cb, l = col % cb;
        for (Eigen::Index i = 0; i < ra; ++i)
            c.block(i * rb, col, rb, 1) = a(i, j) * b.col(l);
    }
    return c;
}

namespace {
constexpr Eigen::Index kMatvecBlock = 64;

// Partial products over fixed column blocks; the final block-ordered sum
// makes the rounding independent of how the blocks were scheduled.
void matvec_blocked(const Matrix& m, const Vector& x, Vector& y, bool parallel) {
    const Eigen::Index n = m.rows(), nc = m.cols();
    const Eigen::Index nblocks = (nc + kMatvecBlock - 1) / kMatvecBlock;
    if (nblocks <= 1) {
        y.noalias() = m * x;
        return;
    }
    std::vector<Vector> partial(static_cast<size_t>(nblocks));
    auto run_block = [&](Eigen::Index b) {
        const Eigen::Index c0 = b * kMatvecBlock;
        const Eigen::Index w = std::min(kMatvecBlock, nc - c0);
        partial[static_cast<size_t>(b)].noalias() =
            m.middleCols(c0, w) * x.segment(c0, w);
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (Eigen::Index b = 0; b < nblocks; ++b) run_block(b);
    } else {
        for (Eigen::Index b = 0; b < nblocks; ++b) run_block(b);
    }
    y = partial[0];
    for (Eigen::Index b = 1; b < nblocks; ++b) y += partial[static_cast<size_t>(b)];
}
} // namespace

void matvec_serial(const Matrix& m, const Vector& x, Vector& y) {
    matvec_blocked(m, x, y, false);
}

void matvec_parallel(const Matrix& m, const Vector& x, Vector& y) {
    matvec_blocked(m, x, y, true);
}

void map_index_serial(int n, const std::function<void(int)>& fn) {
    for (int i = 0; i < n; ++i) fn(i);
}

void map_index_parallel(int n, const std::function<void(int)>& fn) {
    std::exception_ptr error;
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        if (failed.load()) continue;
        try {
            fn(i);
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

} // namespace kernels

Matrix kron(const Matrix& a, const Matrix& b) {
    return parallel_enabled() ? kernels::kron_parallel(a, b)
                              : kernels::kron_serial(a, b);
}

void matvec(const Matrix& m, const Vector& x, Vector& y) {
    if (parallel_enabled())
        kernels::matvec_parallel(m, x, y);
    else
        kernels::matvec_serial(m, x, y);
}

void map_index(int n, const std::function<void(int)>& fn) {
    if (parallel_enabled())
        kernels::map_index_parallel(n, fn);
    else
        kernels::map_index_serial(n, fn);
}

Vector vec(const Matrix& m) {
    return Vector::Map(m.data(), m.size());
}

Matrix unvec(const Vector& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    return Matrix::Map(v.data(), n, n);
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
    return max_abs(m - m.adjoint()) <= tol;
}

} // namespace dsqed
