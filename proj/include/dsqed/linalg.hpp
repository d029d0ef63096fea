#pragma once

#include <complex>
#include <Eigen/Dense>

namespace dsqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Runtime switch between the OpenMP kernels and the serial reference path.
// Both paths produce bit-identical results; the switch exists for testing
// and benchmarking.
bool parallel_enabled();
void set_parallel_enabled(bool on);
int worker_threads();

namespace kernels {

// Kronecker product, result(i*rb+k, j*cb+l) = a(i,j)*b(k,l).
Matrix kron_serial(const Matrix& a, const Matrix& b);
Matrix kron_parallel(const Matrix& a, const Matrix& b);

// Dense matrix-vector product y = m*x accumulated over fixed-size column
// blocks so the summation order (and hence the rounding) is independent of
// the thread count.
void matvec_serial(const Matrix& m, const Vector& x, Vector& y);
void matvec_parallel(const Matrix& m, const Vector& x, Vector& y);

// Evaluates fn(i) for i in [0, n); iterations must be independent.
void map_index_serial(int n, const std::function<void(int)>& fn);
void map_index_parallel(int n, const std::function<void(int)>& fn);

} // namespace kernels

// Dispatching wrappers honouring parallel_enabled().
Matrix kron(const Matrix& a, const Matrix& b);
void matvec(const Matrix& m, const Vector& x, Vector& y);
void map_index(int n, const std::function<void(int)>& fn);

// Column-stacking vectorization of a square matrix and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v);

Matrix hermitize(const Matrix& m);
double max_abs(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol);

} // namespace dsqed
