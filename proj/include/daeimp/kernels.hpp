#pragma once

#include <cstddef>

#include "daeimp/matrix.hpp"

namespace daeimp::kernels {

// Dense kernels behind the network math. Each has a serial reference version
// under kernels::serial and a dispatching version that runs the same loop
// under OpenMP when the product is large enough. Both orders accumulate each
// output element identically, so serial and parallel results are bitwise
// equal; tests rely on that.

namespace serial {

// out = a * b^T       (a: m x k, b: n x k, out: m x n)
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out);
// out = a * b         (a: m x k, b: k x n, out: m x n)
void matmul_nn(const Matrix& a, const Matrix& b, Matrix& out);
// out = a^T * b       (a: k x m, b: k x n, out: m x n)
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out);

// m(i, j) += v[j] for every row i; v.size() == m.cols.
void add_row_vector(Matrix& m, const std::vector<double>& v);

void tanh_inplace(Matrix& m);

// delta(i, j) *= 1 - y(i, j)^2 where y is the tanh output.
void tanh_backward_inplace(Matrix& delta, const Matrix& tanh_out);

// out[j] = sum over rows i of m(i, j).
void column_sums(const Matrix& m, std::vector<double>& out);

} // namespace serial

// Dispatching versions: same contracts as kernels::serial.
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_nn(const Matrix& a, const Matrix& b, Matrix& out);
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out);
void add_row_vector(Matrix& m, const std::vector<double>& v);
void tanh_inplace(Matrix& m);
void tanh_backward_inplace(Matrix& delta, const Matrix& tanh_out);
void column_sums(const Matrix& m, std::vector<double>& out);

// Multiply-add count below which the dispatching kernels stay serial.
// 0 forces the parallel path whenever OpenMP is compiled in.
void set_parallel_grain(std::size_t flops);
std::size_t parallel_grain();

// True when OpenMP is compiled in and more than one thread is available.
bool parallel_available();

} // namespace daeimp::kernels
