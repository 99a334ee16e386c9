#include "daeimp/kernels.hpp"

#include <atomic>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace daeimp::kernels {

namespace {

std::atomic<std::size_t> g_parallel_grain{1u << 16};

void check_nt(const Matrix& a, const Matrix& b, const Matrix& out) {
    if (a.cols != b.cols || out.rows != a.rows || out.cols != b.rows) {
        throw shape_error("matmul_nt: incompatible shapes " + a.shape_str() + " * (" +
                          b.shape_str() + ")^T -> " + out.shape_str());
    }
}

void check_nn(const Matrix& a, const Matrix& b, const Matrix& out) {
    if (a.cols != b.rows || out.rows != a.rows || out.cols != b.cols) {
        throw shape_error("matmul_nn: incompatible shapes " + a.shape_str() + " * " +
                          b.shape_str() + " -> " + out.shape_str());
    }
}

void check_tn(const Matrix& a, const Matrix& b, const Matrix& out) {
    if (a.rows != b.rows || out.rows != a.cols || out.cols != b.cols) {
        throw shape_error("matmul_tn: incompatible shapes (" + a.shape_str() + ")^T * " +
                          b.shape_str() + " -> " + out.shape_str());
    }
}

inline void matmul_nt_row(const Matrix& a, const Matrix& b, Matrix& out, std::size_t i) {
    const double* arow = a.row_ptr(i);
    double* orow = out.row_ptr(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
        const double* brow = b.row_ptr(j);
        double acc = 0.0;
        for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
        orow[j] = acc;
    }
}

inline void matmul_nn_row(const Matrix& a, const Matrix& b, Matrix& out, std::size_t i) {
    const double* arow = a.row_ptr(i);
    double* orow = out.row_ptr(i);
    for (std::size_t j = 0; j < out.cols; ++j) orow[j] = 0.0;
    for (std::size_t k = 0; k < a.cols; ++k) {
        const double av = arow[k];
        const double* brow = b.row_ptr(k);
        for (std::size_t j = 0; j < out.cols; ++j) orow[j] += av * brow[j];
    }
}

inline void matmul_tn_row(const Matrix& a, const Matrix& b, Matrix& out, std::size_t i) {
    // out(i, j) = sum over r of a(r, i) * b(r, j)
    double* orow = out.row_ptr(i);
    for (std::size_t j = 0; j < out.cols; ++j) orow[j] = 0.0;
    for (std::size_t r = 0; r < a.rows; ++r) {
        const double av = a(r, i);
        const double* brow = b.row_ptr(r);
        for (std::size_t j = 0; j < out.cols; ++j) orow[j] += av * brow[j];
    }
}

inline bool go_parallel(std::size_t flops) {
#ifdef _OPENMP
    return flops >= g_parallel_grain.load(std::memory_order_relaxed) &&
           omp_get_max_threads() > 1;
#else
    (void)flops;
    return false;
#endif
}

} // namespace

namespace serial {

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out) {
    check_nt(a, b, out);
    for (std::size_t i = 0; i < a.rows; ++i) matmul_nt_row(a, b, out, i);
}

void matmul_nn(const Matrix& a, const Matrix& b, Matrix& out) {
    check_nn(a, b, out);
    for (std::size_t i = 0; i < a.rows; ++i) matmul_nn_row(a, b, out, i);
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out) {
    check_tn(a, b, out);
    for (std::size_t i = 0; i < out.rows; ++i) matmul_tn_row(a, b, out, i);
}

void add_row_vector(Matrix& m, const std::vector<double>& v) {
    if (v.size() != m.cols) {
        throw shape_error("add_row_vector: vector length " + std::to_string(v.size()) +
                          " vs matrix " + m.shape_str());
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
        double* row = m.row_ptr(i);
        for (std::size_t j = 0; j < m.cols; ++j) row[j] += v[j];
    }
}

void tanh_inplace(Matrix& m) {
    for (double& v : m.data) v = std::tanh(v);
}

void tanh_backward_inplace(Matrix& delta, const Matrix& tanh_out) {
    require_same_shape(delta, tanh_out, "tanh_backward");
    for (std::size_t i = 0; i < delta.data.size(); ++i) {
        const double y = tanh_out.data[i];
        delta.data[i] *= 1.0 - y * y;
    }
}

void column_sums(const Matrix& m, std::vector<double>& out) {
    out.assign(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.row_ptr(i);
        for (std::size_t j = 0; j < m.cols; ++j) out[j] += row[j];
    }
}

} // namespace serial

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& out) {
    check_nt(a, b, out);
    const std::size_t flops = a.rows * b.rows * a.cols;
    if (go_parallel(flops)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(a.rows); ++i) {
            matmul_nt_row(a, b, out, static_cast<std::size_t>(i));
        }
#endif
    } else {
        for (std::size_t i = 0; i < a.rows; ++i) matmul_nt_row(a, b, out, i);
    }
}

void matmul_nn(const Matrix& a, const Matrix& b, Matrix& out) {
    check_nn(a, b, out);
    const std::size_t flops = a.rows * a.cols * b.cols;
    if (go_parallel(flops)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(a.rows); ++i) {
            matmul_nn_row(a, b, out, static_cast<std::size_t>(i));
        }
#endif
    } else {
        for (std::size_t i = 0; i < a.rows; ++i) matmul_nn_row(a, b, out, i);
    }
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& out) {
    check_tn(a, b, out);
    const std::size_t flops = a.rows * a.cols * b.cols;
    if (go_parallel(flops)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(out.rows); ++i) {
            matmul_tn_row(a, b, out, static_cast<std::size_t>(i));
        }
#endif
    } else {
        for (std::size_t i = 0; i < out.rows; ++i) matmul_tn_row(a, b, out, i);
    }
}

void add_row_vector(Matrix& m, const std::vector<double>& v) {
    if (v.size() != m.cols) {
        throw shape_error("add_row_vector: vector length " + std::to_string(v.size()) +
                          " vs matrix " + m.shape_str());
    }
    if (go_parallel(m.data.size())) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(m.rows); ++i) {
            double* row = m.row_ptr(static_cast<std::size_t>(i));
            for (std::size_t j = 0; j < m.cols; ++j) row[j] += v[j];
        }
#endif
    } else {
        serial::add_row_vector(m, v);
    }
}

void tanh_inplace(Matrix& m) {
    if (go_parallel(m.data.size() * 8)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(m.data.size()); ++i) {
            m.data[static_cast<std::size_t>(i)] = std::tanh(m.data[static_cast<std::size_t>(i)]);
        }
#endif
    } else {
        serial::tanh_inplace(m);
    }
}

void tanh_backward_inplace(Matrix& delta, const Matrix& tanh_out) {
    require_same_shape(delta, tanh_out, "tanh_backward");
    if (go_parallel(delta.data.size())) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(delta.data.size()); ++i) {
            const double y = tanh_out.data[static_cast<std::size_t>(i)];
            delta.data[static_cast<std::size_t>(i)] *= 1.0 - y * y;
        }
#endif
    } else {
        serial::tanh_backward_inplace(delta, tanh_out);
    }
}

void column_sums(const Matrix& m, std::vector<double>& out) {
    // Column-major accumulation order must match the serial kernel, so the
    // parallel split is over columns.
    out.assign(m.cols, 0.0);
    if (go_parallel(m.data.size()) && m.cols > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < static_cast<long long>(m.cols); ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m.rows; ++i) acc += m(i, static_cast<std::size_t>(j));
            out[static_cast<std::size_t>(j)] = acc;
        }
#endif
    } else {
        serial::column_sums(m, out);
    }
}

void set_parallel_grain(std::size_t flops) {
    g_parallel_grain.store(flops, std::memory_order_relaxed);
}

std::size_t parallel_grain() { return g_parallel_grain.load(std::memory_order_relaxed); }

bool parallel_available() {
#ifdef _OPENMP
    return omp_get_max_threads() > 1;
#else
    return false;
#endif
}

} // namespace daeimp::kernels
