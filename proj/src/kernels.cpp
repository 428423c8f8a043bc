#include "ecpe/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ecpe::kernels {

namespace {

bool worth_parallel(std::size_t work)
{
    return work >= kParallelWorkThreshold && parallel_available();
}

// Shared by the serial and parallel cosine kernels so that both produce
// exactly the same bits as the scalar routine in embeddings.
inline double cosine_from_parts(double ab, double na, double nb)
{
    return std::clamp(ab / (na * nb), -1.0, 1.0);
}

std::vector<double> row_norms(ConstMatrixView a)
{
    std::vector<double> out(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) out[i] = norm(a.row(i));
    return out;
}

}  // namespace

bool parallel_available()
{
#ifdef _OPENMP
    return omp_get_max_threads() > 1;
#else
    return false;
#endif
}

double dot(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void matvec_add_serial(ConstMatrixView w, std::span<const double> x, std::span<double> y)
{
    assert(x.size() == w.cols && y.size() == w.rows);
    for (std::size_t r = 0; r < w.rows; ++r) y[r] += dot(w.row(r), x);
}

void matvec_add_parallel(ConstMatrixView w, std::span<const double> x, std::span<double> y)
{
    assert(x.size() == w.cols && y.size() == w.rows);
    const auto rows = static_cast<std::int64_t>(w.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        y[ur] += dot(w.row(ur), x);
    }
}

void matvec_add(ConstMatrixView w, std::span<const double> x, std::span<double> y)
{
    if (worth_parallel(w.rows * w.cols))
        matvec_add_parallel(w, x, y);
    else
        matvec_add_serial(w, x, y);
}

void matvec_transposed_add_serial(ConstMatrixView w, std::span<const double> y, std::span<double> x)
{
    assert(y.size() == w.rows && x.size() == w.cols);
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double yr = y[r];
        const double* row = w.data.data() + r * w.cols;
        for (std::size_t c = 0; c < w.cols; ++c) x[c] += row[c] * yr;
    }
}

void matvec_transposed_add_parallel(ConstMatrixView w, std::span<const double> y, std::span<double> x)
{
    assert(y.size() == w.rows && x.size() == w.cols);
    const auto cols = static_cast<std::int64_t>(w.cols);
    // Per column, rows are accumulated in ascending order, same as serial.
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < cols; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        double acc = x[uc];
        for (std::size_t r = 0; r < w.rows; ++r) acc += w.data[r * w.cols + uc] * y[r];
        x[uc] = acc;
    }
}

void matvec_transposed_add(ConstMatrixView w, std::span<const double> y, std::span<double> x)
{
    if (worth_parallel(w.rows * w.cols))
        matvec_transposed_add_parallel(w, y, x);
    else
        matvec_transposed_add_serial(w, y, x);
}

void outer_add_serial(std::span<const double> u, std::span<const double> v, MatrixView g)
{
    assert(u.size() == g.rows && v.size() == g.cols);
    for (std::size_t r = 0; r < g.rows; ++r) {
        const double ur = u[r];
        if (ur == 0.0) continue;
        double* row = g.data.data() + r * g.cols;
        for (std::size_t c = 0; c < g.cols; ++c) row[c] += ur * v[c];
    }
}

void outer_add_parallel(std::span<const double> u, std::span<const double> v, MatrixView g)
{
    assert(u.size() == g.rows && v.size() == g.cols);
    const auto rows = static_cast<std::int64_t>(g.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
        const double ur = u[static_cast<std::size_t>(r)];
        if (ur == 0.0) continue;
        double* row = g.data.data() + static_cast<std::size_t>(r) * g.cols;
        for (std::size_t c = 0; c < g.cols; ++c) row[c] += ur * v[c];
    }
}

void outer_add(std::span<const double> u, std::span<const double> v, MatrixView g)
{
    if (worth_parallel(g.rows * g.cols))
        outer_add_parallel(u, v, g);
    else
        outer_add_serial(u, v, g);
}

std::vector<double> cosine_matrix_serial(ConstMatrixView a, ConstMatrixView b)
{
    assert(a.cols == b.cols);
    const auto na = row_norms(a);
    const auto nb = row_norms(b);
    std::vector<double> out(a.rows * b.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.rows; ++j)
            out[i * b.rows + j] = cosine_from_parts(dot(a.row(i), b.row(j)), na[i], nb[j]);
    return out;
}

std::vector<double> cosine_matrix_parallel(ConstMatrixView a, ConstMatrixView b)
{
    assert(a.cols == b.cols);
    const auto na = row_norms(a);
    const auto nb = row_norms(b);
    std::vector<double> out(a.rows * b.rows);
    const auto rows = static_cast<std::int64_t>(a.rows);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t si = 0; si < rows; ++si) {
        const auto i = static_cast<std::size_t>(si);
        for (std::size_t j = 0; j < b.rows; ++j)
            out[i * b.rows + j] = cosine_from_parts(dot(a.row(i), b.row(j)), na[i], nb[j]);
    }
    return out;
}

std::vector<double> cosine_matrix(ConstMatrixView a, ConstMatrixView b)
{
    if (worth_parallel(a.rows * b.rows * a.cols)) return cosine_matrix_parallel(a, b);
    return cosine_matrix_serial(a, b);
}

std::vector<double> cosine_distance_matrix_serial(ConstMatrixView a)
{
    const auto n = a.rows;
    const auto na = row_norms(a);
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = 1.0 - cosine_from_parts(dot(a.row(i), a.row(j)), na[i], na[j]);
            out[i * n + j] = d;
            out[j * n + i] = d;
        }
    return out;
}

std::vector<double> cosine_distance_matrix_parallel(ConstMatrixView a)
{
    const auto n = a.rows;
    const auto na = row_norms(a);
    std::vector<double> out(n * n, 0.0);
    const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t si = 0; si < rows; ++si) {
        const auto i = static_cast<std::size_t>(si);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = 1.0 - cosine_from_parts(dot(a.row(i), a.row(j)), na[i], na[j]);
            out[i * n + j] = d;
            out[j * n + i] = d;
        }
    }
    return out;
}

std::vector<double> cosine_distance_matrix(ConstMatrixView a)
{
    if (worth_parallel(a.rows * a.rows * a.cols / 2)) return cosine_distance_matrix_parallel(a);
    return cosine_distance_matrix_serial(a);
}

}  // namespace ecpe::kernels
