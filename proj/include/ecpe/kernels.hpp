#pragma once

// Dense data-parallel kernels shared by the embedding, neural and
// clustering code. Every kernel has a serial reference and an OpenMP
// variant; the two produce bit-identical results because each output
// element is reduced in the same order regardless of thread schedule.
// The unsuffixed entry points pick a variant by problem size.

#include <cstddef>
#include <span>
#include <vector>

namespace ecpe::kernels {

// Row-major read-only view of a rows x cols block.
struct ConstMatrixView {
    std::span<const double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::span<const double> row(std::size_t r) const { return data.subspan(r * cols, cols); }
};

struct MatrixView {
    std::span<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

// y += W x
void matvec_add_serial(ConstMatrixView w, std::span<const double> x, std::span<double> y);
void matvec_add_parallel(ConstMatrixView w, std::span<const double> x, std::span<double> y);
void matvec_add(ConstMatrixView w, std::span<const double> x, std::span<double> y);

// x += W^T y
void matvec_transposed_add_serial(ConstMatrixView w, std::span<const double> y, std::span<double> x);
void matvec_transposed_add_parallel(ConstMatrixView w, std::span<const double> y, std::span<double> x);
void matvec_transposed_add(ConstMatrixView w, std::span<const double> y, std::span<double> x);

// G += u v^T
void outer_add_serial(std::span<const double> u, std::span<const double> v, MatrixView g);
void outer_add_parallel(std::span<const double> u, std::span<const double> v, MatrixView g);
void outer_add(std::span<const double> u, std::span<const double> v, MatrixView g);

// out(i, j) = cos(a_i, b_j); out is a.rows x b.rows, row-major.
// Rows must be nonzero.
std::vector<double> cosine_matrix_serial(ConstMatrixView a, ConstMatrixView b);
std::vector<double> cosine_matrix_parallel(ConstMatrixView a, ConstMatrixView b);
std::vector<double> cosine_matrix(ConstMatrixView a, ConstMatrixView b);

// Symmetric n x n matrix of 1 - cos(a_i, a_j), zero diagonal.
std::vector<double> cosine_distance_matrix_serial(ConstMatrixView a);
std::vector<double> cosine_distance_matrix_parallel(ConstMatrixView a);
std::vector<double> cosine_distance_matrix(ConstMatrixView a);

// Multiply-adds below which the dispatchers stay serial.
inline constexpr std::size_t kParallelWorkThreshold = std::size_t{1} << 17;

bool parallel_available();

}  // namespace ecpe::kernels
