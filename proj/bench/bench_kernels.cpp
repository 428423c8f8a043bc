// Serial reference vs OpenMP variants of the hot kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "ecpe/kernels.hpp"
#include "ecpe/nn.hpp"

namespace {

using namespace ecpe;

std::vector<double> random_values(std::size_t n, std::uint64_t seed)
{
    nn::Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

// Gate block of an LSTM layer: 4 * hidden rows.
template <auto Kernel>
void BM_Matvec(benchmark::State& state)
{
    const auto hidden = static_cast<std::size_t>(state.range(0));
    const std::size_t rows = 4 * hidden, cols = hidden;
    const auto w = random_values(rows * cols, 1);
    const auto x = random_values(cols, 2);
    std::vector<double> y(rows, 0.0);
    for (auto _ : state) {
        Kernel(kernels::ConstMatrixView{w, rows, cols}, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * rows * cols));
}
BENCHMARK(BM_Matvec<kernels::matvec_add_serial>)->Name("matvec/serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Matvec<kernels::matvec_add_parallel>)->Name("matvec/omp")->Arg(64)->Arg(256)->Arg(1024);

template <auto Kernel>
void BM_Outer(benchmark::State& state)
{
    const auto hidden = static_cast<std::size_t>(state.range(0));
    const std::size_t rows = 4 * hidden, cols = hidden;
    const auto u = random_values(rows, 3);
    const auto v = random_values(cols, 4);
    std::vector<double> g(rows * cols, 0.0);
    for (auto _ : state) {
        Kernel(u, v, kernels::MatrixView{g, rows, cols});
        benchmark::DoNotOptimize(g.data());
    }
}
BENCHMARK(BM_Outer<kernels::outer_add_serial>)->Name("outer/serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Outer<kernels::outer_add_parallel>)->Name("outer/omp")->Arg(64)->Arg(256)->Arg(1024);

// Vocabulary x emotion-word similarity matrix at d = 300.
template <auto Kernel>
void BM_CosineMatrix(benchmark::State& state)
{
    const auto vocab = static_cast<std::size_t>(state.range(0));
    const std::size_t emotion_words = 200, d = 300;
    const auto a = random_values(vocab * d, 5);
    const auto b = random_values(emotion_words * d, 6);
    for (auto _ : state) {
        auto out = Kernel(kernels::ConstMatrixView{a, vocab, d}, kernels::ConstMatrixView{b, emotion_words, d});
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_CosineMatrix<kernels::cosine_matrix_serial>)->Name("cosine_matrix/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_CosineMatrix<kernels::cosine_matrix_parallel>)->Name("cosine_matrix/omp")->Arg(1000)->Arg(10000);

// Pairwise clause distances at 2d = 600.
template <auto Kernel>
void BM_Distances(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 600;
    const auto a = random_values(n * d, 7);
    for (auto _ : state) {
        auto out = Kernel(kernels::ConstMatrixView{a, n, d});
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_Distances<kernels::cosine_distance_matrix_serial>)->Name("distances/serial")->Arg(100)->Arg(1000);
BENCHMARK(BM_Distances<kernels::cosine_distance_matrix_parallel>)->Name("distances/omp")->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
