#include "ecpe/projection.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ecpe/error.hpp"

namespace ecpe {

std::vector<std::array<double, 2>> project_2d(std::span<const std::vector<double>> points)
{
    std::vector<std::array<double, 2>> out(points.size(), {0.0, 0.0});
    if (points.size() < 2) return out;
    const auto n = static_cast<Eigen::Index>(points.size());
    const auto d = static_cast<Eigen::Index>(points.front().size());
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(p.size()) != d) throw DataError("project_2d: points differ in dimension");
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = p[static_cast<std::size_t>(j)];
    }
    x.rowwise() -= x.colwise().mean();
    const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw DataError("project_2d: eigen decomposition failed");

    // Eigenvalues come back ascending.
    for (int axis = 0; axis < 2 && axis < d; ++axis) {
        const Eigen::Index col = d - 1 - axis;
        if (solver.eigenvalues()(col) <= 1e-12) continue;
        Eigen::VectorXd v = solver.eigenvectors().col(col);
        Eigen::Index arg;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        const Eigen::VectorXd proj = x * v;
        for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(axis)] = proj(i);
    }
    return out;
}

}  // namespace ecpe
