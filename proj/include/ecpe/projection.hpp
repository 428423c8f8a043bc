#pragma once

#include <array>
#include <span>
#include <vector>

namespace ecpe {

// Projects points onto their first two principal components (centred data).
// Component signs are fixed so the largest-magnitude loading is positive.
// Fewer than two points, or a degenerate spread, yields zeros on the
// missing axes.
std::vector<std::array<double, 2>> project_2d(std::span<const std::vector<double>> points);

}  // namespace ecpe
