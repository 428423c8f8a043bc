#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecpe/nn.hpp"

namespace ecpe {

inline constexpr double kGradCheckEps = 1e-4;
inline constexpr double kGradCheckTolerance = 1e-4;

struct NamedGradCheck {
    std::string name;
    std::uint64_t seed;
    nn::GradCheckResult result;
};

// Toy-scale finite-difference checks, one per layer type and one per full
// architecture (input dim 6, hidden 4, widths 5/8 and 5/1).
nn::GradCheckResult check_linear_elu_nll(std::uint64_t seed);
nn::GradCheckResult check_lstm(std::uint64_t seed);
nn::GradCheckResult check_bilstm(std::uint64_t seed);
nn::GradCheckResult check_emotion_architecture(std::uint64_t seed);
nn::GradCheckResult check_cause_architecture(std::uint64_t seed);

std::vector<NamedGradCheck> run_gradient_checks(const std::vector<std::uint64_t>& seeds);

}  // namespace ecpe
