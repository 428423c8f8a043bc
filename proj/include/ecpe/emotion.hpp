#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace ecpe {

// Plutchik's eight basic emotions. The numeric order is the fixed label
// order used by model outputs, cause-scorer input blocks and reports.
enum class Emotion : std::size_t {
    Anger = 0,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
};

inline constexpr std::size_t kNumEmotions = 8;

inline constexpr std::array<Emotion, kNumEmotions> kAllEmotions = {
    Emotion::Anger, Emotion::Anticipation, Emotion::Disgust, Emotion::Fear,
    Emotion::Joy,   Emotion::Sadness,      Emotion::Surprise, Emotion::Trust,
};

std::string_view emotion_name(Emotion e);

// Case-insensitive; nullopt for anything outside the eight labels.
std::optional<Emotion> parse_emotion(std::string_view name);

inline constexpr std::size_t index_of(Emotion e) { return static_cast<std::size_t>(e); }

}  // namespace ecpe
