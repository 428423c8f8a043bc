#include "ecpe/emotion.hpp"

#include <cctype>
#include <string>

namespace ecpe {

namespace {
constexpr std::array<std::string_view, kNumEmotions> kNames = {
    "anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust",
};
}

std::string_view emotion_name(Emotion e) { return kNames[index_of(e)]; }

std::optional<Emotion> parse_emotion(std::string_view name)
{
    std::string lower(name);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (std::size_t i = 0; i < kNumEmotions; ++i)
        if (kNames[i] == lower) return static_cast<Emotion>(i);
    return std::nullopt;
}

}  // namespace ecpe
