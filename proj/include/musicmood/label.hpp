#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace musicmood {

// Happy is the positive class for every metric.
enum class MoodLabel : std::uint8_t { Happy = 0, Sad = 1 };

inline constexpr std::array<MoodLabel, 2> kLabels{MoodLabel::Happy, MoodLabel::Sad};

constexpr std::size_t label_index(MoodLabel label) { return static_cast<std::size_t>(label); }

constexpr std::string_view to_string(MoodLabel label) {
  return label == MoodLabel::Happy ? "happy" : "sad";
}

// Case-insensitive "happy"/"sad". Anything else, including the empty string,
// yields nullopt; callers decide whether empty means "unlabeled".
inline std::optional<MoodLabel> parse_label(std::string_view text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    lowered.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  if (lowered == "happy") return MoodLabel::Happy;
  if (lowered == "sad") return MoodLabel::Sad;
  return std::nullopt;
}

}  // namespace musicmood
