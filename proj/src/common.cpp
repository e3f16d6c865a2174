#include "emoface/common.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <cctype>

namespace emoface {

const std::vector<std::string>& emotion_names() {
  static const std::vector<std::string> names = {"anger",     "disgust", "fear",
                                                 "happiness", "neutral", "sadness"};
  return names;
}

std::string to_string(Emotion e) { return emotion_names().at(static_cast<int>(e)); }

std::optional<Emotion> parse_emotion(const std::string& s) {
  std::string low = s;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const auto& names = emotion_names();
  for (int i = 0; i < kNumEmotions; ++i) {
    if (low == names[i]) return static_cast<Emotion>(i);
  }
  static const std::array<std::string, 6> codes = {"ang", "dis", "fea", "hap", "neu", "sad"};
  for (int i = 0; i < kNumEmotions; ++i) {
    if (low == codes[i]) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

Emotion parse_emotion_or_throw(const std::string& s) {
  auto e = parse_emotion(s);
  if (!e) {
    std::string msg = "unknown emotion '" + s + "'; valid names:";
    for (const auto& n : emotion_names()) msg += " " + n;
    throw ConfigError(msg);
  }
  return *e;
}

uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ull;
  uint64_t x = state_;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int64_t Rng::randint(int64_t n) {
  return n <= 0 ? 0 : static_cast<int64_t>(next() % static_cast<uint64_t>(n));
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 <= 1e-300) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

uint64_t hash_seed(uint64_t a, uint64_t b, uint64_t c) {
  uint64_t x = a * 0x9e3779b97f4a7c15ull + b * 0xbf58476d1ce4e5b9ull + c * 0x94d049bb133111ebull;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

}  // namespace emoface
