#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace emoface {

// Fixed output format of the whole pipeline.
inline constexpr int kFps = 25;
inline constexpr int kSampleRate = 8000;
inline constexpr int kSamplesPerFrame = kSampleRate / kFps;  // 320
inline constexpr int kImageSize = 128;
inline constexpr int kNumLandmarks = 68;
inline constexpr int kWindowFrames = 32;
inline constexpr int kWindowSamples = kWindowFrames * kSamplesPerFrame;  // 10240

// Categorical emotions, indexed alphabetically. Index 6 is the extra "fake"
// class used by the emotion discriminator only.
enum class Emotion : int {
  kAnger = 0,
  kDisgust = 1,
  kFear = 2,
  kHappiness = 3,
  kNeutral = 4,
  kSadness = 5,
};

inline constexpr int kNumEmotions = 6;
inline constexpr int kFakeClass = 6;

const std::vector<std::string>& emotion_names();
std::string to_string(Emotion e);

// Accepts full names ("anger", "Happiness") and CREMA-D codes ("ANG", "HAP"),
// case-insensitively. Returns nullopt for anything else.
std::optional<Emotion> parse_emotion(const std::string& s);
Emotion parse_emotion_or_throw(const std::string& s);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when a training step produces a non-finite loss; carries the name of
// the offending term in what().
struct TrainAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// splitmix64; used to derive independent per-(iteration, slot) RNG streams
// from one base seed so that sampling is stateless and resumable.
uint64_t hash_seed(uint64_t a, uint64_t b = 0x9e3779b97f4a7c15ull, uint64_t c = 0);

// Deterministic RNG with explicit distributions (std:: distributions are
// implementation-defined, which would break cross-toolchain reproducibility).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x106689d45497fdb5ull) {}

  uint64_t next();                        // splitmix64 stream
  double uniform();                       // [0,1)
  double uniform(double lo, double hi);   // [lo,hi)
  int64_t randint(int64_t n);             // [0,n)
  double normal();                        // standard normal (Box-Muller)

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace emoface
