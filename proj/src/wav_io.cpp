#include "emoface/wav_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <vector>

#include "emoface/common.hpp"

namespace emoface {
namespace {

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open wav: " + path.string());
  char tag[4];
  is.read(tag, 4);
  if (std::memcmp(tag, "RIFF", 4) != 0) throw DataError("not a RIFF file: " + path.string());
  get<uint32_t>(is);
  is.read(tag, 4);
  if (std::memcmp(tag, "WAVE", 4) != 0) throw DataError("not a WAVE file: " + path.string());

  int channels = 0, rate = 0, bits = 0;
  std::vector<int16_t> pcm;
  while (is.read(tag, 4)) {
    uint32_t size = get<uint32_t>(is);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      uint16_t fmt = get<uint16_t>(is);
      channels = get<uint16_t>(is);
      rate = static_cast<int>(get<uint32_t>(is));
      get<uint32_t>(is);  // byte rate
      get<uint16_t>(is);  // block align
      bits = get<uint16_t>(is);
      if (size > 16) is.seekg(size - 16, std::ios::cur);
      if (fmt != 1 || bits != 16)
        throw DataError("only 16-bit PCM wav supported: " + path.string());
    } else if (std::memcmp(tag, "data", 4) == 0) {
      pcm.resize(size / 2);
      is.read(reinterpret_cast<char*>(pcm.data()), size);
      break;
    } else {
      is.seekg(size + (size & 1), std::ios::cur);
    }
  }
  if (channels <= 0 || rate <= 0 || pcm.empty())
    throw DataError("malformed or empty wav: " + path.string());

  int64_t frames = static_cast<int64_t>(pcm.size()) / channels;
  auto out = torch::empty({frames}, torch::kFloat32);
  float* dst = out.data_ptr<float>();
  for (int64_t i = 0; i < frames; ++i) {
    float acc = 0.f;
    for (int c = 0; c < channels; ++c) acc += pcm[i * channels + c] / 32768.f;
    dst[i] = acc / channels;
  }
  return {out, rate};
}

void write_wav(const std::filesystem::path& path, const torch::Tensor& samples, int sample_rate) {
  auto s = samples.to(torch::kFloat32).contiguous();
  TORCH_CHECK(s.dim() == 1, "write_wav expects a 1-D tensor");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for write: " + path.string());
  uint32_t n = static_cast<uint32_t>(s.numel());
  uint32_t data_bytes = n * 2;
  os.write("RIFF", 4);
  put<uint32_t>(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put<uint32_t>(os, 16);
  put<uint16_t>(os, 1);  // PCM
  put<uint16_t>(os, 1);  // mono
  put<uint32_t>(os, static_cast<uint32_t>(sample_rate));
  put<uint32_t>(os, static_cast<uint32_t>(sample_rate * 2));
  put<uint16_t>(os, 2);
  put<uint16_t>(os, 16);
  os.write("data", 4);
  put<uint32_t>(os, data_bytes);
  const float* src = s.data_ptr<float>();
  for (uint32_t i = 0; i < n; ++i) {
    float v = std::clamp(src[i], -1.f, 1.f);
    put<int16_t>(os, static_cast<int16_t>(std::lround(v * 32767.f)));
  }
}

torch::Tensor resample_audio(const torch::Tensor& samples, int rate_in, int rate_out) {
  TORCH_CHECK(rate_in > 0 && rate_out > 0, "bad sample rates");
  auto x = samples.to(torch::kFloat32).contiguous();
  if (rate_in == rate_out) return x;

  const int64_t n_in = x.numel();
  const int64_t n_out = static_cast<int64_t>(std::llround(
      static_cast<double>(n_in) * rate_out / rate_in));
  const double ratio = static_cast<double>(rate_in) / rate_out;
  // Low-pass at the smaller Nyquist when downsampling.
  const double cutoff = std::min(1.0, static_cast<double>(rate_out) / rate_in);
  const int taps = 32;

  auto out = torch::zeros({n_out}, torch::kFloat32);
  const float* in = x.data_ptr<float>();
  float* dst = out.data_ptr<float>();
  for (int64_t i = 0; i < n_out; ++i) {
    const double center = i * ratio;
    const int64_t lo = static_cast<int64_t>(std::floor(center)) - taps + 1;
    const int64_t hi = static_cast<int64_t>(std::floor(center)) + taps;
    double acc = 0.0;
    for (int64_t j = std::max<int64_t>(lo, 0); j <= std::min<int64_t>(hi, n_in - 1); ++j) {
      const double t = (j - center) * cutoff;
      double sinc = (t == 0.0) ? 1.0 : std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
      const double u = (j - center) / taps;
      const double hann = 0.5 * (1.0 + std::cos(std::numbers::pi * u));
      acc += in[j] * sinc * hann * cutoff;
    }
    dst[i] = static_cast<float>(acc);
  }
  return out;
}

torch::Tensor peak_normalize(const torch::Tensor& samples) {
  auto x = samples.to(torch::kFloat32);
  auto peak = x.abs().max().item<float>();
  if (peak <= 0.f) return x;
  return x / peak;
}

}  // namespace emoface
