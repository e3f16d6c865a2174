#include "emoface/avi_writer.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "emoface/common.hpp"
#include "emoface/image_io.hpp"

namespace emoface {
namespace {

struct ByteBuf {
  std::vector<uint8_t> data;

  size_t pos() const { return data.size(); }
  void bytes(const void* p, size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    data.insert(data.end(), b, b + n);
  }
  void fourcc(const char* tag) { bytes(tag, 4); }
  void u32(uint32_t v) { bytes(&v, 4); }
  void u16(uint16_t v) { bytes(&v, 2); }
  void patch_u32(size_t at, uint32_t v) { std::memcpy(data.data() + at, &v, 4); }

  // Opens a RIFF chunk/list; returns the position of the size field.
  size_t begin(const char* tag) {
    fourcc(tag);
    u32(0);
    return pos() - 4;
  }
  void end(size_t size_pos) {
    patch_u32(size_pos, static_cast<uint32_t>(pos() - size_pos - 4));
    if ((pos() - size_pos) & 1) data.push_back(0);  // even padding
  }
};

struct IndexEntry {
  char tag[4];
  uint32_t offset;  // of the chunk fourcc, relative to 'movi' fourcc
  uint32_t size;
};

}  // namespace

void write_avi_mjpg(const std::filesystem::path& path, const torch::Tensor& frames, int fps,
                    const torch::Tensor& audio, int sample_rate, int jpeg_quality) {
  TORCH_CHECK(frames.dim() == 4 && frames.size(3) == 3 && frames.scalar_type() == torch::kUInt8,
              "write_avi_mjpg expects u8 [T,H,W,3]");
  TORCH_CHECK(fps > 0 && sample_rate > 0, "bad rates");
  const int64_t t_frames = frames.size(0);
  const int h = static_cast<int>(frames.size(1));
  const int w = static_cast<int>(frames.size(2));

  std::vector<std::vector<uint8_t>> jpegs(t_frames);
  uint32_t max_jpeg = 0;
  for (int64_t i = 0; i < t_frames; ++i) {
    jpegs[i] = encode_jpeg_rgb(frames[i], jpeg_quality);
    max_jpeg = std::max<uint32_t>(max_jpeg, static_cast<uint32_t>(jpegs[i].size()));
  }

  auto pcm_f = audio.to(torch::kFloat32).contiguous();
  const int64_t n_samples = pcm_f.numel();
  std::vector<int16_t> pcm(n_samples);
  {
    const float* src = pcm_f.data_ptr<float>();
    for (int64_t i = 0; i < n_samples; ++i) {
      float v = std::clamp(src[i], -1.f, 1.f);
      pcm[i] = static_cast<int16_t>(std::lround(v * 32767.f));
    }
  }

  ByteBuf b;
  auto riff = b.begin("RIFF");
  b.fourcc("AVI ");

  auto hdrl = b.begin("LIST");
  b.fourcc("hdrl");
  {
    auto avih = b.begin("avih");
    b.u32(static_cast<uint32_t>(1000000 / fps));          // dwMicroSecPerFrame
    b.u32(sample_rate * 2 + max_jpeg * fps);              // dwMaxBytesPerSec (rough)
    b.u32(0);                                             // dwPaddingGranularity
    b.u32(0x10 | 0x100);                                  // HASINDEX | ISINTERLEAVED
    b.u32(static_cast<uint32_t>(t_frames));
    b.u32(0);                                             // dwInitialFrames
    b.u32(2);                                             // dwStreams
    b.u32(max_jpeg);                                      // dwSuggestedBufferSize
    b.u32(static_cast<uint32_t>(w));
    b.u32(static_cast<uint32_t>(h));
    for (int i = 0; i < 4; ++i) b.u32(0);
    b.end(avih);

    auto strl_v = b.begin("LIST");
    b.fourcc("strl");
    {
      auto strh = b.begin("strh");
      b.fourcc("vids");
      b.fourcc("MJPG");
      b.u32(0);   // dwFlags
      b.u16(0);   // wPriority
      b.u16(0);   // wLanguage
      b.u32(0);   // dwInitialFrames
      b.u32(1);   // dwScale
      b.u32(static_cast<uint32_t>(fps));  // dwRate
      b.u32(0);   // dwStart
      b.u32(static_cast<uint32_t>(t_frames));
      b.u32(max_jpeg);
      b.u32(10000);  // dwQuality
      b.u32(0);      // dwSampleSize
      b.u16(0); b.u16(0);
      b.u16(static_cast<uint16_t>(w)); b.u16(static_cast<uint16_t>(h));
      b.end(strh);

      auto strf = b.begin("strf");
      b.u32(40);  // biSize
      b.u32(static_cast<uint32_t>(w));
      b.u32(static_cast<uint32_t>(h));
      b.u16(1);   // biPlanes
      b.u16(24);  // biBitCount
      b.fourcc("MJPG");
      b.u32(static_cast<uint32_t>(w * h * 3));
      b.u32(0); b.u32(0); b.u32(0); b.u32(0);
      b.end(strf);
    }
    b.end(strl_v);

    auto strl_a = b.begin("LIST");
    b.fourcc("strl");
    {
      auto strh = b.begin("strh");
      b.fourcc("auds");
      b.u32(0);   // fccHandler
      b.u32(0);
      b.u16(0); b.u16(0);
      b.u32(0);
      b.u32(1);                                     // dwScale
      b.u32(static_cast<uint32_t>(sample_rate));    // dwRate
      b.u32(0);
      b.u32(static_cast<uint32_t>(n_samples));
      b.u32(static_cast<uint32_t>(sample_rate * 2 / fps + 16));
      b.u32(0xFFFFFFFF);  // dwQuality: default
      b.u32(2);           // dwSampleSize (block align)
      b.u16(0); b.u16(0); b.u16(0); b.u16(0);
      b.end(strh);

      auto strf = b.begin("strf");
      b.u16(1);  // WAVE_FORMAT_PCM
      b.u16(1);  // mono
      b.u32(static_cast<uint32_t>(sample_rate));
      b.u32(static_cast<uint32_t>(sample_rate * 2));
      b.u16(2);
      b.u16(16);
      b.end(strf);
    }
    b.end(strl_a);
  }
  b.end(hdrl);

  auto movi = b.begin("LIST");
  const size_t movi_fourcc_pos = b.pos();
  b.fourcc("movi");
  std::vector<IndexEntry> index;
  int64_t audio_written = 0;
  for (int64_t i = 0; i < t_frames; ++i) {
    IndexEntry ev{};
    std::memcpy(ev.tag, "00dc", 4);
    ev.offset = static_cast<uint32_t>(b.pos() - movi_fourcc_pos);
    ev.size = static_cast<uint32_t>(jpegs[i].size());
    index.push_back(ev);
    auto c = b.begin("00dc");
    b.bytes(jpegs[i].data(), jpegs[i].size());
    b.end(c);

    // Audio interleaved per video frame; the last chunk takes any tail.
    int64_t target = (i + 1 == t_frames)
                         ? n_samples
                         : std::min<int64_t>(n_samples, (i + 1) * sample_rate / fps);
    if (target > audio_written) {
      IndexEntry ea{};
      std::memcpy(ea.tag, "01wb", 4);
      ea.offset = static_cast<uint32_t>(b.pos() - movi_fourcc_pos);
      ea.size = static_cast<uint32_t>((target - audio_written) * 2);
      index.push_back(ea);
      auto c2 = b.begin("01wb");
      b.bytes(pcm.data() + audio_written, (target - audio_written) * 2);
      b.end(c2);
      audio_written = target;
    }
  }
  b.end(movi);

  auto idx1 = b.begin("idx1");
  for (const auto& e : index) {
    b.bytes(e.tag, 4);
    b.u32(0x10);  // AVIIF_KEYFRAME
    b.u32(e.offset);
    b.u32(e.size);
  }
  b.end(idx1);
  b.end(riff);

  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for write: " + path.string());
  os.write(reinterpret_cast<const char*>(b.data.data()),
           static_cast<std::streamsize>(b.data.size()));
  if (!os) throw DataError("write failed: " + path.string());
}

}  // namespace emoface
