#include "emoface/clips.hpp"

#include <nlohmann/json.hpp>
#include <opencv2/imgproc.hpp>
#include <opencv2/videoio.hpp>

#include <fstream>

#include "emoface/tensor_file.hpp"
#include "emoface/wav_io.hpp"

namespace emoface {

using nlohmann::json;

void AlignedClip::validate() const {
  const int64_t t = frames.size(0);
  TORCH_CHECK(t >= 1, "aligned clip has no frames");
  TORCH_CHECK(frames.dim() == 4 && frames.size(1) == kImageSize && frames.size(2) == kImageSize &&
                  frames.size(3) == 3 && frames.scalar_type() == torch::kUInt8,
              "aligned frames must be u8 [T,128,128,3]");
  TORCH_CHECK(std::llabs(audio.numel() - t * kSamplesPerFrame) <= kSamplesPerFrame,
              "audio/video rate lock violated: ", audio.numel(), " samples for ", t, " frames");
  TORCH_CHECK(landmarks.dim() == 3 && landmarks.size(0) == t &&
                  landmarks.size(1) == kNumLandmarks && landmarks.size(2) == 2,
              "landmarks must be [T,68,2]");
}

namespace {

json clip_meta(const AlignedClip& c) {
  return json{{"actor_id", c.actor_id},
              {"sentence_id", c.sentence_id},
              {"emotion", to_string(c.emotion)},
              {"fps", kFps},
              {"sample_rate", kSampleRate},
              {"num_frames", c.frames.size(0)},
              {"src_fps", c.src_fps},
              {"src_sample_rate", c.src_sample_rate}};
}

json read_json_file(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw DataError("cannot open: " + p.string());
  json j;
  is >> j;
  return j;
}

void write_json_file(const std::filesystem::path& p, const json& j) {
  std::ofstream os(p);
  if (!os) throw DataError("cannot open for write: " + p.string());
  os << j.dump(2) << "\n";
}

}  // namespace

void write_aligned_clip(const std::filesystem::path& dir, const AlignedClip& clip) {
  clip.validate();
  std::filesystem::create_directories(dir);
  save_tensor(dir / "frames.ten", clip.frames);
  write_wav(dir / "audio.wav", clip.audio, kSampleRate);
  save_tensor(dir / "landmarks.ten", clip.landmarks.to(torch::kFloat32));
  write_json_file(dir / "meta.json", clip_meta(clip));
}

AlignedClip read_aligned_clip(const std::filesystem::path& dir) {
  AlignedClip c;
  c.frames = load_tensor(dir / "frames.ten");
  auto wav = read_wav(dir / "audio.wav");
  if (wav.sample_rate != kSampleRate)
    throw DataError("aligned clip audio must be 8 kHz: " + dir.string());
  c.audio = wav.samples;
  c.landmarks = load_tensor(dir / "landmarks.ten");
  auto meta = read_json_file(dir / "meta.json");
  c.actor_id = meta.at("actor_id").get<std::string>();
  c.sentence_id = meta.at("sentence_id").get<std::string>();
  c.emotion = parse_emotion_or_throw(meta.at("emotion").get<std::string>());
  c.src_fps = meta.value("src_fps", static_cast<double>(kFps));
  c.src_sample_rate = meta.value("src_sample_rate", kSampleRate);
  c.validate();
  return c;
}

bool is_aligned_clip_dir(const std::filesystem::path& dir) {
  return std::filesystem::exists(dir / "frames.ten") &&
         std::filesystem::exists(dir / "audio.wav") &&
         std::filesystem::exists(dir / "meta.json");
}

void write_raw_clip(const std::filesystem::path& dir, const RawClip& clip) {
  std::filesystem::create_directories(dir);
  save_tensor(dir / "frames.ten", clip.frames);
  write_wav(dir / "audio.wav", clip.audio, clip.sample_rate);
  if (clip.landmarks.defined() && clip.landmarks.numel() > 0)
    save_tensor(dir / "landmarks.ten", clip.landmarks.to(torch::kFloat32));
  write_json_file(dir / "meta.json", json{{"actor_id", clip.actor_id},
                                          {"sentence_id", clip.sentence_id},
                                          {"emotion", to_string(clip.emotion)},
                                          {"fps", clip.fps},
                                          {"sample_rate", clip.sample_rate}});
}

RawClip read_raw_clip(const std::filesystem::path& dir) {
  RawClip c;
  c.frames = load_tensor(dir / "frames.ten");
  auto wav = read_wav(dir / "audio.wav");
  c.audio = wav.samples;
  c.sample_rate = wav.sample_rate;
  if (std::filesystem::exists(dir / "landmarks.ten"))
    c.landmarks = load_tensor(dir / "landmarks.ten").to(torch::kFloat32);
  auto meta = read_json_file(dir / "meta.json");
  c.actor_id = meta.at("actor_id").get<std::string>();
  c.sentence_id = meta.at("sentence_id").get<std::string>();
  c.emotion = parse_emotion_or_throw(meta.at("emotion").get<std::string>());
  c.fps = meta.at("fps").get<double>();
  if (c.frames.size(0) < 1) throw DataError("raw clip has no frames: " + dir.string());
  return c;
}

RawClip read_raw_clip_video(const std::filesystem::path& video_path) {
  cv::VideoCapture cap(video_path.string());
  if (!cap.isOpened()) throw DataError("cannot decode video: " + video_path.string());
  RawClip c;
  c.fps = cap.get(cv::CAP_PROP_FPS);
  std::vector<torch::Tensor> frames;
  cv::Mat bgr;
  while (cap.read(bgr)) {
    cv::Mat rgb;
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
    frames.push_back(
        torch::from_blob(rgb.data, {rgb.rows, rgb.cols, 3}, torch::kUInt8).clone());
  }
  if (frames.empty()) throw DataError("no frames decoded from: " + video_path.string());
  c.frames = torch::stack(frames);

  auto wav_path = video_path;
  wav_path.replace_extension(".wav");
  if (!std::filesystem::exists(wav_path))
    throw DataError("expected sibling audio track: " + wav_path.string());
  auto wav = read_wav(wav_path);
  c.audio = wav.samples;
  c.sample_rate = wav.sample_rate;

  // CREMA-D style stem: <actor>_<sentence>_<EMO>[_<level>]
  auto stem = video_path.stem().string();
  std::vector<std::string> parts;
  size_t pos = 0;
  while (pos <= stem.size()) {
    auto next = stem.find('_', pos);
    if (next == std::string::npos) next = stem.size();
    parts.push_back(stem.substr(pos, next - pos));
    pos = next + 1;
  }
  if (parts.size() < 3)
    throw DataError("cannot parse actor/sentence/emotion from name: " + stem);
  c.actor_id = parts[0];
  c.sentence_id = parts[1];
  c.emotion = parse_emotion_or_throw(parts[2]);
  return c;
}

}  // namespace emoface
