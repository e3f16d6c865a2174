#include "support/synthetic.hpp"

#include <opencv2/imgproc.hpp>

#include <cmath>

#include "emoface/landmarks.hpp"
#include "emoface/manifest.hpp"

namespace emoface::testsupport {

namespace {

struct FaceGeom {
  double cx, cy;        // face center, px
  double ax, ay;        // head half axes
  double eye_dx, eye_y; // eye offsets from center
  double eye_rx, eye_ry;
  double nose_y0, nose_y1;
  double mouth_y, mouth_rx;
  double mouth_open;    // vertical half-opening, px
  double mouth_curve;   // corner lift (+ up, - down), px
  double brow_tilt;     // inner-end lift, px
};

double envelope(double t_sec, uint64_t seed) {
  Rng r(hash_seed(seed, 0xe27));
  const double rate = 2.0 + r.uniform();         // syllables/s
  const double phase = r.uniform(0.0, 6.283185);
  return 0.5 + 0.5 * std::sin(6.283185307179586 * rate * t_sec + phase);
}

FaceGeom face_geometry(const SyntheticSpec& s, int frame) {
  FaceGeom g;
  const double w = s.width, h = s.height;
  g.cx = s.cx_frac * w;
  g.cy = s.cy_frac * h;
  g.ax = 0.30 * w * s.face_scale;
  g.ay = 0.40 * h * s.face_scale;
  g.eye_dx = 0.14 * w * s.face_scale;
  g.eye_y = g.cy - 0.10 * h * s.face_scale;
  g.eye_rx = 0.055 * w * s.face_scale;
  g.eye_ry = 0.030 * h * s.face_scale;
  g.nose_y0 = g.cy - 0.06 * h * s.face_scale;
  g.nose_y1 = g.cy + 0.08 * h * s.face_scale;
  g.mouth_y = g.cy + 0.22 * h * s.face_scale;
  g.mouth_rx = 0.12 * w * s.face_scale;

  const double t_sec = frame / s.fps;
  g.mouth_open = (0.006 + 0.045 * envelope(t_sec, s.seed)) * h * s.face_scale;

  // Emotion-dependent geometry; spacing keeps classes separable.
  switch (s.emotion) {
    case Emotion::kAnger:     g.mouth_curve = -4; g.brow_tilt = -6; break;
    case Emotion::kDisgust:   g.mouth_curve = -2; g.brow_tilt = -2; break;
    case Emotion::kFear:      g.mouth_curve = 0;  g.brow_tilt = 6;  break;
    case Emotion::kHappiness: g.mouth_curve = 6;  g.brow_tilt = 2;  break;
    case Emotion::kNeutral:   g.mouth_curve = 0;  g.brow_tilt = 0;  break;
    case Emotion::kSadness:   g.mouth_curve = -6; g.brow_tilt = 4;  break;
  }
  g.mouth_curve *= s.face_scale;
  g.brow_tilt *= s.face_scale;
  return g;
}

cv::Scalar emotion_tint(Emotion e) {
  switch (e) {  // BGR skin tints
    case Emotion::kAnger:     return {150, 150, 235};
    case Emotion::kDisgust:   return {150, 215, 180};
    case Emotion::kFear:      return {215, 190, 190};
    case Emotion::kHappiness: return {160, 215, 235};
    case Emotion::kNeutral:   return {180, 200, 220};
    case Emotion::kSadness:   return {215, 180, 170};
  }
  return {180, 200, 220};
}

}  // namespace

torch::Tensor synthetic_landmarks(const SyntheticSpec& s, int frame) {
  const FaceGeom g = face_geometry(s, frame);
  auto out = torch::zeros({kNumLandmarks, 2}, torch::kFloat32);
  auto a = out.accessor<float, 2>();
  auto set = [&](int i, double x, double y) {
    a[i][0] = static_cast<float>(x);
    a[i][1] = static_cast<float>(y);
  };

  // 0-16 jaw: lower half of the head ellipse, ear to ear through the chin
  for (int i = 0; i <= 16; ++i) {
    const double theta = 3.141592653589793 * (1.0 - i / 16.0);  // pi..0
    set(i, g.cx - g.ax * std::cos(theta), g.cy + g.ay * std::sin(theta));
  }
  // 17-26 brows (5 points each); brow_tilt lifts the inner ends
  for (int i = 0; i < 5; ++i) {
    const double f = i / 4.0;
    const double y0 = g.eye_y - 2.2 * g.eye_ry - 4.0;
    set(17 + i, g.cx - g.eye_dx - g.eye_rx + 2 * g.eye_rx * f, y0 - g.brow_tilt * f);
    set(22 + i, g.cx + g.eye_dx - g.eye_rx + 2 * g.eye_rx * f, y0 - g.brow_tilt * (1.0 - f));
  }
  // 27-30 nose bridge, 31-35 nose base
  for (int i = 0; i < 4; ++i)
    set(27 + i, g.cx, g.nose_y0 + (g.nose_y1 - g.nose_y0) * i / 3.0);
  for (int i = 0; i < 5; ++i)
    set(31 + i, g.cx - 0.04 * s.width * s.face_scale * (1.0 - i / 2.0), g.nose_y1);
  // 36-41 right eye (image left), 42-47 left eye: 6-point ellipses
  for (int e = 0; e < 2; ++e) {
    const double ecx = g.cx + (e == 0 ? -g.eye_dx : g.eye_dx);
    const int base = 36 + 6 * e;
    const double ang[6] = {180, 240, 300, 0, 60, 120};
    for (int i = 0; i < 6; ++i) {
      const double r = ang[i] * 3.141592653589793 / 180.0;
      set(base + i, ecx + g.eye_rx * std::cos(r), g.eye_y - g.eye_ry * std::sin(r));
    }
  }
  // 48-59 outer mouth ellipse (12 points), 60-67 inner (8 points)
  for (int i = 0; i < 12; ++i) {
    const double r = 3.141592653589793 + i * 3.141592653589793 / 6.0;  // from left corner
    const double x = g.cx + g.mouth_rx * std::cos(r);
    const double y = g.mouth_y + (g.mouth_open + 2.0) * std::sin(r) -
                     g.mouth_curve * std::pow(std::cos(r), 2);
    set(48 + i, x, y);
  }
  for (int i = 0; i < 8; ++i) {
    const double r = 3.141592653589793 + i * 3.141592653589793 / 4.0;
    set(60 + i, g.cx + 0.7 * g.mouth_rx * std::cos(r),
        g.mouth_y + g.mouth_open * std::sin(r) - g.mouth_curve * std::pow(std::cos(r), 2));
  }
  return out;
}

RawClip make_synthetic_raw_clip(const SyntheticSpec& s) {
  RawClip clip;
  clip.fps = s.fps;
  clip.sample_rate = s.sample_rate;
  clip.actor_id = s.actor_id;
  clip.sentence_id = s.sentence_id;
  clip.emotion = s.emotion;

  const double duration = s.frames / s.fps;
  const int64_t n_samples = static_cast<int64_t>(std::llround(duration * s.sample_rate));
  clip.audio = torch::empty({n_samples}, torch::kFloat32);
  {
    Rng r(hash_seed(s.seed, 0xa1d));
    const double f0 = 180.0 + 40.0 * r.uniform() + 10.0 * static_cast<int>(s.emotion);
    float* p = clip.audio.data_ptr<float>();
    for (int64_t i = 0; i < n_samples; ++i) {
      const double t = static_cast<double>(i) / s.sample_rate;
      const double env = envelope(t, s.seed);
      p[i] = static_cast<float>(env * (0.6 * std::sin(6.2831853 * f0 * t) +
                                       0.3 * std::sin(6.2831853 * 2.13 * f0 * t)));
    }
    clip.audio = clip.audio * 0.9f;
  }

  clip.frames = torch::empty({s.frames, s.height, s.width, 3}, torch::kUInt8);
  clip.landmarks = torch::empty({s.frames, kNumLandmarks, 2}, torch::kFloat32);
  for (int f = 0; f < s.frames; ++f) {
    const FaceGeom g = face_geometry(s, f);
    cv::Mat img(s.height, s.width, CV_8UC3, cv::Scalar(40, 44, 52));
    auto tint = emotion_tint(s.emotion);
    cv::ellipse(img, {cvRound(g.cx), cvRound(g.cy)}, {cvRound(g.ax), cvRound(g.ay)}, 0, 0,
                360, tint, cv::FILLED, cv::LINE_AA);
    for (int e = 0; e < 2; ++e) {
      const int ecx = cvRound(g.cx + (e == 0 ? -g.eye_dx : g.eye_dx));
      cv::ellipse(img, {ecx, cvRound(g.eye_y)}, {cvRound(g.eye_rx), cvRound(g.eye_ry)}, 0, 0,
                  360, cv::Scalar(250, 250, 250), cv::FILLED, cv::LINE_AA);
      cv::circle(img, {ecx, cvRound(g.eye_y)}, std::max(1, cvRound(g.eye_ry * 0.6)),
                 cv::Scalar(30, 40, 40), cv::FILLED, cv::LINE_AA);
      // brow
      const double tilt = e == 0 ? g.brow_tilt : -g.brow_tilt;
      cv::line(img,
               {cvRound(ecx - g.eye_rx), cvRound(g.eye_y - 2.2 * g.eye_ry - 4 + tilt / 2)},
               {cvRound(ecx + g.eye_rx), cvRound(g.eye_y - 2.2 * g.eye_ry - 4 - tilt / 2)},
               cv::Scalar(60, 60, 70), 2, cv::LINE_AA);
    }
    cv::line(img, {cvRound(g.cx), cvRound(g.nose_y0)}, {cvRound(g.cx), cvRound(g.nose_y1)},
             cv::Scalar(120, 130, 150), 2, cv::LINE_AA);
    // mouth: dark opening whose height follows the audio envelope, corners
    // lifted/dropped by the emotion
    cv::ellipse(img, {cvRound(g.cx), cvRound(g.mouth_y - g.mouth_curve)},
                {cvRound(g.mouth_rx), std::max(1, cvRound(g.mouth_open + 2))}, 0, 0, 360,
                cv::Scalar(60, 50, 140), cv::FILLED, cv::LINE_AA);
    cv::ellipse(img, {cvRound(g.cx), cvRound(g.mouth_y - g.mouth_curve)},
                {cvRound(0.7 * g.mouth_rx), std::max(1, cvRound(g.mouth_open))}, 0, 0, 360,
                cv::Scalar(25, 20, 45), cv::FILLED, cv::LINE_AA);

    cv::Mat rgb;
    cv::cvtColor(img, rgb, cv::COLOR_BGR2RGB);
    clip.frames[f] =
        torch::from_blob(rgb.data, {s.height, s.width, 3}, torch::kUInt8).clone();
    clip.landmarks[f] = synthetic_landmarks(s, f);
  }
  return clip;
}

AlignedClip make_synthetic_aligned_clip(const SyntheticSpec& spec) {
  auto raw = make_synthetic_raw_clip(spec);
  auto tmpl = make_template_landmarks(raw.landmarks[0]);
  return align_clip(raw, tmpl);
}

Manifest build_synthetic_dataset(const std::filesystem::path& root, int per_emotion,
                                 int frames, uint64_t seed) {
  std::filesystem::create_directories(root);
  for (int e = 0; e < kNumEmotions; ++e) {
    for (int k = 0; k < per_emotion; ++k) {
      SyntheticSpec spec;
      spec.frames = frames;
      spec.emotion = static_cast<Emotion>(e);
      spec.actor_id = "a" + std::to_string(k + 1);
      spec.sentence_id = "s" + std::to_string(e + 1);
      spec.seed = hash_seed(seed, static_cast<uint64_t>(e), static_cast<uint64_t>(k));
      auto clip = make_synthetic_aligned_clip(spec);
      write_aligned_clip(root / clip.id(), clip);
    }
  }
  ManifestOptions mopts;
  mopts.seed = seed;
  auto manifest = build_manifest(root, mopts);
  save_manifest_csv(root / "manifest.csv", manifest);
  return manifest;
}

}  // namespace emoface::testsupport
