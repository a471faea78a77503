#include "egoact/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace egoact {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

Rect clip_to_frame(Rect r, double frame_w, double frame_h) {
  double x0 = std::clamp(r.x, 0.0, frame_w);
  double y0 = std::clamp(r.y, 0.0, frame_h);
  double x1 = std::clamp(r.x2(), 0.0, frame_w);
  double y1 = std::clamp(r.y2(), 0.0, frame_h);
  return {x0, y0, x1 - x0, y1 - y0};
}

// Widen a degenerate side to 1 px, shifting back inside the frame if needed.
Rect inflate_degenerate(Rect r, double frame_w, double frame_h) {
  if (r.w < 1.0) {
    r.x = std::clamp(r.x - (1.0 - r.w) / 2.0, 0.0, std::max(0.0, frame_w - 1.0));
    r.w = std::min(1.0, frame_w);
  }
  if (r.h < 1.0) {
    r.y = std::clamp(r.y - (1.0 - r.h) / 2.0, 0.0, std::max(0.0, frame_h - 1.0));
    r.h = std::min(1.0, frame_h);
  }
  return r;
}

}  // namespace

std::optional<Rect> intersect(const Rect& a, const Rect& b) {
  const double x0 = std::max(a.x, b.x);
  const double y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.x2(), b.x2());
  const double y1 = std::min(a.y2(), b.y2());
  if (x1 <= x0 || y1 <= y0) return std::nullopt;
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

bool SkinMask::any() const {
  for (std::uint8_t b : bits)
    if (b) return true;
  return false;
}

namespace {

// Tight pixel bounding box; a pixel (x, y) covers [x, x+1) x [y, y+1).
Rect skin_bbox(const SkinMask& mask) {
  int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.at(x, y)) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
      }
  return {static_cast<double>(min_x), static_cast<double>(min_y),
          static_cast<double>(max_x - min_x + 1), static_cast<double>(max_y - min_y + 1)};
}

double skin_top(const SkinMask& mask) {
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.at(x, y)) return static_cast<double>(y);
  return 0.0;
}

}  // namespace

Rect primary_region(const SkinMask& mask, const WristSet& wrists, double frame_w, double frame_h,
                    double fixed_w, double fixed_h) {
  const bool has_skin = mask.width > 0 && mask.height > 0 && mask.any();
  const bool has_wrists = !wrists.points.empty();
  if (fixed_w <= 0) fixed_w = frame_w / 4.0;
  if (fixed_h <= 0) fixed_h = frame_h / 4.0;

  Rect box;
  if (!has_skin && !has_wrists) {
    return {0, 0, frame_w, frame_h};
  } else if (has_skin && !has_wrists) {
    box = skin_bbox(mask);
  } else if (!has_skin && has_wrists) {
    double cx = 0, cy = 0;
    for (const Point2D& p : wrists.points) {
      cx += p.x;
      cy += p.y;
    }
    cx /= wrists.points.size();
    cy /= wrists.points.size();
    box = {cx - fixed_w / 2.0, cy - fixed_h / 2.0, fixed_w, fixed_h};
  } else {
    double left = std::numeric_limits<double>::infinity();
    double right = -std::numeric_limits<double>::infinity();
    double bottom = -std::numeric_limits<double>::infinity();
    for (const Point2D& p : wrists.points) {
      left = std::min(left, p.x);
      right = std::max(right, p.x);
      bottom = std::max(bottom, p.y);
    }
    const double top = skin_top(mask);
    box = {left, std::min(top, bottom), right - left, std::abs(bottom - top)};
  }
  return inflate_degenerate(clip_to_frame(box, frame_w, frame_h), frame_w, frame_h);
}

void RotationSchedule::validate() const {
  if (C <= 0) throw ConfigError("rotation schedule: C must be positive");
  if (theta_max <= 0 || theta_max > kQuarterPi + 1e-12)
    throw ConfigError("rotation schedule: theta_max must be in (0, pi/4]");
  if (terms.empty()) throw ConfigError("rotation schedule: no terms");
  double sum = 0;
  for (const RotationTerm& t : terms) {
    if (t.lambda < 0) throw ConfigError("rotation schedule: lambda must be >= 0");
    if (t.gamma <= 0) throw ConfigError("rotation schedule: gamma must be positive");
    sum += t.lambda;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("rotation schedule: lambdas sum to " + std::to_string(sum) + ", expected 1");
  if (r < 0 || r > 0.5) throw ConfigError("rotation schedule: r must be in [0, 1/2]");
  if (num_frames < 1) throw ConfigError("rotation schedule: num_frames must be >= 1");
}

RotationSchedule RotationSchedule::random(double theta_max, int num_frames, int num_terms,
                                          double C, Rng& rng) {
  RotationSchedule s;
  s.C = C;
  s.theta_max = theta_max;
  s.num_frames = num_frames;
  s.r = rng.uniform(0.0, 0.5);
  double sum = 0;
  for (int i = 0; i < num_terms; ++i) {
    RotationTerm t;
    t.lambda = rng.uniform(0.05, 1.0);
    t.gamma = rng.uniform(0.5, 4.0);
    sum += t.lambda;
    s.terms.push_back(t);
  }
  for (RotationTerm& t : s.terms) t.lambda /= sum;
  // Normalization leaves the sum within float rounding of 1; snap the last
  // term so validate()'s 1e-9 tolerance always holds.
  double partial = 0;
  for (std::size_t i = 0; i + 1 < s.terms.size(); ++i) partial += s.terms[i].lambda;
  s.terms.back().lambda = 1.0 - partial;
  s.validate();
  return s;
}

double rotation_angle(int n, const RotationSchedule& sched) {
  const double rho = 2.0 * std::numbers::pi *
                     (sched.C / static_cast<double>(sched.num_frames) * n + sched.r);
  double acc = 0;
  for (const RotationTerm& t : sched.terms) acc += t.lambda * std::sin(t.gamma * rho);
  return sched.theta_max * acc;
}

CropResult inscribed_crop(double w, double h, double theta) {
  if (w <= 0 || h <= 0) throw ConfigError("inscribed_crop: frame sides must be positive");
  if (std::abs(theta) > kQuarterPi + 1e-12)
    throw std::domain_error("inscribed_crop: |theta| must be <= pi/4");

  const double sin_a = std::abs(std::sin(theta));
  const double cos_a = std::abs(std::cos(theta));
  const double s = std::min(w, h);
  const double l = std::max(w, h);

  double wr, hr;
  if (s / l > 2.0 * sin_a * cos_a) {
    const double cos_2a = cos_a * cos_a - sin_a * sin_a;
    wr = (w * cos_a - h * sin_a) / cos_2a;
    hr = (h * cos_a - w * sin_a) / cos_2a;
  } else if (w > h) {
    wr = s / (2.0 * sin_a);
    hr = s / (2.0 * cos_a);
  } else {
    wr = s / (2.0 * cos_a);
    hr = s / (2.0 * sin_a);
  }

  const double canvas_w = w * cos_a + h * sin_a;
  const double canvas_h = w * sin_a + h * cos_a;
  Rect crop{canvas_w / 2.0 - wr / 2.0, canvas_h / 2.0 - hr / 2.0, wr, hr};
  return {wr, hr, crop};
}

Rect rotate_rect(const Rect& rect, double theta, const Point2D& center) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Point2D corners[4] = {{rect.x, rect.y},
                              {rect.x2(), rect.y},
                              {rect.x2(), rect.y2()},
                              {rect.x, rect.y2()}};
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (const Point2D& p : corners) {
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    const double rx = center.x + dx * c - dy * s;
    const double ry = center.y + dx * s + dy * c;
    min_x = std::min(min_x, rx);
    min_y = std::min(min_y, ry);
    max_x = std::max(max_x, rx);
    max_y = std::max(max_y, ry);
  }
  return {min_x, min_y, max_x - min_x, max_y - min_y};
}

FrameAugment augment_frame_geometry(const Rect& primary, double frame_w, double frame_h,
                                    double theta) {
  const Point2D center{frame_w / 2.0, frame_h / 2.0};
  const Rect rotated = rotate_rect(primary, theta, center);
  const CropResult cr = inscribed_crop(frame_w, frame_h, theta);
  // The crop stays centered on the frame center, so in frame coordinates its
  // origin is frame center minus half the crop size.
  const Rect crop_in_frame{center.x - cr.width / 2.0, center.y - cr.height / 2.0, cr.width,
                           cr.height};
  FrameAugment out;
  out.crop = crop_in_frame;
  if (auto clipped = intersect(rotated, crop_in_frame)) {
    out.primary = Rect{clipped->x - crop_in_frame.x, clipped->y - crop_in_frame.y, clipped->w,
                       clipped->h};
  }
  return out;
}

SkinMask load_pbm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());

  auto next_token = [&in, &path]() -> std::string {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {  // comment to end of line
        while (in.get(c) && c != '\n') {
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok += c;
    }
    if (tok.empty()) throw ParseError("unexpected end of PBM file " + path.string());
    return tok;
  };

  const std::string magic = next_token();
  if (magic != "P1" && magic != "P4") throw ParseError("not a PBM file (P1/P4): " + path.string());
  SkinMask mask;
  mask.width = std::stoi(next_token());
  mask.height = std::stoi(next_token());
  if (mask.width <= 0 || mask.height <= 0) throw ParseError("invalid PBM dimensions");
  mask.bits.resize(static_cast<std::size_t>(mask.width) * mask.height);

  if (magic == "P1") {
    std::size_t i = 0;
    char c;
    while (i < mask.bits.size() && in.get(c)) {
      if (c == '#') {
        while (in.get(c) && c != '\n') {
        }
        continue;
      }
      if (c == '0' || c == '1') mask.bits[i++] = static_cast<std::uint8_t>(c - '0');
    }
    if (i != mask.bits.size()) throw ParseError("truncated P1 raster in " + path.string());
  } else {
    // P4: rows padded to whole bytes, MSB first.
    const int row_bytes = (mask.width + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int y = 0; y < mask.height; ++y) {
      if (!in.read(row.data(), row_bytes))
        throw ParseError("truncated P4 raster in " + path.string());
      for (int x = 0; x < mask.width; ++x) {
        const unsigned byte = static_cast<unsigned char>(row[x / 8]);
        mask.bits[static_cast<std::size_t>(y) * mask.width + x] =
            static_cast<std::uint8_t>((byte >> (7 - x % 8)) & 1u);
      }
    }
  }
  return mask;
}

}  // namespace egoact
