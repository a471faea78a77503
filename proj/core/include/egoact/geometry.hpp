#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "egoact/errors.hpp"
#include "egoact/rng.hpp"

namespace egoact {

struct Point2D {
  double x = 0;
  double y = 0;
};

// Axis-aligned box, top-left corner plus size, pixel units.
struct Rect {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double x2() const { return x + w; }
  double y2() const { return y + h; }
  double area() const { return w * h; }
};

std::optional<Rect> intersect(const Rect& a, const Rect& b);

// Binary raster, row-major, 1 = skin.
struct SkinMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  bool any() const;
};

// Zero, one or two wrist center points.
struct WristSet {
  std::vector<Point2D> points;
};

// Primary-region rule over skin evidence and wrist points:
//   no skin, no wrists  -> full frame
//   skin only           -> tight bounding box of all skin pixels
//   wrists only         -> fixed_w x fixed_h box centered on the wrist centroid
//   both                -> left/right from min/max wrist x, bottom from max
//                          wrist y, top from the topmost skin pixel
// Degenerate boxes are inflated to at least 1 px per side; the result is
// always clipped to the frame. Pass fixed_w/fixed_h <= 0 to use the default
// frame_w/4 x frame_h/4 fixed box.
Rect primary_region(const SkinMask& mask, const WristSet& wrists, double frame_w, double frame_h,
                    double fixed_w = 0, double fixed_h = 0);

struct RotationTerm {
  double lambda = 1.0;  // weight, all weights sum to 1
  double gamma = 1.0;   // frequency multiplier
};

// Sinusoidal per-frame rotation schedule
//   rho(n) = 2*pi*(C/N * n + r),  theta(n) = theta_max * sum_i lambda_i * sin(gamma_i * rho(n))
struct RotationSchedule {
  double C = 1.0;
  double theta_max = 0.0;  // radians, in (0, pi/4]
  std::vector<RotationTerm> terms;
  double r = 0.0;  // phase offset in [0, 1/2]
  int num_frames = 1;

  void validate() const;  // throws ConfigError

  // Random schedule: lambdas normalized to sum 1, gammas in [0.5, 4],
  // r uniform in [0, 1/2].
  static RotationSchedule random(double theta_max, int num_frames, int num_terms, double C,
                                 Rng& rng);
};

double rotation_angle(int n, const RotationSchedule& sched);

struct CropResult {
  double width = 0;   // w_r
  double height = 0;  // h_r
  Rect crop;          // centered in the rotated-image canvas
};

// Largest inscribed axis-aligned rectangle after rotating a w x h frame by
// theta (|theta| <= pi/4). The crop rect is expressed in the coordinates of
// the rotated-image bounding canvas.
CropResult inscribed_crop(double w, double h, double theta);

// Axis-aligned bounding box of the rect's four corners rotated about center.
Rect rotate_rect(const Rect& rect, double theta, const Point2D& center);

struct FrameAugment {
  std::optional<Rect> primary;  // in crop coordinates; nullopt when fully outside
  Rect crop;                    // in original frame coordinates
};

// Annotation transfer for a rotated frame: rotates the primary box about the
// frame center, intersects its bounding box with the inscribed crop and
// re-expresses it relative to the crop origin.
FrameAugment augment_frame_geometry(const Rect& primary, double frame_w, double frame_h,
                                    double theta);

// PBM image reader, P1 (ASCII) and P4 (packed binary) variants.
SkinMask load_pbm(const std::filesystem::path& path);

}  // namespace egoact
