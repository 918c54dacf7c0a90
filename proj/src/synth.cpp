#include "rdseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace rdseg {

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "disk") return SynthKind::kDisk;
  if (name == "blobs") return SynthKind::kBlobs;
  if (name == "concave") return SynthKind::kConcave;
  throw InvalidInput("unknown synthetic kind '" + std::string(name) +
                     "' (expected disk, blobs or concave)");
}

std::string_view synth_kind_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::kDisk: return "disk";
    case SynthKind::kBlobs: return "blobs";
    case SynthKind::kConcave: return "concave";
  }
  return "?";
}

namespace {

using Mask = Field<std::uint8_t>;

// Shapes in coordinates relative to the shorter side s: (row, col) = (y s, x s).
void fill_ellipse(Mask& m, double cy, double cx, double ry, double rx) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double dy = (static_cast<double>(i) + 0.5 - cy) / ry;
      const double dx = (static_cast<double>(j) + 0.5 - cx) / rx;
      if (dy * dy + dx * dx <= 1.0) m(i, j) = 1;
    }
}

void fill_rect(Mask& m, double top, double left, double bottom, double right) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double y = static_cast<double>(i) + 0.5, x = static_cast<double>(j) + 0.5;
      if (y >= top && y < bottom && x >= left && x < right) m(i, j) = 1;
    }
}

// Annulus with a gap opening to the right.
void fill_c_shape(Mask& m, double cy, double cx, double r_in, double r_out, double gap) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double dy = static_cast<double>(i) + 0.5 - cy;
      const double dx = static_cast<double>(j) + 0.5 - cx;
      const double r = std::hypot(dy, dx);
      if (r < r_in || r > r_out) continue;
      if (dx > 0.0 && std::abs(dy) < gap) continue;
      m(i, j) = 1;
    }
}

// Separable Gaussian blur with clamped borders.
ScalarField blur(const ScalarField& in, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double total = 0.0;
  for (int t = -radius; t <= radius; ++t)
    total += k[t + radius] = std::exp(-0.5 * t * t / (sigma * sigma));
  for (auto& x : k) x /= total;

  const Eigen::Index h = in.rows(), w = in.cols();
  ScalarField tmp(h, w), out(h, w);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += k[t + radius] * in(i, std::clamp<Eigen::Index>(j + t, 0, w - 1));
      tmp(i, j) = acc;
    }
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += k[t + radius] * tmp(std::clamp<Eigen::Index>(i + t, 0, h - 1), j);
      out(i, j) = acc;
    }
  return out;
}

}  // namespace

SynthImage make_synth(SynthKind kind, Eigen::Index width, Eigen::Index height,
                      const SynthOptions& opts) {
  if (width < 16 || height < 16) throw InvalidInput("synthetic images need at least 16x16 pixels");
  if (!(opts.noise_sigma >= 0.0)) throw InvalidInput("noise sigma must be nonnegative");
  if (!(opts.edge_sigma >= 0.0)) throw InvalidInput("edge sigma must be nonnegative");
  if (!(opts.shading >= 0.0)) throw InvalidInput("shading must be nonnegative");

  SynthImage out;
  Mask m = Mask::Zero(height, width);
  const double H = static_cast<double>(height), W = static_cast<double>(width);
  const double s = std::min(H, W);

  switch (kind) {
    case SynthKind::kDisk:
      out.hi = 190;
      out.lo = 70;
      fill_ellipse(m, 0.48 * H, 0.52 * W, 0.30 * s, 0.30 * s);
      break;
    case SynthKind::kBlobs:
      out.hi = 180;
      out.lo = 80;
      fill_ellipse(m, 0.30 * H, 0.28 * W, 0.17 * s, 0.13 * s);
      fill_ellipse(m, 0.66 * H, 0.70 * W, 0.15 * s, 0.22 * s);
      fill_ellipse(m, 0.25 * H, 0.74 * W, 0.08 * s, 0.08 * s);
      fill_rect(m, 0.62 * H, 0.12 * W, 0.86 * H, 0.36 * W);
      fill_ellipse(m, 0.50 * H, 0.50 * W, 0.04 * s, 0.04 * s);
      // specks a couple of pixels across
      fill_ellipse(m, 0.10 * H, 0.50 * W, 1.6, 1.6);
      fill_ellipse(m, 0.90 * H, 0.60 * W, 1.6, 1.6);
      fill_ellipse(m, 0.45 * H, 0.92 * W, 2.2, 2.2);
      break;
    case SynthKind::kConcave: {
      out.hi = 190;
      out.lo = 70;
      const double cy = 0.42 * H, cx = 0.40 * W;
      fill_c_shape(m, cy, cx, 0.14 * s, 0.28 * s, 0.08 * s);
      fill_rect(m, 0.78 * H, 0.10 * W, 0.94 * H, 0.30 * W);
      fill_ellipse(m, 0.80 * H, 0.78 * W, 0.10 * s, 0.10 * s);
      fill_ellipse(m, 0.16 * H, 0.84 * W, 0.08 * s, 0.08 * s);
      // Markers spread along the ring at mid radius.
      const double rm = 0.21 * s;
      std::vector<PixelCoord> pts;
      for (double deg : {40.0, 90.0, 140.0, 180.0, 220.0, 270.0, 320.0}) {
        const double a = deg * 3.14159265358979323846 / 180.0;
        pts.push_back({static_cast<Eigen::Index>(std::floor(cy - rm * std::sin(a))),
                       static_cast<Eigen::Index>(std::floor(cx + rm * std::cos(a)))});
      }
      out.markers = MarkerSet(std::move(pts));
      break;
    }
  }

  ScalarField level = m.cast<double>();
  if (opts.edge_sigma > 0.0) level = blur(level, opts.edge_sigma);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  out.image.resize(height, width);
  for (Eigen::Index i = 0; i < height; ++i) {
    for (Eigen::Index j = 0; j < width; ++j) {
      double val = out.lo + (out.hi - out.lo) * level(i, j);
      if (opts.shading > 0.0) {
        // diagonal ramp from -shading to +shading
        const double t = (static_cast<double>(i) / (H - 1) + static_cast<double>(j) / (W - 1)) / 2.0;
        val += opts.shading * (2.0 * t - 1.0);
      }
      if (opts.noise_sigma > 0.0) val += opts.noise_sigma * noise(rng);
      out.image(i, j) = static_cast<std::uint8_t>(std::clamp(std::round(val), 0.0, 255.0));
    }
  }
  out.truth = std::move(m);
  return out;
}

}  // namespace rdseg
