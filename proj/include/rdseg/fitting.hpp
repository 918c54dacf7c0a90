#pragma once

#include <filesystem>
#include <vector>

#include "rdseg/grid.hpp"

namespace rdseg {

/// Foreground (c1) and background (c2) intensity levels, fixed for a solve.
class IntensityPair {
public:
  IntensityPair(double c1, double c2);

  double c1() const { return c1_; }
  double c2() const { return c2_; }

private:
  double c1_;
  double c2_;
};

struct PixelCoord {
  Eigen::Index row;
  Eigen::Index col;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Nonempty set of user-placed marker pixels.
class MarkerSet {
public:
  explicit MarkerSet(std::vector<PixelCoord> points);

  const std::vector<PixelCoord>& points() const { return points_; }

  /// Throws InvalidInput if any marker lies outside a height x width grid.
  void check_bounds(Eigen::Index height, Eigen::Index width) const;

private:
  std::vector<PixelCoord> points_;
};

struct SelectiveParams {
  double gamma = 0.0;
};

/// f = (z - c1)^2 - (z - c2)^2. Negative where z is closer to c1.
ScalarField chan_vese_fitting(const ScalarField& z, const IntensityPair& c);

/// Distance from every pixel to its nearest marker, scaled so the largest
/// value on the grid is 1 (all zeros if every pixel is a marker).
ScalarField marker_distance(Eigen::Index height, Eigen::Index width, const MarkerSet& markers);

/// Chan-Vese fitting plus gamma times the normalised marker distance.
ScalarField distance_selective_fitting(const ScalarField& z, const IntensityPair& c,
                                       const MarkerSet& markers, const SelectiveParams& s);

/// Means of z inside (mask == 1) and outside (mask == 0) a binary mask.
IntensityPair estimate_constants(const ScalarField& z, const ScalarField& mask);

/// Divides f by max|f|. Leaves an all-zero f unchanged.
ScalarField normalize_fitting(const ScalarField& f);

/// Reads "row col" integer pairs, one per line. Blank lines and lines
/// starting with '#' are skipped.
MarkerSet read_markers(const std::filesystem::path& path);
void write_markers(const std::filesystem::path& path, const MarkerSet& markers);

}  // namespace rdseg
