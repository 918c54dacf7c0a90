#include "rdseg/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace rdseg {

IntensityPair::IntensityPair(double c1, double c2) : c1_(c1), c2_(c2) {
  if (!std::isfinite(c1) || !std::isfinite(c2))
    throw InvalidInput("intensity constants must be finite");
  if (c1 < 0.0 || c1 > 1.0 || c2 < 0.0 || c2 > 1.0)
    throw InvalidInput("intensity constants must lie in [0, 1]");
  if (c1 == c2)
    throw DegenerateFitting("intensity constants c1 and c2 must differ");
}

MarkerSet::MarkerSet(std::vector<PixelCoord> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidInput("marker set is empty");
  for (const auto& p : points_)
    if (p.row < 0 || p.col < 0) throw InvalidInput("marker with negative coordinate");
}

void MarkerSet::check_bounds(Eigen::Index height, Eigen::Index width) const {
  for (const auto& p : points_)
    if (p.row >= height || p.col >= width)
      throw InvalidInput("marker (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                         ") outside " + std::to_string(height) + "x" + std::to_string(width) +
                         " grid");
}

ScalarField chan_vese_fitting(const ScalarField& z, const IntensityPair& c) {
  return (z - c.c1()).square() - (z - c.c2()).square();
}

ScalarField marker_distance(Eigen::Index height, Eigen::Index width, const MarkerSet& markers) {
  markers.check_bounds(height, width);
  // Exact brute force: marker sets are small.
  ScalarField sq(height, width);
  for (Eigen::Index i = 0; i < height; ++i) {
    for (Eigen::Index j = 0; j < width; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& m : markers.points()) {
        const double di = static_cast<double>(i - m.row);
        const double dj = static_cast<double>(j - m.col);
        best = std::min(best, di * di + dj * dj);
      }
      sq(i, j) = best;
    }
  }
  ScalarField dist = sq.sqrt();
  const double dmax = dist.maxCoeff();
  if (dmax > 0.0) dist /= dmax;
  return dist;
}

ScalarField distance_selective_fitting(const ScalarField& z, const IntensityPair& c,
                                       const MarkerSet& markers, const SelectiveParams& s) {
  if (!(s.gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  ScalarField f = chan_vese_fitting(z, c);
  if (s.gamma == 0.0) return f;
  return f + s.gamma * marker_distance(z.rows(), z.cols(), markers);
}

IntensityPair estimate_constants(const ScalarField& z, const ScalarField& mask) {
  if (z.rows() != mask.rows() || z.cols() != mask.cols())
    throw InvalidInput("estimate_constants: image and mask dimensions differ");
  if (((mask != 0.0) && (mask != 1.0)).any())
    throw InvalidInput("estimate_constants: mask is not binary");
  const double n_fg = mask.sum();
  const double n_bg = static_cast<double>(mask.size()) - n_fg;
  if (n_fg == 0.0) throw InvalidInput("estimate_constants: foreground region is empty");
  if (n_bg == 0.0) throw InvalidInput("estimate_constants: background region is empty");
  const double s_fg = (z * mask).sum();
  const double s_bg = (z * (1.0 - mask)).sum();
  return IntensityPair(s_fg / n_fg, s_bg / n_bg);
}

ScalarField normalize_fitting(const ScalarField& f) {
  const double m = f.abs().maxCoeff();
  if (m == 0.0) return f;
  return f / m;
}

MarkerSet read_markers(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open marker file '" + path.string() + "'");
  std::vector<PixelCoord> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long r = 0, c = 0;
    std::string rest;
    if (!(ls >> r >> c) || (ls >> rest) || r < 0 || c < 0)
      throw IoError("malformed marker file '" + path.string() + "' at line " +
                    std::to_string(lineno) + ": expected \"row col\" nonnegative integers");
    pts.push_back({static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)});
  }
  if (pts.empty()) throw IoError("marker file '" + path.string() + "' contains no markers");
  return MarkerSet(std::move(pts));
}

void write_markers(const std::filesystem::path& path, const MarkerSet& markers) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write marker file '" + path.string() + "'");
  for (const auto& p : markers.points()) out << p.row << ' ' << p.col << '\n';
  if (!out) throw IoError("failed writing marker file '" + path.string() + "'");
}

}  // namespace rdseg
