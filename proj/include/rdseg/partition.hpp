#pragma once

#include <cstdint>

#include "rdseg/grid.hpp"

namespace rdseg {

enum Label : std::uint8_t { kBackground = 0, kForeground = 1, kRestricted = 2 };

using LabelField = Field<std::uint8_t>;

/// Split of the grid into pinned foreground, pinned background and the
/// restricted domain where the solver iterates.
///
/// For a threshold q_hat the labels are
///   FG: f < -q_hat,   BG: f > q_hat,   RD: |f| <= q_hat,
/// except that q_hat = 0 with q = 0 sends f = 0 to FG and leaves RD empty.
/// q_hat is the smallest |f| value whose closed ball captures at least
/// ceil(q N) pixels, so pixels tied with it all join RD.
struct Partition {
  LabelField labels;
  double q_hat = 0.0;
  double q_requested = 0.0;
  double rd_fraction = 0.0;

  Eigen::Index rows() const { return labels.rows(); }
  Eigen::Index cols() const { return labels.cols(); }
  Eigen::Index rd_count() const { return (labels == kRestricted).count(); }
};

Partition partition(const ScalarField& f, double q);

/// Every pixel restricted; the unrestricted problem.
Partition full_partition(Eigen::Index height, Eigen::Index width);

/// Heaviside initialisation H(-f): 1 where f <= 0, 0 elsewhere.
ScalarField initial_indicator(const ScalarField& f);

/// FG=255, BG=0, RD=128.
Field<std::uint8_t> partition_image(const Partition& p);

}  // namespace rdseg
