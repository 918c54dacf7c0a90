#include "rdseg/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rdseg {

Partition partition(const ScalarField& f, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("partition: q must lie in [0, 1]");
  detail::require_nonempty(f, "partition");
  if (!f.allFinite()) throw InvalidInput("partition: fitting term is not finite");

  const Eigen::Index n = f.size();
  Partition p;
  p.q_requested = q;
  p.labels.resize(f.rows(), f.cols());

  if (q == 0.0) {
    p.q_hat = 0.0;
    p.labels = (f <= 0.0).select(LabelField::Constant(f.rows(), f.cols(), kForeground),
                                 LabelField::Constant(f.rows(), f.cols(), kBackground));
    p.rd_fraction = 0.0;
    return p;
  }

  std::vector<double> mag(f.data(), f.data() + n);
  for (auto& m : mag) m = std::abs(m);
  std::sort(mag.begin(), mag.end());
  // The 1e-9 absorbs rounding in q*N so that e.g. q = 1/3, N = 9 gives 3.
  const auto need = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(std::ceil(q * static_cast<double>(n) - 1e-9)), 1, n);
  p.q_hat = mag[static_cast<std::size_t>(need - 1)];

  const double qh = p.q_hat;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v = f.data()[k];
    p.labels.data()[k] = v < -qh ? kForeground : (v > qh ? kBackground : kRestricted);
  }
  p.rd_fraction = static_cast<double>(p.rd_count()) / static_cast<double>(n);
  return p;
}

Partition full_partition(Eigen::Index height, Eigen::Index width) {
  if (height < 1 || width < 1) throw InvalidInput("full_partition: zero dimension");
  Partition p;
  p.labels = LabelField::Constant(height, width, kRestricted);
  p.q_hat = std::numeric_limits<double>::infinity();
  p.q_requested = 1.0;
  p.rd_fraction = 1.0;
  return p;
}

ScalarField initial_indicator(const ScalarField& f) {
  return (f <= 0.0).cast<double>();
}

Field<std::uint8_t> partition_image(const Partition& p) {
  Field<std::uint8_t> img(p.rows(), p.cols());
  for (Eigen::Index k = 0; k < img.size(); ++k) {
    switch (p.labels.data()[k]) {
      case kForeground: img.data()[k] = 255; break;
      case kBackground: img.data()[k] = 0; break;
      default: img.data()[k] = 128; break;
    }
  }
  return img;
}

}  // namespace rdseg
