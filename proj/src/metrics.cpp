#include "rdseg/metrics.hpp"

namespace rdseg {

namespace {

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput(std::string(what) + ": dimension mismatch");
}

}  // namespace

BinaryMask threshold_indicator(const ScalarField& u, double eps) {
  return (u > eps).cast<std::uint8_t>();
}

double tanimoto(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "tanimoto");
  const auto fa = a != 0;
  const auto fb = b != 0;
  const Eigen::Index inter = (fa && fb).count();
  const Eigen::Index uni = (fa || fb).count();
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double l2_difference(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "l2_difference");
  return (a - b).square().sum();
}

GroundTruth make_ground_truth(const ScalarField& f, const SolverParams& params) {
  SolverParams gt = params;
  gt.delta = kGroundTruthDelta;
  SolveResult res = solve(f, gt, 1.0);
  GroundTruth out;
  out.mask = threshold_indicator(res.state.u, kGroundTruthEpsilon);
  out.u = std::move(res.state.u);
  out.report = res.report;
  return out;
}

}  // namespace rdseg
