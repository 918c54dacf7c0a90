#pragma once

#include <cstdint>

#include "rdseg/grid.hpp"
#include "rdseg/solver.hpp"

namespace rdseg {

/// Values in {0, 1}.
using BinaryMask = Field<std::uint8_t>;

/// 1 where u > eps (strictly), 0 elsewhere.
BinaryMask threshold_indicator(const ScalarField& u, double eps);

/// |a & b| / |a | b|; two empty masks compare as 1.
double tanimoto(const BinaryMask& a, const BinaryMask& b);

/// Sum of squared differences, unit pixel area.
double l2_difference(const ScalarField& a, const ScalarField& b);

struct GroundTruth {
  ScalarField u;
  BinaryMask mask;
  SolveReport report;
};

/// Unrestricted solve at delta = 1e-10 thresholded at 0.5.
GroundTruth make_ground_truth(const ScalarField& f, const SolverParams& params);

constexpr double kGroundTruthDelta = 1e-10;
constexpr double kGroundTruthEpsilon = 0.5;

}  // namespace rdseg
