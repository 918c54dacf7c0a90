#include <gtest/gtest.h>

#include <random>

#include "reference.hpp"
#include "rdseg/error.hpp"
#include "rdseg/grid.hpp"

using namespace rdseg;

namespace {

// Row-major pixel index.
Eigen::Index at(Eigen::Index i, Eigen::Index j, Eigen::Index w) { return i * w + j; }

// Forward-difference matrices built entry by entry.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> difference_matrices(Eigen::Index h, Eigen::Index w) {
  const Eigen::Index n = h * w;
  Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(n, n), d2 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j) {
      if (i + 1 < h) {
        d1(at(i, j, w), at(i + 1, j, w)) = 1.0;
        d1(at(i, j, w), at(i, j, w)) = -1.0;
      }
      if (j + 1 < w) {
        d2(at(i, j, w), at(i, j + 1, w)) = 1.0;
        d2(at(i, j, w), at(i, j, w)) = -1.0;
      }
    }
  return {d1, d2};
}

Eigen::VectorXd flat(const ScalarField& u) {
  return Eigen::Map<const Eigen::VectorXd>(u.data(), u.size());
}

}  // namespace

TEST(Gradient, ConstantFieldIsZero) {
  const ScalarField u = ScalarField::Constant(5, 5, 3.25);
  const VectorField2d g = gradient(u);
  EXPECT_TRUE((g.comp1 == 0.0).all());
  EXPECT_TRUE((g.comp2 == 0.0).all());
}

TEST(Gradient, OneByTwo) {
  ScalarField u(1, 2);
  u << 0.0, 1.0;
  const VectorField2d g = gradient(u);
  EXPECT_EQ(g.comp2(0, 0), 1.0);
  EXPECT_EQ(g.comp2(0, 1), 0.0);
  EXPECT_EQ(g.comp1(0, 0), 0.0);
  EXPECT_EQ(g.comp1(0, 1), 0.0);
}

TEST(Gradient, MatchesDenseMatrixStencil) {
  std::mt19937_64 rng(11);
  const ScalarField u = ref::random_field(4, 4, rng);
  const auto [d1, d2] = difference_matrices(4, 4);
  const VectorField2d g = gradient(u);
  const Eigen::VectorXd e1 = d1 * flat(u), e2 = d2 * flat(u);
  for (Eigen::Index k = 0; k < 16; ++k) {
    EXPECT_NEAR(g.comp1(k), e1(k), 1e-15);
    EXPECT_NEAR(g.comp2(k), e2(k), 1e-15);
  }
}

TEST(Divergence, ZeroField) {
  const VectorField2d p(4, 7);
  EXPECT_TRUE((divergence(p) == 0.0).all());
}

TEST(Divergence, IsMinusTransposeOfGradientMatrix) {
  std::mt19937_64 rng(12);
  const VectorField2d p = ref::random_vector_field(4, 5, rng);
  const auto [d1, d2] = difference_matrices(4, 5);
  const Eigen::VectorXd expected = -(d1.transpose() * flat(p.comp1) + d2.transpose() * flat(p.comp2));
  const ScalarField d = divergence(p);
  for (Eigen::Index k = 0; k < d.size(); ++k) EXPECT_NEAR(d(k), expected(k), 1e-14);
}

TEST(Divergence, NegativeAdjointOfGradient) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField u = ref::random_field(6, 6, rng);
    const VectorField2d p = ref::random_vector_field(6, 6, rng);
    double lhs = 0.0, rhs = 0.0;
    const VectorField2d g = ref::grad(u);
    const ScalarField d = ref::div(p);
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      lhs += g.comp1(k) * p.comp1(k) + g.comp2(k) * p.comp2(k);
      rhs += u(k) * d(k);
    }
    EXPECT_NEAR(inner(gradient(u), p), lhs, 1e-12);
    EXPECT_LT(std::abs(inner(gradient(u), p) + (u * divergence(p)).sum()), 1e-12);
    EXPECT_NEAR(lhs, -rhs, 1e-12);
  }
}

TEST(Divergence, DegenerateShapesStayAdjoint) {
  std::mt19937_64 rng(14);
  for (auto [h, w] : {std::pair<Eigen::Index, Eigen::Index>{1, 1}, {1, 6}, {6, 1}, {2, 2}}) {
    const ScalarField u = ref::random_field(h, w, rng);
    const VectorField2d p = ref::random_vector_field(h, w, rng);
    EXPECT_NEAR(inner(gradient(u), p), -(u * divergence(p)).sum(), 1e-13) << h << "x" << w;
  }
}

TEST(Divergence, OfGradientOfDeltaIsNeumannLaplacian) {
  // delta at the centre of 3x3: -4 at the centre, +1 at the four neighbours
  ScalarField u = ScalarField::Zero(3, 3);
  u(1, 1) = 1.0;
  ScalarField lap(3, 3);
  lap << 0, 1, 0,
         1, -4, 1,
         0, 1, 0;
  EXPECT_TRUE((divergence(gradient(u)) == lap).all());

  // delta in a corner only has two neighbours
  u.setZero();
  u(0, 0) = 1.0;
  lap << -2, 1, 0,
         1, 0, 0,
         0, 0, 0;
  EXPECT_TRUE((divergence(gradient(u)) == lap).all());
}

TEST(Divergence, MatchesReferenceOnRectangles) {
  std::mt19937_64 rng(15);
  for (auto [h, w] : {std::pair<Eigen::Index, Eigen::Index>{3, 8}, {9, 2}, {1, 5}, {5, 1}}) {
    const VectorField2d p = ref::random_vector_field(h, w, rng);
    EXPECT_TRUE((divergence(p) == ref::div(p)).all());
    const ScalarField u = ref::random_field(h, w, rng);
    EXPECT_TRUE((gradient(u).comp1 == ref::grad(u).comp1).all());
    EXPECT_TRUE((gradient(u).comp2 == ref::grad(u).comp2).all());
  }
}

TEST(PointwiseNorm, ThreeFourFive) {
  const VectorField2d p(ScalarField::Constant(3, 2, 3.0), ScalarField::Constant(3, 2, 4.0));
  EXPECT_TRUE((pointwise_norm(p) == 5.0).all());
  EXPECT_TRUE((pointwise_norm(VectorField2d(3, 2)) == 0.0).all());
}

TEST(PointwiseNorm, MatchesScalarSqrt) {
  std::mt19937_64 rng(16);
  const VectorField2d p = ref::random_vector_field(5, 4, rng);
  const ScalarField n = pointwise_norm(p);
  for (Eigen::Index k = 0; k < n.size(); ++k)
    EXPECT_EQ(n(k), std::sqrt(p.comp1(k) * p.comp1(k) + p.comp2(k) * p.comp2(k)));
}

TEST(TotalVariation, ConstantIsZero) {
  EXPECT_EQ(total_variation(ScalarField::Constant(4, 4, 0.7)), 0.0);
}

TEST(TotalVariation, HalfPlaneCountsOneJumpPerRow) {
  for (Eigen::Index n : {2, 6, 10}) {
    ScalarField u = ScalarField::Zero(n, n);
    u.leftCols(n / 2) = 1.0;
    EXPECT_DOUBLE_EQ(total_variation(u), static_cast<double>(n));
  }
}

TEST(TotalVariation, PositivelyHomogeneous) {
  std::mt19937_64 rng(17);
  const ScalarField u = ref::random_field(7, 5, rng);
  for (double a : {-2.5, 0.0, 0.3, 4.0})
    EXPECT_NEAR(total_variation((a * u).eval()), std::abs(a) * total_variation(u), 1e-12);
}

TEST(Grid, RejectsEmptyAndMismatchedInput) {
  EXPECT_THROW(gradient(ScalarField(0, 3)), InvalidInput);
  EXPECT_THROW(VectorField2d(ScalarField::Zero(2, 2), ScalarField::Zero(2, 3)), InvalidInput);
}
