#include <gtest/gtest.h>

#include <random>

#include "reference.hpp"
#include "rdseg/error.hpp"
#include "rdseg/partition.hpp"

using namespace rdseg;

namespace {

ScalarField minus_three_to_five() {
  ScalarField f(3, 3);
  f << -3, -2, -1, 0, 1, 2, 3, 4, 5;
  return f;
}

}  // namespace

TEST(Partition, FullRestriction) {
  std::mt19937_64 rng(31);
  const Partition p = partition(ref::random_field(5, 6, rng), 1.0);
  EXPECT_EQ(p.rd_count(), 30);
  EXPECT_EQ(p.rd_fraction, 1.0);
}

TEST(Partition, ZeroRestrictionIsSignThresholding) {
  ScalarField f(2, 3);
  f << -0.5, 0.2, 1.0, 3.0, -2.0, 0.0;
  const Partition p = partition(f, 0.0);
  EXPECT_EQ(p.rd_count(), 0);
  EXPECT_EQ(p.q_hat, 0.0);
  for (Eigen::Index k = 0; k < f.size(); ++k)
    EXPECT_EQ(p.labels(k), f(k) <= 0.0 ? kForeground : kBackground) << k;
}

TEST(Partition, ThirdOfNineValues) {
  // |f| sorted: 0 1 1 2 2 3 3 4 5; the third smallest is 1, captured by
  // {-1, 0, 1}, and no smaller threshold captures three pixels.
  const ScalarField f = minus_three_to_five();
  const Partition p = partition(f, 1.0 / 3.0);
  EXPECT_EQ(p.q_hat, 1.0);
  EXPECT_DOUBLE_EQ(p.rd_fraction, 3.0 / 9.0);
  LabelField expected(3, 3);
  expected << kForeground, kForeground, kRestricted,
              kRestricted, kRestricted, kBackground,
              kBackground, kBackground, kBackground;
  EXPECT_TRUE((p.labels == expected).all());
}

TEST(Partition, TiesJoinTheRestrictedDomain) {
  // q N = 2 but the second-smallest |f| is tied with a third pixel
  ScalarField f(1, 4);
  f << 0.5, -0.5, 0.5, 2.0;
  const Partition p = partition(f, 0.5);
  EXPECT_EQ(p.q_hat, 0.5);
  EXPECT_EQ(p.rd_count(), 3);
}

TEST(Partition, MonotoneInQ) {
  std::mt19937_64 rng(32);
  const ScalarField f = ref::random_field(12, 9, rng);
  Partition prev = partition(f, 0.0);
  for (int s = 1; s <= 20; ++s) {
    const Partition cur = partition(f, s / 20.0);
    EXPECT_GE(cur.q_hat, prev.q_hat);
    for (Eigen::Index k = 0; k < f.size(); ++k)
      if (prev.labels(k) == kRestricted) {
        EXPECT_EQ(cur.labels(k), kRestricted);
      }
    EXPECT_GE(cur.rd_fraction, s / 20.0 - 1e-12);
    prev = cur;
  }
}

TEST(Partition, PinnedLabelsAgreeWithInitialIndicator) {
  std::mt19937_64 rng(33);
  const ScalarField f = ref::random_field(10, 10, rng);
  const ScalarField u0 = initial_indicator(f);
  for (double q : {0.0, 0.2, 0.7}) {
    const Partition p = partition(f, q);
    for (Eigen::Index k = 0; k < f.size(); ++k) {
      if (p.labels(k) == kForeground) {
        EXPECT_EQ(u0(k), 1.0);
      } else if (p.labels(k) == kBackground) {
        EXPECT_EQ(u0(k), 0.0);
      }
    }
  }
}

TEST(Partition, RejectsBadInput) {
  const ScalarField f = ScalarField::Zero(2, 2);
  EXPECT_THROW(partition(f, -0.1), InvalidInput);
  EXPECT_THROW(partition(f, 1.1), InvalidInput);
  ScalarField g = f;
  g(0, 0) = std::nan("");
  EXPECT_THROW(partition(g, 0.5), InvalidInput);
}

TEST(InitialIndicator, HeavisideOfMinusF) {
  EXPECT_TRUE((initial_indicator(ScalarField::Constant(3, 3, -1.0)) == 1.0).all());
  EXPECT_TRUE((initial_indicator(ScalarField::Constant(3, 3, 1.0)) == 0.0).all());
  ScalarField f(1, 3);
  f << 0.0, 1e-300, -1e-300;
  const ScalarField u = initial_indicator(f);
  EXPECT_EQ(u(0, 0), 1.0);
  EXPECT_EQ(u(0, 1), 0.0);
  EXPECT_EQ(u(0, 2), 1.0);
}

TEST(PartitionImage, GrayLevels) {
  const Partition p = partition(minus_three_to_five(), 1.0 / 3.0);
  const auto img = partition_image(p);
  EXPECT_EQ(img(0, 0), 255);
  EXPECT_EQ(img(1, 0), 128);
  EXPECT_EQ(img(2, 2), 0);
}
