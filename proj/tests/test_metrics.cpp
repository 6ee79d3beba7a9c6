#include <gtest/gtest.h>

#include <random>

#include "metric_fixtures.hpp"
#include "perispace/metrics.hpp"
#include "support.hpp"

namespace perispace {
namespace {

TEST(Metrics, FrozenFixtures) {
  for (const testing::MetricFixture& f : testing::kMetricFixtures) {
    const ConfusionCounts c = f.counts();
    EXPECT_NEAR(f1(c), f.f1, 1e-12) << c.tp << "/" << c.fp << "/" << c.fn;
    EXPECT_NEAR(kappa(c), f.kappa, 1e-12) << c.tp << "/" << c.fp << "/" << c.fn;
  }
}

TEST(Metrics, WorkedExample) {
  const ConfusionCounts c{40, 5, 5, 40, 0, 10};
  EXPECT_NEAR(kappa(c), 3500.0 / 5500.0, 1e-12);
  EXPECT_NEAR(f1(ConfusionCounts{2, 1, 1, 0, 2, 0}), 0.5, 1e-15);
}

TEST(Metrics, EmptyTallyIsAnError) {
  EXPECT_THROW(kappa(ConfusionCounts{}), std::domain_error);
  EXPECT_DOUBLE_EQ(f1(ConfusionCounts{}), 1.0);
}

TEST(Metrics, IgnorantPredictionOnBalancedTruth) {
  // All-Occupied prediction, t_occ = t_free.
  EXPECT_DOUBLE_EQ(kappa(ConfusionCounts{500, 500, 0, 0, 0, 0}), 0.0);
}

TEST(Metrics, RandomizedBounds) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::uint64_t> n(0, 2000);
  for (int k = 0; k < 5000; ++k) {
    ConfusionCounts c{n(rng), n(rng), n(rng), n(rng), n(rng), n(rng)};
    if (k % 7 == 0) c.tp = 0;
    if (k % 11 == 0) c.uf = c.uo = 0;
    if (c.total() == 0) continue;
    const double f = f1(c), q = kappa(c);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_LE(q, 1.0 + 1e-12);
    EXPECT_GE(q, -1.0 - 1e-12);
    // Reclassifying one fn (or uo) as tp never lowers f1.
    if (c.fn > 0) {
      ConfusionCounts d = c;
      --d.fn;
      ++d.tp;
      EXPECT_GE(f1(d), f);
    }
    if (c.uo > 0) {
      ConfusionCounts d = c;
      --d.uo;
      ++d.tp;
      EXPECT_GE(f1(d), f);
    }
  }
}

TEST(Confusion, IdentityAndAllUnknown) {
  std::mt19937_64 rng(29);
  VoxelGrid truth = testing::random_grid(rng, 8, 0.3);
  const GridGeometry& g = truth.geometry();
  const RegionOfInterest roi = HumanBox{g.box()};
  const ConfusionCounts same = confusion(truth, truth, roi);
  EXPECT_EQ(same.fp + same.fn + same.uo + same.uf, 0u);
  EXPECT_EQ(score(truth, truth, roi), (CoverageScores{1.0, 1.0}));

  const VoxelGrid unknown(g, CellState::Unknown);
  const ConfusionCounts u = confusion(unknown, truth, roi);
  EXPECT_EQ(u.tp + u.fp + u.fn + u.tn, 0u);
  const auto occ = static_cast<std::uint64_t>(std::count(truth.cells().begin(), truth.cells().end(), CellState::Occupied));
  EXPECT_EQ(u.uo, occ);
  EXPECT_EQ(u.uf, truth.size() - occ);
  EXPECT_EQ(score(unknown, truth, roi), (CoverageScores{0.0, 0.0}));
}

TEST(Confusion, MatchesNaiveTally) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> state(0, 2);
  for (int k = 0; k < 20; ++k) {
    const VoxelGrid truth = testing::random_grid(rng, 8, 0.4);
    const GridGeometry& g = truth.geometry();
    VoxelGrid est(g, CellState::Unknown);
    for (CellIndex i = 0; i < est.size(); ++i) est[i] = static_cast<CellState>(state(rng));
    const Aabb box = g.box();
    const RegionOfInterest roi = RobotSphere{0.5 * (box.min + box.max), 0.4 * box.extent().norm(), box.min.z() + 0.3 * box.extent().z()};
    ConfusionCounts naive;
    for (CellIndex i = 0; i < est.size(); ++i)
      if (contains(roi, g.cell_center(i))) tally(naive, est[i], truth[i]);
    EXPECT_EQ(confusion(est, truth, roi), naive);
    // Iteration order is irrelevant.
    auto cells = cells_in(g, roi);
    std::shuffle(cells.begin(), cells.end(), rng);
    EXPECT_EQ(confusion(est, truth, cells), naive);
  }
}

TEST(Confusion, GeometryMismatch) {
  const VoxelGrid a = new_grid({Vec3::Zero(), Vec3::Ones()}, 0.5, CellState::Free);
  const VoxelGrid b = new_grid({Vec3::Zero(), Vec3::Ones()}, 0.25, CellState::Free);
  EXPECT_THROW(confusion(a, b, RegionOfInterest{HumanBox{{Vec3::Zero(), Vec3::Ones()}}}), std::invalid_argument);
}

}  // namespace
}  // namespace perispace
