#include "perispace/metrics.hpp"

#include <stdexcept>

namespace perispace {

ConfusionCounts confusion(const VoxelGrid& estimate, const VoxelGrid& truth, std::span<const CellIndex> roi_cells) {
  if (!(estimate.geometry() == truth.geometry()))
    throw std::invalid_argument("confusion: estimate and truth grids differ in geometry");
  ConfusionCounts c;
  for (CellIndex i : roi_cells) tally(c, estimate[i], truth[i]);
  return c;
}

ConfusionCounts confusion(const VoxelGrid& estimate, const VoxelGrid& truth, const RegionOfInterest& roi) {
  if (!(estimate.geometry() == truth.geometry()))
    throw std::invalid_argument("confusion: estimate and truth grids differ in geometry");
  ConfusionCounts c;
  truth.geometry().for_each_center_in(
      bounds(roi), [&](const Vec3& p) { return contains(roi, p); },
      [&](CellIndex i, const Vec3&) { tally(c, estimate[i], truth[i]); });
  return c;
}

double f1(const ConfusionCounts& c) {
  const auto tp2 = static_cast<double>(2 * c.tp);
  const double denom = tp2 + static_cast<double>(c.fp + c.fn + c.uf + c.uo);
  if (denom == 0.0) return 1.0;
  return tp2 / denom;
}

double kappa(const ConfusionCounts& c) {
  const std::uint64_t s = c.total();
  if (s == 0) throw std::domain_error("kappa: region of interest contains no cells");
  // Integer-valued doubles: exact while s^2 < 2^53.
  const double sd = static_cast<double>(s);
  const double chance = static_cast<double>(c.predicted_occupied()) * static_cast<double>(c.true_occupied()) +
                        static_cast<double>(c.predicted_free()) * static_cast<double>(c.true_free());
  const double agree = static_cast<double>(c.tp + c.tn);
  const double denom = sd * sd - chance;
  if (denom == 0.0) return c.tp + c.tn == s ? 1.0 : 0.0;
  return (sd * agree - chance) / denom;
}

CoverageScores scores(const ConfusionCounts& c) { return {f1(c), kappa(c)}; }

CoverageScores score(const VoxelGrid& estimate, const VoxelGrid& truth, const RegionOfInterest& roi) {
  return scores(confusion(estimate, truth, roi));
}

}  // namespace perispace
