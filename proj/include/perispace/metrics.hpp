#pragma once

#include <cstdint>
#include <span>

#include "perispace/geometry.hpp"
#include "perispace/occupancy.hpp"

namespace perispace {

// Six-way tally of predicted vs true state. Truth is never Unknown, so the
// Unknown prediction splits into unmonitored-occupied (uo) and
// unmonitored-free (uf).
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  std::uint64_t uo = 0;
  std::uint64_t uf = 0;

  std::uint64_t total() const { return tp + fp + fn + tn + uo + uf; }
  std::uint64_t true_occupied() const { return tp + fn + uo; }
  std::uint64_t true_free() const { return fp + tn + uf; }
  std::uint64_t predicted_occupied() const { return tp + fp; }
  std::uint64_t predicted_free() const { return tn + fn; }
  std::uint64_t predicted_unknown() const { return uo + uf; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    uo += o.uo;
    uf += o.uf;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

struct CoverageScores {
  double f1 = 0.0;
  double kappa = 0.0;
  bool operator==(const CoverageScores&) const = default;
};

// Adds one (prediction, truth) pair. Unknown truth is a precondition violation
// and is counted as free.
inline void tally(ConfusionCounts& c, CellState predicted, CellState truth) {
  const bool occupied = truth == CellState::Occupied;
  switch (predicted) {
    case CellState::Occupied: (occupied ? c.tp : c.fp)++; break;
    case CellState::Free: (occupied ? c.fn : c.tn)++; break;
    case CellState::Unknown: (occupied ? c.uo : c.uf)++; break;
  }
}

// Tally over the cells whose centres lie in `roi`. Throws
// std::invalid_argument on mismatched grid geometry.
ConfusionCounts confusion(const VoxelGrid& estimate, const VoxelGrid& truth, const RegionOfInterest& roi);

// Same tally over a precomputed ROI cell list.
ConfusionCounts confusion(const VoxelGrid& estimate, const VoxelGrid& truth, std::span<const CellIndex> roi_cells);

// 2TP / (2TP + FP + FN + UF + UO); 1.0 when the denominator vanishes.
double f1(const ConfusionCounts& c);

// Multi-class Cohen's kappa over {occupied, free, unknown} with a zero
// unknown truth total. Throws std::domain_error when the tally is empty.
double kappa(const ConfusionCounts& c);

CoverageScores scores(const ConfusionCounts& c);
CoverageScores score(const VoxelGrid& estimate, const VoxelGrid& truth, const RegionOfInterest& roi);

}  // namespace perispace
