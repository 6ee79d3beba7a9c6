#pragma once

// Record tables and derived outputs: records.csv, summary.json, heatmap
// matrices/images and the text report.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "perispace/placement.hpp"

namespace perispace {

inline constexpr const char* kRecordsHeader =
    "combo_id,pose_id,surface,px,py,pz,qw,qx,qy,qz,scene,roi,interp,tp,fp,fn,tn,uo,uf,f1,kappa";

// Metrics and pose components with 6 decimals, counts as integers.
void write_records_csv(std::ostream& os, std::span<const SweepRecord> records);

// Throws ParseError("line N: ...") on a bad header, field count or number.
// Index fields are assigned in order of first appearance.
std::vector<SweepRecord> read_records_csv(std::istream& is);

struct RunInfo {
  std::uint64_t seed = 0;
  double resolution = 0.0;
  std::string mode;
  std::string aggregation;
};

// Per (combo, scene group, roi, interp): min/median/max of both metrics over
// the aggregated poses plus the top-5 ranking per metric.
void write_summary_json(std::ostream& os, std::span<const AggregateRecord> aggregated, const RunInfo& info);

double median(std::vector<double> values);

// One heatmap per (combo, group, roi, interp) present in the records.
struct HeatmapGroup {
  std::string combo_id;
  std::string group;
  std::string roi;
  std::string interp;
  Heatmap heatmap;
};
std::vector<HeatmapGroup> heatmap_groups(std::span<const AggregateRecord> aggregated, Metric metric);

// Matrix with u across columns and v down rows (ascending); empty cells "nan".
void write_heatmap_csv(std::ostream& os, const HeatmapSurface& surface);
// P5 graymap, width = |u|, height = |v|, row iv = v index iv; pixel =
// round(255 * clamp(value, 0, 1)), absent positions 0.
void write_heatmap_pgm(std::ostream& os, const HeatmapSurface& surface);
std::uint8_t pixel_value(double score);

// Top-k per (group, roi, metric); for multi-member combination sweeps also
// each combination's maximum relative to the full set's maximum.
void write_report(std::ostream& os, std::span<const AggregateRecord> aggregated, std::size_t k);

struct RelativeMaximum {
  std::string group;
  std::string roi;
  Metric metric = Metric::F1;
  std::string combo_id;
  double maximum = 0.0;
  double relative = 0.0;  // NaN when the full-set maximum is 0
};
// Empty unless one combination contains every sensor seen in the records.
std::vector<RelativeMaximum> relative_maxima(std::span<const AggregateRecord> aggregated);

}  // namespace perispace
