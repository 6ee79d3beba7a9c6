#include "perispace/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "json.hpp"
#include "perispace/error.hpp"

namespace perispace {

namespace {

constexpr std::size_t kColumns = 21;

std::string fixed6(double v) {
  char buf[64];
  // Avoid "-0.000000" so byte output does not depend on the sign of zero.
  if (std::abs(v) < 5e-7) v = 0.0;
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return std::string(buf, r.ptr);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_field(std::string_view s, std::size_t line, const char* column) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": column '" + column + "': invalid number '" +
                     std::string(s) + "'");
  return v;
}

// Stable small-integer ids for strings in order of first appearance.
class Interner {
 public:
  std::size_t operator()(const std::string& s) {
    const auto [it, _] = ids_.try_emplace(s, ids_.size());
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::size_t> ids_;
};

nlohmann::json stats_json(std::vector<double> values) {
  nlohmann::json j;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  j["min"] = *lo;
  j["max"] = *hi;
  j["median"] = median(std::move(values));
  return j;
}

nlohmann::json pose_json(const PoseScore& p, Metric m) {
  nlohmann::json j;
  j["combo_id"] = p.combo_id;
  j["pose_id"] = p.pose_id;
  j["surface"] = p.surface;
  j["position"] = {p.position.x(), p.position.y(), p.position.z()};
  j[std::string(metric_name(m))] = p.value(m);
  return j;
}

using GroupKey = std::tuple<std::string, std::string, std::string, std::string>;  // combo, group, roi, interp

std::string format_value(double v) {
  if (std::isnan(v)) return "n/a";
  return fixed6(v);
}

}  // namespace

void write_records_csv(std::ostream& os, std::span<const SweepRecord> records) {
  os << kRecordsHeader << '\n';
  for (const SweepRecord& r : records) {
    const Vec3& p = r.pose.position;
    const Quat& q = r.pose.orientation;
    os << r.combo_id << ',' << r.pose_id << ',' << r.surface << ',' << fixed6(p.x()) << ',' << fixed6(p.y()) << ','
       << fixed6(p.z()) << ',' << fixed6(q.w()) << ',' << fixed6(q.x()) << ',' << fixed6(q.y()) << ','
       << fixed6(q.z()) << ',' << r.scene << ',' << r.roi << ',' << r.interp << ',' << r.counts.tp << ','
       << r.counts.fp << ',' << r.counts.fn << ',' << r.counts.tn << ',' << r.counts.uo << ',' << r.counts.uf << ','
       << fixed6(r.scores.f1) << ',' << fixed6(r.scores.kappa) << '\n';
  }
}

std::vector<SweepRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("line 1: empty records file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw ParseError("line 1: unexpected header (expected '" + std::string(kRecordsHeader) + "')");

  Interner combos, scenes, rois, interps;
  std::vector<SweepRecord> out;
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != kColumns)
      throw ParseError("line " + std::to_string(n) + ": expected " + std::to_string(kColumns) + " fields, found " +
                       std::to_string(f.size()));
    SweepRecord r;
    r.combo_id = std::string(f[0]);
    r.pose_id = parse_field<std::size_t>(f[1], n, "pose_id");
    r.surface = std::string(f[2]);
    r.pose.position = Vec3(parse_field<double>(f[3], n, "px"), parse_field<double>(f[4], n, "py"),
                           parse_field<double>(f[5], n, "pz"));
    r.pose.orientation = Quat(parse_field<double>(f[6], n, "qw"), parse_field<double>(f[7], n, "qx"),
                              parse_field<double>(f[8], n, "qy"), parse_field<double>(f[9], n, "qz"));
    r.scene = std::string(f[10]);
    r.roi = std::string(f[11]);
    r.interp = std::string(f[12]);
    r.counts.tp = parse_field<std::uint64_t>(f[13], n, "tp");
    r.counts.fp = parse_field<std::uint64_t>(f[14], n, "fp");
    r.counts.fn = parse_field<std::uint64_t>(f[15], n, "fn");
    r.counts.tn = parse_field<std::uint64_t>(f[16], n, "tn");
    r.counts.uo = parse_field<std::uint64_t>(f[17], n, "uo");
    r.counts.uf = parse_field<std::uint64_t>(f[18], n, "uf");
    r.scores.f1 = parse_field<double>(f[19], n, "f1");
    r.scores.kappa = parse_field<double>(f[20], n, "kappa");
    if (r.combo_id.empty() || r.scene.empty() || r.roi.empty() || r.interp.empty())
      throw ParseError("line " + std::to_string(n) + ": empty identifier field");
    r.combo_index = combos(r.combo_id);
    r.scene_index = scenes(r.scene);
    r.roi_index = rois(r.roi);
    r.interp_index = interps(r.interp);
    out.push_back(std::move(r));
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void write_summary_json(std::ostream& os, std::span<const AggregateRecord> aggregated, const RunInfo& info) {
  std::map<GroupKey, std::vector<const AggregateRecord*>> groups;
  for (const AggregateRecord& r : aggregated) groups[{r.combo_id, r.group, r.roi, r.interp}].push_back(&r);

  nlohmann::ordered_json doc;
  doc["seed"] = info.seed;
  doc["resolution"] = info.resolution;
  doc["mode"] = info.mode;
  doc["aggregation"] = info.aggregation;
  doc["groups"] = nlohmann::ordered_json::array();
  for (const auto& [key, recs] : groups) {
    nlohmann::ordered_json g;
    g["combo_id"] = std::get<0>(key);
    g["scene"] = std::get<1>(key);
    g["roi"] = std::get<2>(key);
    g["interp"] = std::get<3>(key);
    g["poses"] = recs.size();
    g["snapshots"] = recs.front()->snapshots;
    std::vector<double> f1s, kappas;
    std::vector<PoseScore> poses;
    for (const AggregateRecord* r : recs) {
      f1s.push_back(r->scores.f1);
      kappas.push_back(r->scores.kappa);
      poses.push_back(to_pose_score(*r));
    }
    g["f1"] = stats_json(std::move(f1s));
    g["kappa"] = stats_json(std::move(kappas));
    for (Metric m : {Metric::F1, Metric::Kappa}) {
      nlohmann::json top = nlohmann::json::array();
      for (const PoseScore& p : rank(poses, m, 5)) top.push_back(pose_json(p, m));
      g["top"][std::string(metric_name(m))] = top;
    }
    doc["groups"].push_back(std::move(g));
  }
  os << doc.dump(2) << '\n';
}

std::vector<HeatmapGroup> heatmap_groups(std::span<const AggregateRecord> aggregated, Metric metric) {
  std::map<GroupKey, std::vector<PoseScore>> groups;
  for (const AggregateRecord& r : aggregated)
    groups[{r.combo_id, r.group, r.roi, r.interp}].push_back(to_pose_score(r));
  std::vector<HeatmapGroup> out;
  for (const auto& [key, scores] : groups)
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key),
                   build_heatmap(scores, metric)});
  return out;
}

void write_heatmap_csv(std::ostream& os, const HeatmapSurface& s) {
  os << "v\\u";
  for (double u : s.u) os << ',' << fixed6(u);
  os << '\n';
  for (std::size_t iv = 0; iv < s.v.size(); ++iv) {
    os << fixed6(s.v[iv]);
    for (std::size_t iu = 0; iu < s.u.size(); ++iu) {
      const double v = s.at(iu, iv);
      os << ',' << (std::isnan(v) ? std::string("nan") : fixed6(v));
    }
    os << '\n';
  }
}

std::uint8_t pixel_value(double score) {
  if (std::isnan(score)) return 0;
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(score, 0.0, 1.0)));
}

void write_heatmap_pgm(std::ostream& os, const HeatmapSurface& s) {
  os << "P5\n" << s.u.size() << ' ' << s.v.size() << "\n255\n";
  for (std::size_t iv = 0; iv < s.v.size(); ++iv)
    for (std::size_t iu = 0; iu < s.u.size(); ++iu) os.put(static_cast<char>(pixel_value(s.at(iu, iv))));
}

std::vector<RelativeMaximum> relative_maxima(std::span<const AggregateRecord> aggregated) {
  auto members = [](const std::string& combo) {
    std::set<std::string> out;
    std::size_t start = 0;
    for (;;) {
      const std::size_t plus = combo.find('+', start);
      out.insert(combo.substr(start, plus - start));
      if (plus == std::string::npos) break;
      start = plus + 1;
    }
    return out;
  };
  std::set<std::string> all;
  std::set<std::string> combos;
  for (const AggregateRecord& r : aggregated) {
    combos.insert(r.combo_id);
    for (const auto& m : members(r.combo_id)) all.insert(m);
  }
  if (combos.size() < 2) return {};
  std::string full;
  for (const std::string& c : combos)
    if (members(c) == all) full = c;
  if (full.empty()) return {};

  // (group, roi) -> combo -> (max f1, max kappa)
  std::map<std::pair<std::string, std::string>, std::map<std::string, std::pair<double, double>>> best;
  for (const AggregateRecord& r : aggregated) {
    auto [it, inserted] = best[{r.group, r.roi}].try_emplace(r.combo_id, r.scores.f1, r.scores.kappa);
    if (!inserted) {
      it->second.first = std::max(it->second.first, r.scores.f1);
      it->second.second = std::max(it->second.second, r.scores.kappa);
    }
  }
  // Combos in evaluation order: by member count, then name.
  auto combo_order = [&](const std::string& a, const std::string& b) {
    const auto na = members(a).size(), nb = members(b).size();
    return na != nb ? na < nb : a < b;
  };

  std::vector<RelativeMaximum> out;
  for (const auto& [key, per_combo] : best) {
    const auto full_it = per_combo.find(full);
    if (full_it == per_combo.end()) continue;
    std::vector<std::string> order;
    for (const auto& [c, _] : per_combo) order.push_back(c);
    std::sort(order.begin(), order.end(), combo_order);
    for (Metric m : {Metric::F1, Metric::Kappa}) {
      const double ref = m == Metric::F1 ? full_it->second.first : full_it->second.second;
      for (const std::string& c : order) {
        const auto& v = per_combo.at(c);
        const double value = m == Metric::F1 ? v.first : v.second;
        double rel = ref == 0.0 ? std::nan("") : value / ref;
        if (c == full) rel = ref == 0.0 ? std::nan("") : 1.0;
        out.push_back({key.first, key.second, m, c, value, rel});
      }
    }
  }
  return out;
}

void write_report(std::ostream& os, std::span<const AggregateRecord> aggregated, std::size_t k) {
  if (k == 0) throw std::invalid_argument("report: k must be at least 1");
  std::map<std::pair<std::string, std::string>, std::vector<const AggregateRecord*>> groups;
  for (const AggregateRecord& r : aggregated) groups[{r.group, r.roi}].push_back(&r);

  for (const auto& [key, recs] : groups) {
    for (Metric m : {Metric::F1, Metric::Kappa}) {
      std::vector<PoseScore> scores;
      for (const AggregateRecord* r : recs) scores.push_back(to_pose_score(*r));
      // rank() drops the interpretation; rank per record index instead.
      std::vector<std::size_t> idx(recs.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double va = scores[a].value(m), vb = scores[b].value(m);
        if (va != vb) return va > vb;
        const PoseScore &pa = scores[a], &pb = scores[b];
        return std::forward_as_tuple(pa.surface, pa.position.x(), pa.position.y(), pa.position.z(), pa.pose_id,
                                     pa.combo_id, recs[a]->interp) <
               std::forward_as_tuple(pb.surface, pb.position.x(), pb.position.y(), pb.position.z(), pb.pose_id,
                                     pb.combo_id, recs[b]->interp);
      });
      os << "== scene " << key.first << "  roi " << key.second << "  metric " << metric_name(m) << "  (top "
         << std::min(k, idx.size()) << " of " << idx.size() << ")\n";
      os << "rank  " << std::left << std::setw(10) << metric_name(m) << std::setw(16) << "combo" << std::setw(8)
         << "interp" << std::setw(8) << "pose" << std::setw(10) << "surface" << "position\n" << std::right;
      for (std::size_t i = 0; i < std::min(k, idx.size()); ++i) {
        const AggregateRecord& r = *recs[idx[i]];
        os << std::setw(4) << i + 1 << "  " << std::left << std::setw(10) << fixed6(scores[idx[i]].value(m))
           << std::setw(16) << r.combo_id << std::setw(8) << r.interp << std::setw(8) << r.pose_id << std::setw(10)
           << r.surface << fixed6(r.pose.position.x()) << ' ' << fixed6(r.pose.position.y()) << ' '
           << fixed6(r.pose.position.z()) << '\n'
           << std::right;
      }
    }
  }

  const auto rel = relative_maxima(aggregated);
  if (rel.empty()) return;
  os << "\n== combination maxima relative to the full set\n";
  os << std::left << std::setw(16) << "scene" << std::setw(10) << "roi" << std::setw(8) << "metric" << std::setw(28)
     << "combo" << std::setw(12) << "max" << "relative\n";
  for (const RelativeMaximum& r : rel)
    os << std::setw(16) << r.group << std::setw(10) << r.roi << std::setw(8) << metric_name(r.metric) << std::setw(28)
       << r.combo_id << std::setw(12) << format_value(r.maximum) << format_value(r.relative) << '\n';
  os << std::right;
}

}  // namespace perispace
