#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "elab/experiment/io.hpp"
#include "elab/features/features.hpp"
#include "elab/sampling.hpp"
#include "elab/stats/compare.hpp"

namespace elab {

inline constexpr std::string_view kFeaturesHeader =
    "problem_id,instance_index,transform_kind,level_label,repetition,feature,value\n";
inline constexpr std::string_view kComparisonHeader =
    "problem_id,instance_index,transform_kind,level_label,feature,ks_stat,ks_p,reject,emd\n";
inline constexpr std::string_view kCurveHeader = "problem_id,transform_kind,level,n_reject_mean,emd_mean\n";
inline constexpr std::string_view kSensitivityHeader = "problem_id,transform_kind,feature,sensitivity\n";
inline constexpr std::string_view kDiffHeader = "problem_id,rotation_index,feature,diff_pct\n";
inline constexpr std::string_view kProjectionHeader = "problem_id,instance_index,repetition,u1,u2\n";

/// (problem, instance_index) -> descriptor.
using InstanceCatalog = std::map<std::pair<int, int>, InstanceDescriptor>;

inline InstanceCatalog make_catalog(const std::vector<InstanceDescriptor>& all) {
  InstanceCatalog c;
  for (const auto& d : all) c.emplace(std::pair{to_int(d.problem), d.instance_index}, d);
  return c;
}

inline const InstanceDescriptor& lookup(const InstanceCatalog& c, int problem, int instance) {
  const auto it = c.find({problem, instance});
  if (it == c.end())
    throw std::invalid_argument("unknown instance: problem " + std::to_string(problem) + " instance " +
                                std::to_string(instance));
  return it->second;
}

/// Feature vectors of a run, ordered by (problem, instance, repetition).
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(std::vector<FeatureVector> rows) : rows_(std::move(rows)) { sort(); }

  void sort() {
    std::sort(rows_.begin(), rows_.end(), [](const FeatureVector& a, const FeatureVector& b) {
      return key(a) < key(b);
    });
  }

  const std::vector<FeatureVector>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  /// All repetitions of one instance.
  std::span<const FeatureVector> instance(int problem, int instance_index) const {
    const auto lo = std::lower_bound(rows_.begin(), rows_.end(), std::tuple{problem, instance_index, INT_MIN},
                                     [](const FeatureVector& r, const auto& k) { return key(r) < k; });
    auto hi = lo;
    while (hi != rows_.end() && hi->provenance.problem == problem && hi->provenance.instance_index == instance_index)
      ++hi;
    return {lo, hi};
  }

  static std::tuple<int, int, int> key(const FeatureVector& r) {
    return {r.provenance.problem, r.provenance.instance_index, r.provenance.repetition};
  }

 private:
  std::vector<FeatureVector> rows_;
};

/// The 55 long-format lines of one feature vector.
inline std::string feature_rows_text(const FeatureVector& fv, const InstanceDescriptor& desc) {
  const std::string prefix = std::to_string(fv.provenance.problem) + "," + std::to_string(fv.provenance.instance_index) +
                             "," + std::string(kind_name(desc.kind())) + "," + level_label(desc) + "," +
                             std::to_string(fv.provenance.repetition) + ",";
  std::string out;
  out.reserve(kNumFeatures * (prefix.size() + 48));
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    out += prefix;
    out += kFeatureRegistry[f].name;
    out += ',';
    out += format_optional(fv.values[f]);
    out += '\n';
  }
  return out;
}

inline std::string features_csv(const FeatureTable& table, const InstanceCatalog& catalog) {
  std::string out(kFeaturesHeader);
  for (const auto& fv : table.rows())
    out += feature_rows_text(fv, lookup(catalog, fv.provenance.problem, fv.provenance.instance_index));
  return out;
}

/// Parses long-format feature rows into vectors, in file order. Each vector
/// must list the registry features in order. With `tolerate_tail`, a
/// truncated last line or an incomplete last vector is dropped (the state of
/// an interrupted partial file); otherwise either is an error.
inline std::vector<FeatureVector> parse_features_csv(std::string_view text, bool tolerate_tail = false) {
  std::vector<FeatureVector> out;
  if (text.empty()) {
    if (tolerate_tail) return out;
    throw IoError("features.csv: empty file");
  }
  if (text.back() != '\n') {
    if (!tolerate_tail) throw IoError("features.csv: truncated last line");
    text = text.substr(0, text.rfind('\n') + 1);
  }
  std::size_t pos = text.find('\n');
  if (pos == std::string_view::npos) return out;
  if (text.substr(0, pos + 1) != kFeaturesHeader) throw IoError("features.csv: unexpected header");
  ++pos;

  FeatureVector cur;
  std::size_t next = 0;  // registry index expected on the next line
  std::size_t line_no = 1;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) throw IoError("features.csv line " + std::to_string(line_no) + ": expected 7 columns");
    const int problem = static_cast<int>(parse_int(cells[0]));
    const int instance = static_cast<int>(parse_int(cells[1]));
    const int rep = static_cast<int>(parse_int(cells[4]));
    if (next > 0 && (problem != cur.provenance.problem || instance != cur.provenance.instance_index ||
                     rep != cur.provenance.repetition)) {
      if (!tolerate_tail)
        throw IoError("features.csv line " + std::to_string(line_no) + ": incomplete feature vector before it");
      next = 0;  // drop the incomplete vector
    }
    if (cells[5] != kFeatureRegistry[next].name)
      throw std::invalid_argument("features.csv line " + std::to_string(line_no) + ": feature '" +
                                  std::string(cells[5]) + "' does not match registry entry '" +
                                  std::string(kFeatureRegistry[next].name) + "'");
    if (next == 0) {
      cur = FeatureVector{};
      cur.provenance = {problem, instance, rep, 0};
    }
    if (!cells[6].empty()) cur.values[next] = parse_double(cells[6]);
    if (++next == kNumFeatures) {
      out.push_back(cur);
      next = 0;
    }
  }
  if (next != 0 && !tolerate_tail) throw IoError("features.csv: incomplete last feature vector");
  return out;
}

inline FeatureTable load_features_csv(const fs::path& path) {
  return FeatureTable(parse_features_csv(read_file(path)));
}

/// Design points with header x1..xd, and a trailing y column when values are given.
inline std::string sample_csv(const Design& design, std::span<const double> values = {}) {
  if (!values.empty() && values.size() != design.size())
    throw std::invalid_argument("sample_csv: value count does not match design size");
  std::string out;
  for (std::size_t j = 1; j <= design.dimension(); ++j) out += (j > 1 ? ",x" : "x") + std::to_string(j);
  out += values.empty() ? "\n" : ",y\n";
  for (std::size_t i = 0; i < design.size(); ++i) {
    const auto x = design.point(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j) out += ',';
      out += format_double(x[j]);
    }
    if (!values.empty()) out += "," + format_double(values[i]);
    out += '\n';
  }
  return out;
}

/// Reads a sample.csv (x1..xd,y) back into an evaluated sample.
inline EvaluatedSample parse_sample_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = text.find('\n');
  if (pos == std::string_view::npos) throw IoError("sample.csv: missing header");
  const auto header = split_csv_line(text.substr(0, pos));
  if (header.size() < 2 || header.back() != "y") throw IoError("sample.csv: header must be x1..xd,y");
  ++pos;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw IoError("sample.csv: ragged row");
    std::vector<double> r;
    for (auto c : cells) r.push_back(parse_double(c));
    rows.push_back(std::move(r));
  }
  const auto d = header.size() - 1;
  PointMatrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  std::vector<double> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    y[i] = rows[i][d];
  }
  return make_sample(std::move(x), std::move(y));
}

inline std::string comparison_csv(std::span<const ComparisonReport> reports, const InstanceCatalog& catalog) {
  std::string out(kComparisonHeader);
  for (const auto& r : reports) {
    const auto& desc = lookup(catalog, r.key.problem, r.key.instance_index);
    const std::string prefix = std::to_string(r.key.problem) + "," + std::to_string(r.key.instance_index) + "," +
                               std::string(kind_name(r.key.kind)) + "," + level_label(desc) + ",";
    for (const auto& row : r.rows) {
      out += prefix;
      out += kFeatureRegistry[row.feature].name;
      if (row.ks.insufficient_data) {
        out += ",,,insufficient,";
      } else {
        out += "," + format_double(row.ks.statistic) + "," + format_double(row.ks.p_value) + "," +
               (row.ks.reject ? "1" : "0") + ",";
      }
      out += format_optional(row.emd);
      out += '\n';
    }
  }
  return out;
}

struct CurveRow {
  int problem = 0;
  TransformKind kind = TransformKind::Identity;
  CurvePoint point;
};

inline std::string curve_csv(std::span<const CurveRow> rows) {
  std::string out(kCurveHeader);
  for (const auto& r : rows)
    out += std::to_string(r.problem) + "," + std::string(kind_name(r.kind)) + "," + format_double(r.point.level) +
           "," + format_double(r.point.n_reject_mean) + "," + format_double(r.point.emd_mean) + "\n";
  return out;
}

inline std::string sensitivity_csv(const SensitivityMatrix& m) {
  std::string out(kSensitivityHeader);
  for (const auto& [key, cell] : m)
    out += std::to_string(key.problem) + "," + std::string(kind_name(key.kind)) + "," +
           std::string(kFeatureRegistry[key.feature].name) + "," + format_optional(cell.fraction()) + "\n";
  return out;
}

struct DiffRows {
  int problem = 0;
  std::vector<int> rotation_index;  // parallel to matrix rows
  DiffMatrix matrix;
};

inline std::string diff_csv(std::span<const DiffRows> per_problem) {
  std::string out(kDiffHeader);
  for (const auto& p : per_problem)
    for (std::size_t i = 0; i < p.matrix.size(); ++i)
      for (std::size_t f = 0; f < kNumFeatures; ++f)
        out += std::to_string(p.problem) + "," + std::to_string(p.rotation_index[i]) + "," +
               std::string(kFeatureRegistry[f].name) + "," + format_optional(p.matrix[i][f]) + "\n";
  return out;
}

inline std::string projection_csv(const FeatureTable& table, std::span<const std::pair<double, double>> coords) {
  if (coords.size() != table.size()) throw std::invalid_argument("projection_csv: row count mismatch");
  std::string out(kProjectionHeader);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto& p = table.rows()[i].provenance;
    out += std::to_string(p.problem) + "," + std::to_string(p.instance_index) + "," + std::to_string(p.repetition) +
           "," + format_double(coords[i].first) + "," + format_double(coords[i].second) + "\n";
  }
  return out;
}

}  // namespace elab
