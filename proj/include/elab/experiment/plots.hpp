#pragma once

// Deterministic SVG renderings of rejection curves, rotation differences and
// the sensitivity heatmap. All coordinates are printed with fixed precision so
// identical input gives identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "elab/experiment/tables.hpp"

namespace elab {

namespace detail {

inline std::string fx(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline constexpr const char* kProblemColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                                 "#8c564b", "#e377c2", "#7f7f7f"};

inline const char* problem_color(int problem) {
  return kProblemColors[static_cast<std::size_t>(std::max(problem - 1, 0)) % std::size(kProblemColors)];
}

/// Dark-to-bright ramp; t is clamped to [0, 1].
inline std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double r0 = 13, g0 = 8, b0 = 60, r1 = 250, g1 = 240, b1 = 60;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(r0 + (r1 - r0) * t)),
                static_cast<int>(std::lround(g0 + (g1 - g0) * t)), static_cast<int>(std::lround(b0 + (b1 - b0) * t)));
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

inline std::string svg_open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fx(w) + "\" height=\"" + fx(h) + "\" viewBox=\"0 0 " +
         fx(w) + " " + fx(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + fx(w) + "\" height=\"" + fx(h) + "\" fill=\"#ffffff\"/>\n";
}

inline std::string text(double x, double y, std::string_view s, std::string_view anchor = "start") {
  return "<text x=\"" + fx(x) + "\" y=\"" + fx(y) + "\" text-anchor=\"" + std::string(anchor) + "\">" + escape(s) +
         "</text>\n";
}

inline std::string line(double x1, double y1, double x2, double y2) {
  return "<line x1=\"" + fx(x1) + "\" y1=\"" + fx(y1) + "\" x2=\"" + fx(x2) + "\" y2=\"" + fx(y2) +
         "\" stroke=\"#000000\"/>\n";
}

}  // namespace detail

/// One document per transform kind present in `rows`. Solid lines are mean
/// rejection counts (left axis, 0..55), dashed lines mean EMD (right axis).
inline std::map<TransformKind, std::string> plot_curves(std::span<const CurveRow> rows) {
  using namespace detail;
  if (rows.empty()) throw std::invalid_argument("plot_curves: no curve rows");
  std::map<TransformKind, std::map<int, std::vector<CurvePoint>>> by_kind;
  for (const auto& r : rows) by_kind[r.kind][r.problem].push_back(r.point);

  std::map<TransformKind, std::string> out;
  const double W = 640, H = 400, left = 60, right = 70, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  for (auto& [kind, series] : by_kind) {
    double xmin = INFINITY, xmax = -INFINITY, emax = 0.0;
    for (auto& [p, pts] : series) {
      std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.level < b.level; });
      for (const auto& pt : pts) {
        xmin = std::min(xmin, pt.level);
        xmax = std::max(xmax, pt.level);
        emax = std::max(emax, pt.emd_mean);
      }
    }
    if (xmax == xmin) {
      xmin -= 1.0;
      xmax += 1.0;
    }
    if (!(emax > 0.0)) emax = 1.0;
    auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
    auto sy_rej = [&](double v) { return top + ph - std::clamp(v, 0.0, 55.0) / 55.0 * ph; };
    auto sy_emd = [&](double v) { return top + ph - v / emax * ph; };

    const bool log_axis = kind == TransformKind::XScaling || kind == TransformKind::YScaling;
    std::string svg = svg_open(W, H);
    svg += text(W / 2, 20, std::string(kind_name(kind)), "middle");
    svg += line(left, top + ph, left + pw, top + ph);
    svg += line(left, top, left, top + ph);
    svg += line(left + pw, top, left + pw, top + ph);
    for (int t = 0; t <= 55; t += 11) {
      svg += line(left - 4, sy_rej(t), left, sy_rej(t));
      svg += text(left - 6, sy_rej(t) + 4, std::to_string(t), "end");
    }
    for (int t = 0; t <= 4; ++t) {
      const double v = emax * t / 4.0;
      svg += line(left + pw, sy_emd(v), left + pw + 4, sy_emd(v));
      svg += text(left + pw + 6, sy_emd(v) + 4, fx(v), "start");
    }
    std::set<double> ticks;
    for (const auto& [p, pts] : series)
      for (const auto& pt : pts) ticks.insert(pt.level);
    for (double t : ticks) {
      svg += line(sx(t), top + ph, sx(t), top + ph + 4);
      svg += text(sx(t), top + ph + 16, format_double(t), "middle");
    }
    svg += text(left + pw / 2, H - 12, log_axis ? "log2 factor" : "level", "middle");
    svg += text(14, top + ph / 2, "rejected", "middle");
    svg += text(W - 14, top + ph / 2, "EMD", "middle");

    int legend = 0;
    for (const auto& [p, pts] : series) {
      std::string solid, dashed;
      for (const auto& pt : pts) {
        solid += fx(sx(pt.level)) + "," + fx(sy_rej(pt.n_reject_mean)) + " ";
        dashed += fx(sx(pt.level)) + "," + fx(sy_emd(pt.emd_mean)) + " ";
      }
      if (!solid.empty()) solid.pop_back();
      if (!dashed.empty()) dashed.pop_back();
      const std::string color = problem_color(p);
      svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"" + solid + "\"/>\n";
      svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\" points=\"" +
             dashed + "\"/>\n";
      const double ly = top + 12 + 14 * legend++;
      svg += "<rect x=\"" + fx(left + 8) + "\" y=\"" + fx(ly - 8) + "\" width=\"10\" height=\"10\" fill=\"" + color +
             "\"/>\n";
      svg += text(left + 22, ly + 1, "problem " + std::to_string(p));
    }
    svg += "</svg>\n";
    out.emplace(kind, std::move(svg));
  }
  return out;
}

/// Feature-by-column grid, one column per (problem, transform kind), brighter
/// meaning more sensitive. Undefined cells are drawn grey.
inline std::string plot_heatmap(const SensitivityMatrix& m) {
  using namespace detail;
  if (m.empty()) throw std::invalid_argument("plot_heatmap: empty sensitivity matrix");
  std::set<std::pair<int, TransformKind>> columns;
  for (const auto& [key, cell] : m) columns.insert({key.problem, key.kind});
  const double cw = 18, ch = 12, left = 250, top = 110;
  const double W = left + cw * static_cast<double>(columns.size()) + 20, H = top + ch * kNumFeatures + 20;
  std::string svg = svg_open(W, H);
  std::size_t c = 0;
  for (const auto& [p, kind] : columns) {
    const double x = left + cw * static_cast<double>(c) + cw / 2;
    svg += "<text x=\"" + fx(x) + "\" y=\"" + fx(top - 6) + "\" transform=\"rotate(-60 " + fx(x) + " " +
           fx(top - 6) + ")\">" + std::to_string(p) + " " + std::string(kind_name(kind)) + "</text>\n";
    ++c;
  }
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const double y = top + ch * static_cast<double>(f);
    svg += text(left - 6, y + ch - 2, kFeatureRegistry[f].name, "end");
    c = 0;
    for (const auto& [p, kind] : columns) {
      const auto it = m.find({p, kind, f});
      std::optional<double> v;
      if (it != m.end()) v = it->second.fraction();
      svg += "<rect class=\"cell\" x=\"" + fx(left + cw * static_cast<double>(c)) + "\" y=\"" + fx(y) +
             "\" width=\"" + fx(cw) + "\" height=\"" + fx(ch) + "\" fill=\"" + (v ? ramp(*v) : std::string("#9e9e9e")) +
             "\"/>\n";
      ++c;
    }
  }
  svg += "</svg>\n";
  return svg;
}

/// Rotation differences of the features reaching `threshold_pct` anywhere;
/// one column per (problem, rotation). Colour is log-scaled up to 100%.
inline std::string plot_rotation(std::span<const DiffRows> per_problem, double threshold_pct = 1.0) {
  using namespace detail;
  if (per_problem.empty()) throw std::invalid_argument("plot_rotation: no rotation data");
  std::vector<DiffMatrix> mats;
  for (const auto& p : per_problem) mats.push_back(p.matrix);
  const auto features = affected_features(mats, threshold_pct);
  std::size_t ncol = 0;
  for (const auto& p : per_problem) ncol += p.matrix.size();
  const double cw = 14, ch = 12, left = 250, top = 60;
  const double W = left + cw * static_cast<double>(std::max<std::size_t>(ncol, 1)) + 20;
  const double H = top + ch * static_cast<double>(std::max<std::size_t>(features.size(), 1)) + 30;
  std::string svg = svg_open(W, H);
  svg += text(left, 20, "diff_pct >= " + format_double(threshold_pct) + " (" + std::to_string(features.size()) +
                            " features)");
  std::size_t c = 0;
  for (const auto& p : per_problem) {
    svg += text(left + cw * static_cast<double>(c), top - 8, "p" + std::to_string(p.problem));
    c += p.matrix.size();
  }
  for (std::size_t r = 0; r < features.size(); ++r) {
    const double y = top + ch * static_cast<double>(r);
    svg += text(left - 6, y + ch - 2, kFeatureRegistry[features[r]].name, "end");
    c = 0;
    for (const auto& p : per_problem)
      for (const auto& row : p.matrix) {
        const auto& v = row[features[r]];
        const std::string fill = v ? ramp(std::log10(1.0 + *v) / std::log10(101.0)) : std::string("#9e9e9e");
        svg += "<rect class=\"cell\" x=\"" + fx(left + cw * static_cast<double>(c)) + "\" y=\"" + fx(y) +
               "\" width=\"" + fx(cw) + "\" height=\"" + fx(ch) + "\" fill=\"" + fill + "\"/>\n";
        ++c;
      }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace elab
