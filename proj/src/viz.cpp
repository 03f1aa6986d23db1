// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gamsom/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "gamsom/errors.hpp"

namespace gamsom {
namespace {

constexpr double kGoldenAngle = 2.399963229728653;

// Dark blue (similar) to pale yellow (dissimilar), YlGnBu-style ramp.
struct ColorStop {
  double t;
  int r, g, b;
};
constexpr ColorStop kUmatrixStops[] = {
    {0.00, 0x08, 0x1d, 0x58}, {0.25, 0x25, 0x34, 0x94}, {0.50, 0x41, 0xb6, 0xc4},
    {0.75, 0xc7, 0xe9, 0xb4}, {1.00, 0xff, 0xff, 0xd9},
};

const char* kEnsemblePalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void svg_open(std::ostringstream& svg, double width, double height,
              const PlotStyle& style) {
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << fmt(width) << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 "
      << fmt(width) << " " << fmt(height) << "\">\n";
  if (!style.provenance.empty()) {
    std::string prov = style.provenance;
    // "--" is forbidden inside XML comments.
    std::size_t pos;
    while ((pos = prov.find("--")) != std::string::npos) prov.replace(pos, 2, "- ");
    svg << "<!-- provenance: " << prov << " -->\n";
  }
}

void draw_marker(std::ostringstream& svg, Region region, double cx, double cy,
                 double r, const std::string& color) {
  if (region == Region::Indonesian) {
    svg << "<circle class=\"piece\" cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy)
        << "\" r=\"" << fmt(r) << "\" fill=\"" << color
        << "\" stroke=\"#222222\" stroke-width=\"0.6\"/>\n";
  } else {
    svg << "<path class=\"piece\" d=\"M " << fmt(cx) << " " << fmt(cy - r) << " L "
        << fmt(cx + r) << " " << fmt(cy) << " L " << fmt(cx) << " " << fmt(cy + r)
        << " L " << fmt(cx - r) << " " << fmt(cy) << " Z\" fill=\"" << color
        << "\" stroke=\"#222222\" stroke-width=\"0.6\"/>\n";
  }
}

void draw_heatmap(std::ostringstream& svg, const std::vector<double>& values,
                  std::size_t width, std::size_t height, double x0, double y0,
                  double cell, double vmin, double vmax) {
  const double range = vmax - vmin;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double v = values[y * width + x];
      const double t = range > 0.0 ? (v - vmin) / range : 0.0;
      svg << "<rect class=\"cell\" x=\"" << fmt(x0 + x * cell) << "\" y=\""
          << fmt(y0 + y * cell) << "\" width=\"" << fmt(cell) << "\" height=\""
          << fmt(cell) << "\" fill=\"" << umatrix_color(t) << "\"/>\n";
    }
  }
}

}  // namespace

std::string umatrix_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const std::size_t n = std::size(kUmatrixStops);
  std::size_t hi = 1;
  while (hi + 1 < n && kUmatrixStops[hi].t < t) ++hi;
  const auto& a = kUmatrixStops[hi - 1];
  const auto& b = kUmatrixStops[hi];
  const double f = (t - a.t) / (b.t - a.t);
  const auto lerp = [f](int lo, int hi_c) {
    return static_cast<int>(std::lround(lo + f * (hi_c - lo)));
  };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", lerp(a.r, b.r), lerp(a.g, b.g),
                lerp(a.b, b.b));
  return buf;
}

std::vector<std::pair<std::string, std::string>> ensemble_colors(
    const CorpusManifest& manifest) {
  std::set<std::string> names;
  for (const auto& e : manifest.entries) names.insert(e.ensemble);
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  for (const auto& name : names) {
    out.emplace_back(name, kEnsemblePalette[i % std::size(kEnsemblePalette)]);
    ++i;
  }
  return out;
}

std::string plot_som_map(const SomModel& model, const UMatrix& umatrix,
                         const std::vector<Placement>& placements,
                         const CorpusManifest& manifest, const PlotStyle& style) {
  if (umatrix.width != model.width || umatrix.height != model.height) {
    throw InconsistentInputs("u-matrix grid does not match the model grid");
  }
  for (const auto& p : placements) {
    if (p.x >= model.width || p.y >= model.height) {
      throw InconsistentInputs("placement for \"" + p.recording_id +
                               "\" lies outside the grid");
    }
    if (manifest.find(p.recording_id) == nullptr) {
      throw InconsistentInputs("placement id \"" + p.recording_id +
                               "\" is not in the manifest");
    }
  }

  const auto colors = ensemble_colors(manifest);
  const auto color_of = [&colors](const std::string& ensemble) -> std::string {
    for (const auto& [name, color] : colors) {
      if (name == ensemble) return color;
    }
    return "#000000";
  };

  const double cell = style.cell_px;
  const double m = style.margin_px;
  const double grid_w = cell * static_cast<double>(model.width);
  const double grid_h = cell * static_cast<double>(model.height);
  const double legend_w = 190.0;
  const double width = m + grid_w + legend_w + m;
  const double height = m + std::max(grid_h, 40.0 + 16.0 * (colors.size() + 2)) + m;

  std::ostringstream svg;
  svg_open(svg, width, height, style);
  svg << "<title>" << xml_escape(manifest.corpus_name) << " best-match map</title>\n";

  const double vmin = *std::min_element(umatrix.values.begin(), umatrix.values.end());
  const double vmax = *std::max_element(umatrix.values.begin(), umatrix.values.end());
  draw_heatmap(svg, umatrix.values, umatrix.width, umatrix.height, m, m, cell, vmin,
               vmax);

  // Group placements per cell so co-located pieces can be jittered apart
  // on a golden-angle spiral.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<const Placement*>> by_cell;
  for (const auto& p : placements) {
    by_cell[{p.y, p.x}].push_back(&p);
  }
  for (const auto& [cell_yx, group] : by_cell) {
    const double cx0 = m + (static_cast<double>(cell_yx.second) + 0.5) * cell;
    const double cy0 = m + (static_cast<double>(cell_yx.first) + 0.5) * cell;
    for (std::size_t i = 0; i < group.size(); ++i) {
      double cx = cx0;
      double cy = cy0;
      if (group.size() > 1) {
        const double r = 0.38 * cell *
            std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(group.size()));
        const double theta = static_cast<double>(i) * kGoldenAngle;
        cx += r * std::cos(theta);
        cy += r * std::sin(theta);
      }
      const RecordingEntry* entry = manifest.find(group[i]->recording_id);
      draw_marker(svg, entry->region, cx, cy, style.marker_r, color_of(entry->ensemble));
    }
  }

  // Legend: ensemble colors plus the region marker key.
  const double lx = m + grid_w + 24.0;
  double ly = m + 10.0;
  svg << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly)
      << "\" font-family=\"sans-serif\" font-size=\"11\" font-weight=\"bold\">"
      << "Ensembles</text>\n";
  ly += 16.0;
  for (const auto& [name, color] : colors) {
    svg << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - 8.0)
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << fmt(lx + 16.0) << "\" y=\"" << fmt(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(name)
        << "</text>\n";
    ly += 16.0;
  }
  ly += 8.0;
  draw_marker(svg, Region::Indonesian, lx + 5.0, ly - 4.0, 5.0, "#999999");
  svg << "<text x=\"" << fmt(lx + 16.0) << "\" y=\"" << fmt(ly)
      << "\" font-family=\"sans-serif\" font-size=\"11\">Indonesian</text>\n";
  ly += 16.0;
  draw_marker(svg, Region::Western, lx + 5.0, ly - 4.0, 5.0, "#999999");
  svg << "<text x=\"" << fmt(lx + 16.0) << "\" y=\"" << fmt(ly)
      << "\" font-family=\"sans-serif\" font-size=\"11\">Western</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

std::string plot_component_planes(const SomModel& model, const PlotStyle& style) {
  const auto planes = component_planes(model);
  const double cell = std::max(6.0, style.cell_px * 0.55);
  const double m = 24.0;
  const double plane_w = cell * static_cast<double>(model.width);
  const double plane_h = cell * static_cast<double>(model.height);
  const double slot_w = plane_w + 34.0;   // heatmap + colorbar
  const double slot_h = plane_h + 34.0;   // heatmap + title
  const std::size_t per_row = std::min<std::size_t>(std::max<std::size_t>(planes.size(), 1), 8);
  const std::size_t n_rows = (planes.size() + per_row - 1) / per_row;
  const double width = m + slot_w * static_cast<double>(per_row) + m;
  const double height = m + slot_h * static_cast<double>(n_rows) + m;

  std::ostringstream svg;
  svg_open(svg, width, height, style);
  svg << "<title>component planes</title>\n";

  for (std::size_t p = 0; p < planes.size(); ++p) {
    const auto& plane = planes[p];
    const double x0 = m + slot_w * static_cast<double>(p % per_row);
    const double y0 = m + slot_h * static_cast<double>(p / per_row) + 14.0;
    const double vmin = *std::min_element(plane.values.begin(), plane.values.end());
    const double vmax = *std::max_element(plane.values.begin(), plane.values.end());

    svg << "<text x=\"" << fmt(x0) << "\" y=\"" << fmt(y0 - 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(plane.feature_name) << "</text>\n";
    draw_heatmap(svg, plane.values, model.width, model.height, x0, y0, cell, vmin,
                 vmax);

    // Per-plane colorbar, independently scaled min -> max.
    const double bx = x0 + plane_w + 6.0;
    const std::size_t bar_steps = 16;
    const double bar_h = plane_h / static_cast<double>(bar_steps);
    for (std::size_t s = 0; s < bar_steps; ++s) {
      const double t = 1.0 - (static_cast<double>(s) + 0.5) / bar_steps;
      svg << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(y0 + s * bar_h)
          << "\" width=\"8\" height=\"" << fmt(bar_h + 0.5) << "\" fill=\""
          << umatrix_color(t) << "\"/>\n";
    }
    if (vmax > vmin) {
      svg << "<text x=\"" << fmt(bx + 10.0) << "\" y=\"" << fmt(y0 + 8.0)
          << "\" font-family=\"sans-serif\" font-size=\"8\">" << fmt_value(vmax)
          << "</text>\n";
      svg << "<text x=\"" << fmt(bx + 10.0) << "\" y=\"" << fmt(y0 + plane_h)
          << "\" font-family=\"sans-serif\" font-size=\"8\">" << fmt_value(vmin)
          << "</text>\n";
    } else {
      svg << "<text x=\"" << fmt(bx + 10.0) << "\" y=\"" << fmt(y0 + plane_h / 2.0)
          << "\" font-family=\"sans-serif\" font-size=\"8\">constant "
          << fmt_value(vmin) << "</text>\n";
    }
  }

  svg << "</svg>\n";
  return svg.str();
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw MissingValue("median of an empty value set");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string plot_scalar_by_ensemble(
    const std::vector<std::pair<std::string, double>>& values,
    const CorpusManifest& manifest, const std::string& label, bool median_line,
    bool log_y, const PlotStyle& style) {
  if (values.empty()) {
    throw MissingValue("no values to plot for " + label);
  }

  // Group values by ensemble (sorted), keeping input order within groups.
  std::map<std::string, std::vector<std::pair<std::string, double>>> groups;
  std::vector<double> all;
  for (const auto& [id, v] : values) {
    const RecordingEntry* entry = manifest.find(id);
    if (entry == nullptr) {
      throw InconsistentInputs("value id \"" + id + "\" is not in the manifest");
    }
    if (log_y && v <= 0.0) {
      throw InvalidParams("log axis requires positive values (id \"" + id + "\")");
    }
    groups[entry->ensemble].emplace_back(id, v);
    all.push_back(v);
  }

  const double med = median(all);
  const auto colors = ensemble_colors(manifest);
  const auto color_of = [&colors](const std::string& ensemble) -> std::string {
    for (const auto& [name, color] : colors) {
      if (name == ensemble) return color;
    }
    return "#000000";
  };

  const double group_w = 86.0;
  const double m = style.margin_px;
  const double plot_h = 240.0;
  const double width = m + group_w * static_cast<double>(groups.size()) + m;
  const double height = m + plot_h + 70.0;

  double vmin = *std::min_element(all.begin(), all.end());
  double vmax = *std::max_element(all.begin(), all.end());
  const auto tr = [log_y](double v) { return log_y ? std::log10(v) : v; };
  double lo = tr(vmin);
  double hi = tr(vmax);
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.06 * (hi - lo);
  lo -= pad;
  hi += pad;
  const auto y_of = [&](double v) {
    return m + plot_h - (tr(v) - lo) / (hi - lo) * plot_h;
  };

  std::ostringstream svg;
  svg_open(svg, width, height, style);
  svg << "<title>" << xml_escape(label) << " by ensemble</title>\n";
  svg << "<text x=\"" << fmt(m) << "\" y=\"" << fmt(m - 12.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\" font-weight=\"bold\">"
      << xml_escape(label) << (log_y ? " (log scale)" : "") << "</text>\n";
  svg << "<rect x=\"" << fmt(m) << "\" y=\"" << fmt(m) << "\" width=\""
      << fmt(width - 2 * m) << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"#fafafa\" stroke=\"#cccccc\"/>\n";

  // Axis reference labels at min/max.
  svg << "<text x=\"" << fmt(4.0) << "\" y=\"" << fmt(y_of(vmax) + 3.0)
      << "\" font-family=\"sans-serif\" font-size=\"9\">" << fmt_value(vmax)
      << "</text>\n";
  svg << "<text x=\"" << fmt(4.0) << "\" y=\"" << fmt(y_of(vmin) + 3.0)
      << "\" font-family=\"sans-serif\" font-size=\"9\">" << fmt_value(vmin)
      << "</text>\n";

  if (median_line) {
    const double ym = y_of(med);
    svg << "<line class=\"median\" x1=\"" << fmt(m) << "\" y1=\"" << fmt(ym)
        << "\" x2=\"" << fmt(width - m) << "\" y2=\"" << fmt(ym)
        << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << fmt(width - m - 60.0) << "\" y=\"" << fmt(ym - 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#d62728\">median "
        << fmt_value(med) << "</text>\n";
  }

  std::size_t g = 0;
  for (const auto& [ensemble, pieces] : groups) {
    const double gx = m + group_w * static_cast<double>(g);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double px = gx + group_w * (static_cast<double>(i) + 1.0) /
                                 (static_cast<double>(pieces.size()) + 1.0);
      const RecordingEntry* entry = manifest.find(pieces[i].first);
      draw_marker(svg, entry->region, px, y_of(pieces[i].second), 4.0,
                  color_of(ensemble));
    }
    svg << "<text x=\"" << fmt(gx + group_w / 2.0) << "\" y=\""
        << fmt(m + plot_h + 16.0)
        << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">"
        << xml_escape(ensemble) << "</text>\n";
    ++g;
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gamsom
