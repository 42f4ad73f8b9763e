#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mdrank/error.hpp"
#include "mdrank/report.hpp"

namespace mdrank {

namespace {

constexpr double kLeft = 60.0;
constexpr double kTop = 20.0;
constexpr double kSize = 360.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Specificity runs from 1 at the left edge to 0 at the right edge.
double px(double specificity) { return kLeft + (1.0 - specificity) * kSize; }
double py(double sensitivity) { return kTop + (1.0 - sensitivity) * kSize; }

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
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

void require_curves(const std::vector<NamedCurve>& curves) {
  if (curves.empty()) throw ValidationError("ROC plot needs at least one curve");
}

}  // namespace

std::string render_roc_svg(const std::vector<NamedCurve>& curves) {
  require_curves(curves);
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"460\" height=\"440\" viewBox=\"0 0 460 440\" "
         "font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"460\" height=\"440\" fill=\"white\"/>\n";
  // Recommended operating region: sensitivity 0.95 to 1.
  svg += "<rect class=\"high-sensitivity-band\" x=\"" + fmt("%.3f", kLeft) + "\" y=\"" + fmt("%.3f", py(1.0)) +
         "\" width=\"" + fmt("%.3f", kSize) + "\" height=\"" + fmt("%.3f", py(0.95) - py(1.0)) +
         "\" fill=\"#ffe08a\" fill-opacity=\"0.6\"/>\n";
  svg += "<rect x=\"" + fmt("%.3f", kLeft) + "\" y=\"" + fmt("%.3f", kTop) + "\" width=\"" + fmt("%.3f", kSize) +
         "\" height=\"" + fmt("%.3f", kSize) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    const std::string label = fmt("%.1f", v);
    svg += "<line x1=\"" + fmt("%.3f", px(v)) + "\" y1=\"" + fmt("%.3f", py(0.0)) + "\" x2=\"" + fmt("%.3f", px(v)) +
           "\" y2=\"" + fmt("%.3f", py(0.0) + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.3f", px(v)) + "\" y=\"" + fmt("%.3f", py(0.0) + 18) +
           "\" text-anchor=\"middle\">" + label + "</text>\n";
    svg += "<line x1=\"" + fmt("%.3f", kLeft - 5) + "\" y1=\"" + fmt("%.3f", py(v)) + "\" x2=\"" +
           fmt("%.3f", kLeft) + "\" y2=\"" + fmt("%.3f", py(v)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.3f", kLeft - 8) + "\" y=\"" + fmt("%.3f", py(v) + 4) +
           "\" text-anchor=\"end\">" + label + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.3f", kLeft + kSize / 2) + "\" y=\"" + fmt("%.3f", py(0.0) + 36) +
         "\" text-anchor=\"middle\">Specificity</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt("%.3f", kTop + kSize / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + fmt("%.3f", kTop + kSize / 2) +
         ")\">Sensitivity</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* colour = kPalette[c % std::size(kPalette)];
    svg += "<polyline class=\"roc-curve\" fill=\"none\" stroke=\"" + std::string(colour) +
           "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& p : curves[c].curve.points) {
      if (!first) svg += ' ';
      first = false;
      svg += fmt("%.3f", px(p.specificity)) + "," + fmt("%.3f", py(p.sensitivity));
    }
    svg += "\"/>\n";
  }

  // Legend in the lower right, where ROC curves rarely pass.
  const double legend_x = kLeft + kSize - 150;
  double legend_y = py(0.0) - 12.0 - 16.0 * static_cast<double>(curves.size() - 1);
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* colour = kPalette[c % std::size(kPalette)];
    svg += "<g class=\"legend-entry\"><line x1=\"" + fmt("%.3f", legend_x) + "\" y1=\"" + fmt("%.3f", legend_y) +
           "\" x2=\"" + fmt("%.3f", legend_x + 20) + "\" y2=\"" + fmt("%.3f", legend_y) + "\" stroke=\"" + colour +
           "\" stroke-width=\"2\"/><text x=\"" + fmt("%.3f", legend_x + 26) + "\" y=\"" + fmt("%.3f", legend_y + 4) +
           "\">" + escape_xml(curves[c].name) + "</text></g>\n";
    legend_y += 16.0;
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_roc_text(const std::vector<NamedCurve>& curves, int width, int height) {
  require_curves(curves);
  width = std::max(width, 11);
  height = std::max(height, 6);
  std::vector<std::string> grid(static_cast<std::size_t>(height), std::string(static_cast<std::size_t>(width), ' '));
  const auto row_of = [&](double se) {
    return static_cast<int>(std::lround((1.0 - se) * (height - 1)));
  };
  const auto col_of = [&](double sp) {
    return static_cast<int>(std::lround((1.0 - sp) * (width - 1)));
  };
  for (int r = 0; r <= row_of(0.95); ++r) {
    std::fill(grid[static_cast<std::size_t>(r)].begin(), grid[static_cast<std::size_t>(r)].end(), '.');
  }
  const std::string marks = "*o+x#@%&=~";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char mark = marks[c % marks.size()];
    const auto& pts = curves[c].curve.points;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      // Sample the segment densely enough to leave no gaps on the grid.
      const int steps = 2 * (width + height);
      for (int s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        const double sp = pts[i - 1].specificity + t * (pts[i].specificity - pts[i - 1].specificity);
        const double se = pts[i - 1].sensitivity + t * (pts[i].sensitivity - pts[i - 1].sensitivity);
        grid[static_cast<std::size_t>(row_of(se))][static_cast<std::size_t>(col_of(sp))] = mark;
      }
    }
  }
  std::string out;
  for (int r = 0; r < height; ++r) {
    const char* axis = r == 0 ? "1.0 |" : (r == height - 1 ? "0.0 |" : "    |");
    out += axis + grid[static_cast<std::size_t>(r)] + '\n';
  }
  out += "    +" + std::string(static_cast<std::size_t>(width), '-') + '\n';
  out += "     SP=1" + std::string(static_cast<std::size_t>(width - 8), ' ') + "SP=0\n";
  out += "     (shaded rows: sensitivity >= 0.95)\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    out += "     ";
    out += marks[c % marks.size()];
    out += " " + curves[c].name + '\n';
  }
  return out;
}

void render_roc_plot(const std::vector<NamedCurve>& curves, const std::string& path) {
  write_text_file(path, render_roc_svg(curves));
}

}  // namespace mdrank
