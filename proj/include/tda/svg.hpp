#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tda/clustering.hpp"
#include "tda/core.hpp"
#include "tda/grid.hpp"
#include "tda/persistence.hpp"
#include "tda/statistics.hpp"
#include "tda/summaries.hpp"

namespace tda::svg {

/// Nine significant digits, the precision used for every SVG coordinate.
inline std::string num(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.9g", x);
  return buffer;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void include(double x) {
    if (!std::isfinite(x)) return;
    if (empty) {
      lo = hi = x;
      empty = false;
    } else {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }

  // Widens degenerate ranges and adds a small margin.
  Range padded() const {
    Range r = *this;
    if (empty) return {0.0, 1.0, false};
    if (r.hi == r.lo) {
      const double pad = r.lo == 0.0 ? 1.0 : std::abs(r.lo) * 0.1;
      r.lo -= pad;
      r.hi += pad;
    }
    const double margin = (r.hi - r.lo) * 0.04;
    return {r.lo - margin, r.hi + margin, false};
  }

  bool empty = true;
};

/// Fixed-size canvas with a data-to-pixel mapping.
class Canvas {
public:
  static constexpr double width = 480.0;
  static constexpr double height = 480.0;
  static constexpr double left = 60.0, right = 20.0, top = 40.0, bottom = 50.0;

  Canvas(Range x, Range y, std::string title) : x_(x), y_(y) {
    body_ << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
          << "\" fill=\"white\"/>\n";
    if (!title.empty()) {
      body_ << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
            << escape(title) << "</text>\n";
    }
  }

  double px(double x) const { return left + (x - x_.lo) / (x_.hi - x_.lo) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y_.lo) / (y_.hi - y_.lo) * (height - top - bottom); }

  const Range& xRange() const { return x_; }
  const Range& yRange() const { return y_; }

  void axes(const std::string& xLabel, const std::string& yLabel) {
    body_ << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    line(x_.lo, y_.lo, x_.hi, y_.lo, "black");
    line(x_.lo, y_.lo, x_.lo, y_.hi, "black");
    body_ << "</g>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = x_.lo + (x_.hi - x_.lo) * i / 4.0;
      const double yv = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      body_ << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(height - bottom + 16)
            << "\" text-anchor=\"middle\" font-size=\"10\">" << num(round4(xv)) << "</text>\n";
      body_ << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(yv) + 3)
            << "\" text-anchor=\"end\" font-size=\"10\">" << num(round4(yv)) << "</text>\n";
    }
    body_ << "<text x=\"" << num((left + width - right) / 2) << "\" y=\"" << num(height - 12)
          << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(xLabel) << "</text>\n";
    body_ << "<text x=\"14\" y=\"" << num((top + height - bottom) / 2) << "\" text-anchor=\"middle\" font-size=\"12\""
          << " transform=\"rotate(-90 14 " << num((top + height - bottom) / 2) << ")\">" << escape(yLabel)
          << "</text>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double strokeWidth = 1.0) {
    body_ << "<line x1=\"" << num(px(x1)) << "\" y1=\"" << num(py(y1)) << "\" x2=\"" << num(px(x2)) << "\" y2=\""
          << num(py(y2)) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(strokeWidth) << "\"/>\n";
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& stroke) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) body_ << (i ? " " : "") << num(px(xs[i])) << ',' << num(py(ys[i]));
    body_ << "\"/>\n";
  }

  void polygon(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& fill,
               const std::string& cls = "") {
    body_ << "<polygon";
    if (!cls.empty()) body_ << " class=\"" << cls << "\"";
    body_ << " fill=\"" << fill << "\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) body_ << (i ? " " : "") << num(px(xs[i])) << ',' << num(py(ys[i]));
    body_ << "\"/>\n";
  }

  void rect(double x1, double y1, double x2, double y2, const std::string& fill) {
    const double a = px(std::min(x1, x2)), b = py(std::max(y1, y2));
    body_ << "<rect x=\"" << num(a) << "\" y=\"" << num(b) << "\" width=\"" << num(std::abs(px(x2) - px(x1)))
          << "\" height=\"" << num(std::abs(py(y2) - py(y1))) << "\" fill=\"" << fill << "\"/>\n";
  }

  void dot(double x, double y, const std::string& fill) {
    body_ << "<circle class=\"mark\" cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"3\" fill=\"" << fill
          << "\"/>\n";
  }

  void openTriangle(double x, double y, const std::string& stroke) {
    const double cx = px(x), cy = py(y);
    body_ << "<polygon class=\"mark\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\""
          << num(cx) << ',' << num(cy - 4) << ' ' << num(cx - 4) << ',' << num(cy + 3) << ' ' << num(cx + 4) << ','
          << num(cy + 3) << "\"/>\n";
  }

  void openDiamond(double x, double y, const std::string& stroke) {
    const double cx = px(x), cy = py(y);
    body_ << "<polygon class=\"mark\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\""
          << num(cx) << ',' << num(cy - 4) << ' ' << num(cx - 4) << ',' << num(cy) << ' ' << num(cx) << ','
          << num(cy + 4) << ' ' << num(cx + 4) << ',' << num(cy) << "\"/>\n";
  }

  void raw(const std::string& s) { body_ << s; }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

private:
  static double round4(double x) { return std::abs(x) < 1e-12 ? 0.0 : x; }

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  }

  Range x_, y_;
  std::ostringstream body_;
};

inline const char* dimensionColor(int dim) {
  static const char* colors[] = {"black", "red", "blue", "green", "purple"};
  return colors[std::min(dim, 4)];
}

inline void mark(Canvas& canvas, int dim, double x, double y) {
  if (dim == 0) canvas.dot(x, y, "black");
  else if (dim == 1) canvas.openTriangle(x, y, "red");
  else canvas.openDiamond(x, y, dimensionColor(dim));
}

/// Birth/death plot with the diagonal. Superlevel pairs are drawn as
/// (death, birth) so every mark sits above the diagonal. `band` > 0 shades
/// the strip of that vertical height above the diagonal.
inline std::string diagramPlot(const PersistenceDiagram& diagram, double band = 0.0, const std::string& title = "") {
  Range r;
  for (const auto& p : diagram.pairs) {
    r.include(p.birth);
    r.include(p.death);
  }
  const Range range = r.padded();
  Canvas canvas(range, range, title);
  if (band > 0.0) {
    canvas.polygon({range.lo, range.hi, range.hi, range.lo}, {range.lo, range.hi, range.hi + band, range.lo + band},
                   "pink", "band");
  }
  canvas.axes(diagram.orientation == Orientation::sublevel ? "Birth" : "Death",
              diagram.orientation == Orientation::sublevel ? "Death" : "Birth");
  canvas.line(range.lo, range.lo, range.hi, range.hi, "gray");
  for (const auto& p : diagram.pairs) mark(canvas, p.dimension, std::min(p.birth, p.death), std::max(p.birth, p.death));
  return canvas.str();
}

/// Each pair as ((b + d) / 2, (d - b) / 2); `band` shades [0, band].
inline std::string rotatedPlot(const PersistenceDiagram& diagram, double band = 0.0, const std::string& title = "") {
  Range rx, ry;
  ry.include(0.0);
  for (const auto& p : diagram.pairs) {
    const double lo = std::min(p.birth, p.death), hi = std::max(p.birth, p.death);
    rx.include((lo + hi) / 2);
    ry.include((hi - lo) / 2);
  }
  if (band > 0.0) ry.include(band);
  const Range x = rx.padded(), y = ry.padded();
  Canvas canvas(x, y, title);
  if (band > 0.0) canvas.polygon({x.lo, x.hi, x.hi, x.lo}, {0.0, 0.0, band, band}, "pink", "band");
  canvas.axes("(Birth + Death) / 2", "(Death - Birth) / 2");
  for (const auto& p : diagram.pairs) {
    const double lo = std::min(p.birth, p.death), hi = std::max(p.birth, p.death);
    mark(canvas, p.dimension, (lo + hi) / 2, (hi - lo) / 2);
  }
  return canvas.str();
}

/// One horizontal segment per pair, grouped by dimension.
inline std::string barcodePlot(const PersistenceDiagram& diagram, const std::string& title = "") {
  auto pairs = diagram.pairs;
  std::stable_sort(pairs.begin(), pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    return std::min(a.birth, a.death) < std::min(b.birth, b.death);
  });
  Range rx;
  for (const auto& p : pairs) {
    rx.include(p.birth);
    rx.include(p.death);
  }
  const Range x = rx.padded();
  const Range y{0.0, static_cast<double>(std::max<std::size_t>(pairs.size(), 1)) + 1.0, false};
  Canvas canvas(x, y, title);
  canvas.axes("time", "");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double row = static_cast<double>(i + 1);
    canvas.line(pairs[i].birth, row, pairs[i].death, row, dimensionColor(pairs[i].dimension), 2.0);
  }
  return canvas.str();
}

inline std::string curvePlot(const SummaryCurve& curve, const std::string& yLabel, const std::string& title = "") {
  Range rx, ry;
  for (double t : curve.tseq) rx.include(t);
  ry.include(0.0);
  for (double v : curve.values) ry.include(v);
  Canvas canvas(rx.padded(), ry.padded(), title);
  canvas.axes("t", yLabel);
  canvas.polyline(curve.tseq, curve.values, "blue");
  return canvas.str();
}

/// Shaded band between `lower` and `upper` with the centre curve on top.
inline std::string bandPlot(const std::vector<double>& tseq, const std::vector<double>& center,
                            const std::vector<double>& lower, const std::vector<double>& upper,
                            const std::string& title = "") {
  Range rx, ry;
  for (double t : tseq) rx.include(t);
  for (double v : lower) ry.include(v);
  for (double v : upper) ry.include(v);
  Canvas canvas(rx.padded(), ry.padded(), title);
  std::vector<double> xs(tseq), ys(upper);
  xs.insert(xs.end(), tseq.rbegin(), tseq.rend());
  ys.insert(ys.end(), lower.rbegin(), lower.rend());
  canvas.polygon(xs, ys, "pink", "band");
  canvas.axes("t", "");
  canvas.polyline(tseq, center, "red");
  return canvas.str();
}

/// Heat map of a 2-D field (1-D fields are drawn as a curve).
inline std::string fieldPlot(const ScalarField& field, const std::string& title = "") {
  if (field.grid.dimension() == 1) return curvePlot({field.grid.axis(0), field.values}, "value", title);
  detail::require(field.grid.dimension() == 2, "field plots support 1-D and 2-D grids only");
  const auto& xs = field.grid.axis(0);
  const auto& ys = field.grid.axis(1);
  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  Range rx{xs.front(), xs.back(), false}, ry{ys.front(), ys.back(), false};
  Canvas canvas(rx, ry, title);
  const double span = *hi - *lo;
  auto color = [&](double v) {
    const double s = span > 0 ? (v - *lo) / span : 0.5;
    const int r = static_cast<int>(std::lround(68 + s * (253 - 68)));
    const int g = static_cast<int>(std::lround(1 + s * (231 - 1)));
    const int b = static_cast<int>(std::lround(84 + s * (37 - 84)));
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "#%02x%02x%02x", r, g, b);
    return std::string(buffer);
  };
  auto edge = [](const std::vector<double>& axis, std::size_t i, bool upper) {
    if (upper) return i + 1 < axis.size() ? (axis[i] + axis[i + 1]) / 2 : axis[i];
    return i > 0 ? (axis[i - 1] + axis[i]) / 2 : axis[i];
  };
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      canvas.rect(edge(xs, i, false), edge(ys, j, false), edge(xs, i, true), edge(ys, j, true),
                  color(field.values[j * xs.size() + i]));
    }
  }
  canvas.axes("x1", "x2");
  return canvas.str();
}

/// Persistence of every feature against the smoothing parameter, with the
/// per-parameter significance threshold 2 * width shaded.
inline std::string maxPersistencePlot(const MaxPersistenceResult& result, const std::string& title = "") {
  Range rx, ry;
  ry.include(0.0);
  double spacing = 1.0;
  if (result.entries.size() > 1) {
    spacing = std::abs(result.entries[1].parameter - result.entries[0].parameter);
  }
  for (const auto& e : result.entries) {
    rx.include(e.parameter - spacing / 2);
    rx.include(e.parameter + spacing / 2);
    ry.include(2 * e.width);
    for (const auto& p : e.diagram.pairs) ry.include(p.persistence());
  }
  Canvas canvas(rx.padded(), ry.padded(), title);
  for (const auto& e : result.entries) {
    canvas.rect(e.parameter - spacing * 0.3, 0.0, e.parameter + spacing * 0.3, 2 * e.width, "pink");
  }
  canvas.axes("parameter", "Persistence");
  for (const auto& e : result.entries) {
    for (const auto& p : e.diagram.pairs) mark(canvas, p.dimension, e.parameter, p.persistence());
  }
  return canvas.str();
}

enum class TreeAxis { lambda, alpha, kappa };

inline TreeAxis treeAxisFromString(const std::string& name) {
  if (name == "lambda") return TreeAxis::lambda;
  if (name == "alpha") return TreeAxis::alpha;
  if (name == "kappa") return TreeAxis::kappa;
  throw InvalidArgument("unknown tree type '" + name + "' (expected lambda, alpha or kappa)");
}

/// Vertical extent [bottom, top] of each branch on the chosen axis.
inline std::vector<std::pair<double, double>> branchExtents(const ClusterTree& tree, TreeAxis axis) {
  std::vector<std::pair<double, double>> extent(tree.branches.size());
  if (axis == TreeAxis::kappa) {
    // Each branch's length is its mass not passed on to children.
    std::function<void(std::size_t, double)> walk = [&](std::size_t id, double start) {
      const auto& b = tree.branches[id];
      double own = b.kappaBirth;
      for (std::size_t c : b.children) own -= tree.branches[c].kappaBirth;
      extent[id] = {start, start + std::max(own, 0.0)};
      for (std::size_t c : b.children) walk(c, extent[id].second);
    };
    walk(tree.root, 0.0);
    return extent;
  }
  for (const auto& b : tree.branches) {
    if (axis == TreeAxis::lambda) extent[b.id] = {b.lambdaBirth, b.lambdaDeath};
    else extent[b.id] = {1.0 - b.alphaBirth, 1.0 - b.alphaDeath};
  }
  return extent;
}

/// Horizontal position of each branch: leaves at 1, 2, ... in dendrogram
/// order, internal branches at the mean of their children.
inline std::vector<double> branchPositions(const ClusterTree& tree) {
  std::vector<double> xpos(tree.branches.size(), 0.0);
  std::map<std::size_t, double> leafX;
  for (std::size_t i = 0; i < tree.leaves.size(); ++i) leafX[tree.leaves[i]] = static_cast<double>(i + 1);
  std::function<double(std::size_t)> place = [&](std::size_t id) {
    const auto& b = tree.branches[id];
    if (b.isLeaf()) return xpos[id] = leafX.at(id);
    double sum = 0.0;
    for (std::size_t c : b.children) sum += place(c);
    return xpos[id] = sum / static_cast<double>(b.children.size());
  };
  if (!tree.branches.empty()) place(tree.root);
  return xpos;
}

inline std::string dendrogramPlot(const ClusterTree& tree, TreeAxis axis, const std::string& title = "") {
  auto extent = branchExtents(tree, axis);
  Range ry;
  for (auto& [a, b] : extent) {
    ry.include(a);
    ry.include(b);
  }
  // Infinite kNN densities are clipped to the largest finite level.
  for (auto& [a, b] : extent) {
    if (!std::isfinite(b)) b = ry.hi;
    if (!std::isfinite(a)) a = ry.hi;
  }
  const auto xpos = branchPositions(tree);
  const Range rx{0.0, static_cast<double>(tree.leaves.size()) + 1.0, false};
  Canvas canvas(rx, ry.padded(), title);
  const char* label = axis == TreeAxis::lambda ? "lambda" : axis == TreeAxis::alpha ? "alpha" : "kappa";
  canvas.axes("", label);
  for (const auto& b : tree.branches) {
    canvas.line(xpos[b.id], extent[b.id].first, xpos[b.id], extent[b.id].second, "black", 2.0);
    if (!b.isLeaf()) {
      double lo = xpos[b.children.front()], hi = lo;
      for (std::size_t c : b.children) {
        lo = std::min(lo, xpos[c]);
        hi = std::max(hi, xpos[c]);
      }
      canvas.line(lo, extent[b.id].second, hi, extent[b.id].second, "black", 2.0);
    }
  }
  return canvas.str();
}

}  // namespace tda::svg
