#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "tda/clustering.hpp"
#include "tda/core.hpp"
#include "tda/filtration.hpp"
#include "tda/grid.hpp"
#include "tda/persistence.hpp"
#include "tda/statistics.hpp"
#include "tda/summaries.hpp"

namespace tda::io {

using Json = nlohmann::ordered_json;

/// Shortest representation that parses back to the same double;
/// infinities as "inf" / "-inf".
inline std::string formatNumber(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, result.ptr);
}

inline double parseNumber(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text == "inf" || text == "+inf" || text == "Inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf" || text == "-Inf") return -std::numeric_limits<double>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

inline Json toJson(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double numberFromJson(const Json& j) {
  if (j.is_string()) return parseNumber(j.get<std::string>());
  if (!j.is_number()) throw InvalidArgument("expected a number in JSON input");
  return j.get<double>();
}

inline Json toJson(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(toJson(x));
  return out;
}

inline std::vector<double> numbersFromJson(const Json& j) {
  if (!j.is_array()) throw InvalidArgument("expected an array of numbers in JSON input");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(numberFromJson(x));
  return out;
}

// ---------------------------------------------------------------------------
// CSV tables

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidArgument("CSV is missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

namespace detail {

inline std::vector<std::string> splitLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline bool isNumericRow(const std::vector<std::string>& cells) {
  try {
    for (const auto& c : cells) parseNumber(c);
    return !cells.empty();
  } catch (const InvalidArgument&) {
    return false;
  }
}

inline std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

}  // namespace detail

/// Comma-separated numeric table. A first row that does not parse as
/// numbers is taken as the header; blank lines are skipped.
inline Table readTable(std::istream& in) {
  Table table;
  std::string line;
  bool first = true;
  std::size_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cells = detail::splitLine(line);
    for (auto& c : cells) c = detail::trim(c);
    if (first) {
      first = false;
      if (!detail::isNumericRow(cells)) {
        table.header = cells;
        continue;
      }
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        row.push_back(parseNumber(c));
      } catch (const InvalidArgument&) {
        throw InvalidArgument("CSV line " + std::to_string(lineNumber) + ": not a number: '" + c + "'");
      }
    }
    if (!table.header.empty() && row.size() != table.header.size()) {
      throw InvalidArgument("CSV line " + std::to_string(lineNumber) + " has " + std::to_string(row.size()) +
                            " fields, header has " + std::to_string(table.header.size()));
    }
    if (!table.rows.empty() && row.size() != table.rows.front().size()) {
      throw InvalidArgument("CSV line " + std::to_string(lineNumber) + " has an inconsistent field count");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline void writeRow(std::ostream& out, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << formatNumber(row[i]);
  }
  out << '\n';
}

inline void writeHeader(std::ostream& out, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
}

inline std::vector<std::string> coordinateHeader(std::size_t d) {
  std::vector<std::string> header;
  for (std::size_t k = 1; k <= d; ++k) header.push_back("x" + std::to_string(k));
  return header;
}

// ---------------------------------------------------------------------------
// Point clouds and distance matrices

inline void writePointsCsv(std::ostream& out, const PointCloud& points) {
  writeHeader(out, coordinateHeader(points.dimension()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points[i];
    writeRow(out, std::vector<double>(p.begin(), p.end()));
  }
}

inline PointCloud readPointsCsv(std::istream& in) {
  const Table table = readTable(in);
  if (table.rows.empty()) throw InvalidArgument("point CSV contains no points");
  return PointCloud::fromRows(table.rows);
}

inline DistanceMatrix readDistanceMatrixCsv(std::istream& in) {
  const Table table = readTable(in);
  const std::size_t n = table.rows.size();
  if (n == 0) throw InvalidArgument("distance matrix CSV is empty");
  std::vector<double> entries;
  for (const auto& row : table.rows) {
    if (row.size() != n) throw InvalidArgument("distance matrix must be square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return DistanceMatrix(n, std::move(entries));
}

// ---------------------------------------------------------------------------
// Scalar fields: one row per grid point, first axis fastest.

inline void writeFieldCsv(std::ostream& out, const ScalarField& field) {
  auto header = coordinateHeader(field.grid.dimension());
  header.push_back("value");
  writeHeader(out, header);
  const PointCloud q = field.grid.queries();
  for (std::size_t i = 0; i < q.size(); ++i) {
    auto p = q[i];
    std::vector<double> row(p.begin(), p.end());
    row.push_back(field.values[i]);
    writeRow(out, row);
  }
}

/// Rebuilds the grid from the distinct coordinates on each axis and checks
/// that rows follow first-axis-fastest order.
inline ScalarField readFieldCsv(std::istream& in) {
  const Table table = readTable(in);
  if (table.rows.empty()) throw InvalidArgument("field CSV is empty");
  const std::size_t width = table.rows.front().size();
  if (width < 2) throw InvalidArgument("field CSV needs coordinate columns and a value column");
  const std::size_t d = width - 1;
  std::vector<std::vector<double>> axes(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (const auto& row : table.rows) axes[k].push_back(row[k]);
    std::sort(axes[k].begin(), axes[k].end());
    axes[k].erase(std::unique(axes[k].begin(), axes[k].end()), axes[k].end());
  }
  EvaluationGrid grid(axes);
  if (grid.size() != table.rows.size()) throw InvalidArgument("field CSV rows do not form a complete grid");
  std::vector<double> values;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto idx = grid.unflatten(i);
    for (std::size_t k = 0; k < d; ++k) {
      if (table.rows[i][k] != axes[k][idx[k]]) {
        throw InvalidArgument("field CSV rows must be ordered with the first axis varying fastest");
      }
    }
    values.push_back(table.rows[i][d]);
  }
  return ScalarField(std::move(grid), std::move(values));
}

inline Json fieldToJson(const ScalarField& field) {
  Json axes = Json::array();
  for (const auto& a : field.grid.axes()) axes.push_back(toJson(a));
  return Json{{"axes", axes}, {"order", "first-axis-fastest"}, {"values", toJson(field.values)}};
}

inline ScalarField fieldFromJson(const Json& j) {
  std::vector<std::vector<double>> axes;
  for (const auto& a : j.at("axes")) axes.push_back(numbersFromJson(a));
  return ScalarField(EvaluationGrid(std::move(axes)), numbersFromJson(j.at("values")));
}

// ---------------------------------------------------------------------------
// Persistence diagrams

inline void writeDiagramCsv(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "dimension,birth,death,essential\n";
  for (const auto& p : diagram.pairs) {
    out << p.dimension << ',' << formatNumber(p.birth) << ',' << formatNumber(p.death) << ','
        << (p.essential ? 1 : 0) << '\n';
  }
}

/// Orientation is inferred from the pairs (any birth > death means
/// superlevel) unless given; the scale cap from the essential pairs.
inline PersistenceDiagram readDiagramCsv(std::istream& in) {
  const Table table = readTable(in);
  PersistenceDiagram diagram;
  if (table.header.empty() && !table.rows.empty() && table.rows.front().size() < 3) {
    throw InvalidArgument("diagram CSV needs dimension,birth,death[,essential] columns");
  }
  const std::size_t dimCol = table.header.empty() ? 0 : table.column("dimension");
  const std::size_t birthCol = table.header.empty() ? 1 : table.column("birth");
  const std::size_t deathCol = table.header.empty() ? 2 : table.column("death");
  std::size_t essentialCol = 3;
  bool hasEssential = table.header.empty() ? (!table.rows.empty() && table.rows.front().size() > 3) : false;
  if (!table.header.empty()) {
    const auto it = std::find(table.header.begin(), table.header.end(), "essential");
    hasEssential = it != table.header.end();
    essentialCol = static_cast<std::size_t>(it - table.header.begin());
  }
  bool superlevel = false;
  bool sawCap = false;
  for (const auto& row : table.rows) {
    PersistencePair p;
    const double dim = row[dimCol];
    if (dim < 0 || dim != std::floor(dim)) throw InvalidArgument("diagram dimension must be a non-negative integer");
    p.dimension = static_cast<int>(dim);
    p.birth = row[birthCol];
    p.death = row[deathCol];
    p.essential = hasEssential && row[essentialCol] != 0.0;
    if (p.birth > p.death) superlevel = true;
    if (p.essential && !sawCap) {
      diagram.scaleCap = p.death;
      sawCap = true;
    }
    diagram.pairs.push_back(p);
  }
  diagram.orientation = superlevel ? Orientation::superlevel : Orientation::sublevel;
  return diagram;
}

inline Json diagramToJson(const PersistenceDiagram& diagram) {
  Json pairs = Json::array();
  for (const auto& p : diagram.pairs) {
    pairs.push_back(
        Json{{"dimension", p.dimension}, {"birth", toJson(p.birth)}, {"death", toJson(p.death)}, {"essential", p.essential}});
  }
  return Json{{"orientation", toString(diagram.orientation)}, {"scaleCap", toJson(diagram.scaleCap)}, {"pairs", pairs}};
}

inline PersistenceDiagram diagramFromJson(const Json& j) {
  PersistenceDiagram diagram;
  const auto orientation = j.at("orientation").get<std::string>();
  if (orientation != "sublevel" && orientation != "superlevel") {
    throw InvalidArgument("unknown diagram orientation '" + orientation + "'");
  }
  diagram.orientation = orientation == "sublevel" ? Orientation::sublevel : Orientation::superlevel;
  diagram.scaleCap = numberFromJson(j.at("scaleCap"));
  for (const auto& p : j.at("pairs")) {
    diagram.pairs.push_back({p.at("dimension").get<int>(), numberFromJson(p.at("birth")),
                             numberFromJson(p.at("death")), p.value("essential", false)});
  }
  return diagram;
}

/// Reads a diagram from JSON (first non-blank char '{') or CSV.
inline PersistenceDiagram readDiagram(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const Json j = Json::parse(text);
    return diagramFromJson(j.contains("diagram") ? j.at("diagram") : j);
  }
  std::istringstream stream(text);
  return readDiagramCsv(stream);
}

// ---------------------------------------------------------------------------
// Curves and bands

inline void writeCurveCsv(std::ostream& out, const SummaryCurve& curve) {
  out << "t,value\n";
  for (std::size_t i = 0; i < curve.tseq.size(); ++i) writeRow(out, {curve.tseq[i], curve.values[i]});
}

inline SummaryCurve readCurveCsv(std::istream& in) {
  const Table table = readTable(in);
  SummaryCurve curve;
  const std::size_t tCol = table.header.empty() ? 0 : table.column("t");
  const std::size_t vCol = table.header.empty() ? 1 : table.column("value");
  for (const auto& row : table.rows) {
    curve.tseq.push_back(row.at(tCol));
    curve.values.push_back(row.at(vCol));
  }
  return curve;
}

inline Json curveToJson(const SummaryCurve& curve) {
  return Json{{"t", toJson(curve.tseq)}, {"values", toJson(curve.values)}};
}

inline SummaryCurve curveFromJson(const Json& j) {
  SummaryCurve curve{numbersFromJson(j.at("t")), numbersFromJson(j.at("values"))};
  if (curve.tseq.size() != curve.values.size()) throw InvalidArgument("curve t and values differ in length");
  return curve;
}

inline Json bandToJson(const ConfidenceBand& band) {
  return Json{{"alpha", band.alpha},           {"B", band.replicates},          {"seed", band.seed},
              {"width", toJson(band.width)},   {"center", toJson(band.center)}, {"lower", toJson(band.lower)},
              {"upper", toJson(band.upper)},   {"statistics", toJson(band.statistics)}};
}

inline ConfidenceBand bandFromJson(const Json& j) {
  ConfidenceBand band;
  band.alpha = j.at("alpha").get<double>();
  band.replicates = j.at("B").get<std::size_t>();
  band.seed = j.at("seed").get<std::uint64_t>();
  band.width = numberFromJson(j.at("width"));
  band.center = numbersFromJson(j.at("center"));
  band.lower = numbersFromJson(j.at("lower"));
  band.upper = numbersFromJson(j.at("upper"));
  band.statistics = numbersFromJson(j.at("statistics"));
  return band;
}

/// One row per query point: coordinates, estimate, lower, upper.
inline void writeBandCsv(std::ostream& out, const PointCloud& queries, const ConfidenceBand& band) {
  auto header = coordinateHeader(queries.dimension());
  header.insert(header.end(), {"value", "lower", "upper"});
  writeHeader(out, header);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto p = queries[i];
    std::vector<double> row(p.begin(), p.end());
    row.insert(row.end(), {band.center[i], band.lower[i], band.upper[i]});
    writeRow(out, row);
  }
}

inline Json multiplierBandToJson(const std::vector<double>& tseq, const MultiplierBand& band) {
  return Json{{"alpha", band.alpha},         {"B", band.replicates},        {"seed", band.seed},
              {"width", toJson(band.width)}, {"t", toJson(tseq)},           {"mean", toJson(band.mean)},
              {"lower", toJson(band.lower)}, {"upper", toJson(band.upper)}};
}

inline MultiplierBand multiplierBandFromJson(const Json& j) {
  MultiplierBand band;
  band.alpha = j.at("alpha").get<double>();
  band.replicates = j.at("B").get<std::size_t>();
  band.seed = j.at("seed").get<std::uint64_t>();
  band.width = numberFromJson(j.at("width"));
  band.mean = numbersFromJson(j.at("mean"));
  band.lower = numbersFromJson(j.at("lower"));
  band.upper = numbersFromJson(j.at("upper"));
  return band;
}

inline void writeMultiplierBandCsv(std::ostream& out, const std::vector<double>& tseq, const MultiplierBand& band) {
  out << "t,mean,lower,upper\n";
  for (std::size_t i = 0; i < tseq.size(); ++i) writeRow(out, {tseq[i], band.mean[i], band.lower[i], band.upper[i]});
}

/// Curves matrix: header row holds the t values, each further row a curve.
inline void writeCurvesCsv(std::ostream& out, const std::vector<double>& tseq,
                           const std::vector<std::vector<double>>& curves) {
  writeRow(out, tseq);
  for (const auto& c : curves) writeRow(out, c);
}

struct CurveMatrix {
  std::vector<double> tseq;
  std::vector<std::vector<double>> curves;
};

inline CurveMatrix readCurvesCsv(std::istream& in) {
  const Table table = readTable(in);
  CurveMatrix m;
  if (table.rows.empty()) throw InvalidArgument("curve matrix CSV is empty");
  if (!table.header.empty()) {
    throw InvalidArgument("curve matrix CSV must start with a numeric row of t values");
  }
  m.tseq = table.rows.front();
  m.curves.assign(table.rows.begin() + 1, table.rows.end());
  return m;
}

// ---------------------------------------------------------------------------
// Max-persistence results and cluster trees

inline Json maxPersistenceToJson(const MaxPersistenceResult& result) {
  Json entries = Json::array();
  for (const auto& e : result.entries) {
    entries.push_back(Json{{"parameter", e.parameter},
                           {"width", toJson(e.width)},
                           {"N", e.significantCount},
                           {"S", toJson(e.significantPersistence)},
                           {"diagram", diagramToJson(e.diagram)}});
  }
  return Json{{"alpha", result.alpha},
              {"B", result.replicates},
              {"seed", result.seed},
              {"argmaxN", toJson(result.argmaxCount)},
              {"argmaxS", toJson(result.argmaxPersistence)},
              {"parameters", entries}};
}

inline MaxPersistenceResult maxPersistenceFromJson(const Json& j) {
  MaxPersistenceResult result;
  result.alpha = j.at("alpha").get<double>();
  result.replicates = j.at("B").get<std::size_t>();
  result.seed = j.at("seed").get<std::uint64_t>();
  result.argmaxCount = numbersFromJson(j.at("argmaxN"));
  result.argmaxPersistence = numbersFromJson(j.at("argmaxS"));
  for (const auto& e : j.at("parameters")) {
    ParameterPersistence entry;
    entry.parameter = e.at("parameter").get<double>();
    entry.width = numberFromJson(e.at("width"));
    entry.significantCount = e.at("N").get<std::size_t>();
    entry.significantPersistence = numberFromJson(e.at("S"));
    entry.diagram = diagramFromJson(e.at("diagram"));
    result.entries.push_back(std::move(entry));
  }
  return result;
}

inline Json treeToJson(const ClusterTree& tree) {
  Json branches = Json::array();
  for (const auto& b : tree.branches) {
    branches.push_back(Json{{"id", b.id},
                            {"parent", b.parent ? Json(*b.parent) : Json(nullptr)},
                            {"children", b.children},
                            {"lambda", {toJson(b.lambdaBirth), toJson(b.lambdaDeath)}},
                            {"alpha", {toJson(b.alphaBirth), toJson(b.alphaDeath)}},
                            {"kappa", {toJson(b.kappaBirth), toJson(b.kappaDeath)}},
                            {"members", b.members}});
  }
  return Json{{"root", tree.root},
              {"leaves", tree.leaves},
              {"branches", branches},
              {"density", toJson(tree.density)},
              {"pointLeaf", tree.pointLeaf}};
}

inline ClusterTree treeFromJson(const Json& j) {
  ClusterTree tree;
  tree.root = j.at("root").get<std::size_t>();
  tree.leaves = j.at("leaves").get<std::vector<std::size_t>>();
  tree.density = numbersFromJson(j.at("density"));
  tree.pointLeaf = j.at("pointLeaf").get<std::vector<std::size_t>>();
  for (const auto& b : j.at("branches")) {
    ClusterBranch branch;
    branch.id = b.at("id").get<std::size_t>();
    if (!b.at("parent").is_null()) branch.parent = b.at("parent").get<std::size_t>();
    branch.children = b.at("children").get<std::vector<std::size_t>>();
    const auto lambda = numbersFromJson(b.at("lambda"));
    const auto alpha = numbersFromJson(b.at("alpha"));
    const auto kappa = numbersFromJson(b.at("kappa"));
    branch.lambdaBirth = lambda.at(0);
    branch.lambdaDeath = lambda.at(1);
    branch.alphaBirth = alpha.at(0);
    branch.alphaDeath = alpha.at(1);
    branch.kappaBirth = kappa.at(0);
    branch.kappaDeath = kappa.at(1);
    branch.members = b.at("members").get<std::vector<std::size_t>>();
    tree.branches.push_back(std::move(branch));
  }
  return tree;
}

}  // namespace tda::io
