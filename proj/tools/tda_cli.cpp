// Command-line front end: one subcommand per pipeline stage.
//
// Exit codes: 0 success, 2 usage, 3 input validation, 4 numeric domain.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "tda/io.hpp"
#include "tda/sampling.hpp"
#include "tda/svg.hpp"
#include "tda/tda.hpp"

#ifndef TDA_VERSION
#define TDA_VERSION "0.0.0"
#endif

namespace {

using tda::io::Json;

constexpr int exitUsage = 2;
constexpr int exitValidation = 3;
constexpr int exitDomain = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Files, digests, manifest

std::string sha256(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

struct Input {
  std::string path;
  std::string text;
};

class Run {
public:
  Run(std::string subcommand, CLI::App* app) : subcommand_(std::move(subcommand)), app_(app) {}

  Input read(const std::string& path) {
    Input input{path, {}};
    if (path == "-") {
      input.text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
      std::ifstream file(path, std::ios::binary);
      if (!file) throw tda::InvalidArgument("cannot open input file '" + path + "'");
      input.text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    }
    inputs_.push_back(Json{{"path", path}, {"sha256", sha256(input.text)}});
    return input;
  }

  /// Subcommand, every parameter that can influence the result, seed,
  /// input digests and tool version.
  Json manifest(std::uint64_t seed) const {
    // Options that only affect where or how results are written.
    static const std::vector<std::string> excluded{"--help", "--out",  "--threads", "--format",
                                                   "--svg",  "--seed", "--band",    "--type"};
    Json params = Json::object();
    for (const CLI::Option* opt : app_->get_options()) {
      const std::string name = opt->get_name(false, true);
      if (std::find(excluded.begin(), excluded.end(), name) != excluded.end()) continue;
      const std::string key = name.starts_with("--") ? name.substr(2) : name;
      if (opt->get_expected_min() == 0) {  // flag
        params[key] = opt->count() > 0;
        continue;
      }
      std::vector<std::string> values;
      if (opt->count() > 0) values = opt->results();
      else if (!opt->get_default_str().empty()) values = {opt->get_default_str()};
      else continue;
      if (values.size() == 1 && opt->get_items_expected_max() <= 1) {
        params[key] = scalar(values.front());
      } else {
        Json list = Json::array();
        for (const auto& v : values) list.push_back(scalar(v));
        params[key] = list;
      }
    }
    return Json{{"subcommand", subcommand_}, {"params", params}, {"seed", seed}, {"inputs", inputs_},
                {"version", TDA_VERSION}};
  }

private:
  static Json scalar(const std::string& text) {
    try {
      std::size_t used = 0;
      const long long i = std::stoll(text, &used);
      if (used == text.size()) return i;
    } catch (const std::exception&) {
    }
    try {
      const double x = tda::io::parseNumber(text);
      return tda::io::toJson(x);
    } catch (const std::exception&) {
    }
    return text;
  }

  std::string subcommand_;
  CLI::App* app_;
  Json inputs_ = Json::array();
};

void writeText(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw tda::InvalidArgument("cannot open output file '" + path + "'");
  file << text;
}

std::string dumpJson(const Json& j) { return j.dump(2) + "\n"; }

bool looksLikeJson(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '{';
}

// Unwraps `key` from a CLI JSON document, or returns the document itself.
Json payload(const Json& j, const std::string& key) { return j.contains(key) ? j.at(key) : j; }

// ---------------------------------------------------------------------------
// Options shared by every subcommand

struct Common {
  std::vector<std::string> in;
  std::string out = "-";
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::size_t threads = 1;
  std::string svg;
};

void addCommon(CLI::App* sub, Common& c, bool withSvg = true) {
  sub->add_option("--in", c.in, "Input file(s); '-' reads standard input");
  sub->add_option("--out", c.out, "Output file; '-' writes standard output")->capture_default_str();
  sub->add_option("--seed", c.seed, "Seed of the random generator")->capture_default_str();
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker thread cap")->check(CLI::PositiveNumber)->capture_default_str();
  if (withSvg) sub->add_option("--svg", c.svg, "Also write an SVG figure to this path");
}

const std::string& singleInput(const Common& c, const std::string& what) {
  if (c.in.size() != 1) throw UsageError("expected exactly one --in file (" + what + ")");
  return c.in.front();
}

struct EstimatorOptions {
  std::string fn = "kde";
  std::optional<double> m0;
  std::optional<std::size_t> k;
  std::optional<double> h;
  std::vector<double> lim;
  std::optional<double> by;
};

void addEstimatorOptions(CLI::App* sub, EstimatorOptions& e, bool needGrid = true) {
  sub->add_option("--fn", e.fn, "Estimator")
      ->check(CLI::IsMember({"dist", "dtm", "knn", "kde", "kdist"}))
      ->capture_default_str();
  sub->add_option("--m0", e.m0, "Mass parameter of dtm");
  sub->add_option("--k", e.k, "Neighbour count of knn");
  sub->add_option("--h", e.h, "Bandwidth of kde and kdist");
  if (needGrid) {
    sub->add_option("--lim", e.lim, "Grid limits lo,hi per axis")->delimiter(',');
    sub->add_option("--by", e.by, "Grid spacing");
  }
}

tda::Estimator makeEstimator(const EstimatorOptions& e, bool parameterFromList = false) {
  using K = tda::Estimator::Kind;
  const K kind = tda::estimatorKindFromString(e.fn);
  auto need = [&](bool present, const char* flag) {
    if (!present && !parameterFromList) throw UsageError(std::string("--fn ") + e.fn + " requires " + flag);
  };
  switch (kind) {
    case K::distance: return tda::Estimator::distance();
    case K::dtm: need(e.m0.has_value(), "--m0"); return tda::Estimator::distanceToMeasure(e.m0.value_or(0.1));
    case K::knn: need(e.k.has_value(), "--k"); return tda::Estimator::knnDensity(e.k.value_or(1));
    case K::kde: need(e.h.has_value(), "--h"); return tda::Estimator::kernelDensity(e.h.value_or(1.0));
    case K::kernelDistance: need(e.h.has_value(), "--h"); return tda::Estimator::kernelDistance(e.h.value_or(1.0));
  }
  throw UsageError("unknown estimator");
}

tda::EvaluationGrid makeGridFrom(const EstimatorOptions& e) {
  if (e.lim.empty() || !e.by) throw UsageError("--lim and --by are required");
  if (e.lim.size() % 2 != 0) throw UsageError("--lim needs a lo,hi pair per axis");
  std::vector<tda::AxisLimits> limits;
  for (std::size_t i = 0; i < e.lim.size(); i += 2) limits.push_back({e.lim[i], e.lim[i + 1]});
  return tda::makeGrid(limits, *e.by);
}

tda::PointCloud readPoints(Run& run, const std::string& path) {
  const Input input = run.read(path);
  if (looksLikeJson(input.text)) {
    const Json j = payload(Json::parse(input.text), "points");
    std::vector<std::vector<double>> rows;
    for (const auto& row : j) rows.push_back(tda::io::numbersFromJson(row));
    return tda::PointCloud::fromRows(rows);
  }
  std::istringstream stream(input.text);
  return tda::io::readPointsCsv(stream);
}

tda::PersistenceDiagram readDiagramFile(Run& run, const std::string& path) {
  const Input input = run.read(path);
  std::istringstream stream(input.text);
  return tda::io::readDiagram(stream);
}

tda::ScalarField readFieldFile(Run& run, const std::string& path) {
  const Input input = run.read(path);
  if (looksLikeJson(input.text)) return tda::io::fieldFromJson(payload(Json::parse(input.text), "field"));
  std::istringstream stream(input.text);
  return tda::io::readFieldCsv(stream);
}

tda::SummaryCurve readCurveFile(Run& run, const std::string& path) {
  const Input input = run.read(path);
  if (looksLikeJson(input.text)) return tda::io::curveFromJson(payload(Json::parse(input.text), "curve"));
  std::istringstream stream(input.text);
  return tda::io::readCurveCsv(stream);
}

std::string diagramText(const Common& c, const Run& run, const tda::PersistenceDiagram& d) {
  if (c.format == "json") return dumpJson(Json{{"manifest", run.manifest(c.seed)}, {"diagram", tda::io::diagramToJson(d)}});
  std::ostringstream out;
  tda::io::writeDiagramCsv(out, d);
  return out.str();
}

std::string filtrationText(const tda::Filtration& f) {
  std::ostringstream out;
  f.dump(out);
  return out.str();
}

std::vector<double> domain(const std::optional<double>& tmin, const std::optional<double>& tmax, std::size_t tlen,
                           const tda::PersistenceDiagram& d) {
  tda::svg::Range r;
  for (const auto& p : d.pairs) {
    r.include(p.birth);
    r.include(p.death);
  }
  const double lo = tmin.value_or(r.empty ? 0.0 : r.lo);
  const double hi = tmax.value_or(r.empty ? 1.0 : r.hi);
  if (!(lo < hi)) throw tda::InvalidArgument("landscape domain needs tmin < tmax; pass --tmin/--tmax");
  return tda::linspace(lo, hi, tlen);
}

// Parameter sequence lo, lo + step, ..., rounded to 12 significant digits.
std::vector<double> parameterSequence(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo <= hi)) throw tda::InvalidArgument("parameter range needs pmin <= pmax and pstep > 0");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = lo + step * static_cast<double>(i);
    const double scale = std::pow(10.0, 11 - std::floor(std::log10(std::max(std::abs(v), 1e-300))));
    out.push_back(v == 0.0 ? 0.0 : std::round(v * scale) / scale);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological data analysis: estimators, persistence, summaries and inference"};
  app.set_version_flag("--version", std::string(TDA_VERSION));
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough(false);

  std::function<void()> action;
  auto command = [&](const std::string& name, const std::string& description) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->set_help_flag("--help", "Print this help message and exit");
    return sub;
  };

  // sample-circle -----------------------------------------------------------
  Common scC;
  std::size_t scN = 0;
  double scR = 1.0;
  std::vector<double> scOffset{0.0, 0.0};
  CLI::App* sc = command("sample-circle", "Uniform sample on a circle");
  addCommon(sc, scC, false);
  sc->add_option("--n", scN, "Number of points")->required()->check(CLI::PositiveNumber);
  sc->add_option("--r", scR, "Radius")->check(CLI::PositiveNumber)->capture_default_str();
  sc->add_option("--offset", scOffset, "Centre x,y")->delimiter(',')->expected(2)->capture_default_str();
  sc->callback([&] {
    action = [&] {
      Run run("sample-circle", sc);
      tda::Rng rng(scC.seed);
      const auto points = tda::sampleCircle(scN, scR, scOffset, rng);
      if (scC.format == "json") {
        Json rows = Json::array();
        for (std::size_t i = 0; i < points.size(); ++i) {
          rows.push_back(tda::io::toJson(std::vector<double>(points[i].begin(), points[i].end())));
        }
        writeText(scC.out, dumpJson(Json{{"manifest", run.manifest(scC.seed)}, {"points", rows}}));
      } else {
        std::ostringstream out;
        tda::io::writePointsCsv(out, points);
        writeText(scC.out, out.str());
      }
    };
  });

  // estimate ----------------------------------------------------------------
  Common esC;
  EstimatorOptions esE;
  CLI::App* es = command("estimate", "Evaluate an estimator on a grid");
  addCommon(es, esC);
  addEstimatorOptions(es, esE);
  es->callback([&] {
    action = [&] {
      Run run("estimate", es);
      const auto points = readPoints(run, singleInput(esC, "points"));
      const auto grid = makeGridFrom(esE);
      const auto field = tda::estimatedField(grid, makeEstimator(esE)(points, grid.queries(), esC.threads));
      if (esC.format == "json") {
        writeText(esC.out, dumpJson(Json{{"manifest", run.manifest(esC.seed)}, {"field", tda::io::fieldToJson(field)}}));
      } else {
        std::ostringstream out;
        tda::io::writeFieldCsv(out, field);
        writeText(esC.out, out.str());
      }
      if (!esC.svg.empty()) writeText(esC.svg, tda::svg::fieldPlot(field, esE.fn));
    };
  });

  // grid-diag ---------------------------------------------------------------
  Common gdC;
  EstimatorOptions gdE;
  std::string gdField;
  bool gdSublevel = false, gdDump = false;
  double gdBand = 0.0;
  CLI::App* gd = command("grid-diag", "Persistence diagram of an estimator (or field) on a grid");
  addCommon(gd, gdC);
  addEstimatorOptions(gd, gdE);
  gd->add_option("--field", gdField, "Precomputed field (CSV or JSON) instead of --in points");
  gd->add_flag("--sublevel", gdSublevel, "Sublevel filtration (default: superlevel)");
  gd->add_flag("--dump-filtration", gdDump, "Write the filtration as value;v0,v1,... instead of the diagram");
  gd->add_option("--band", gdBand, "Band height drawn in the SVG")->capture_default_str();
  gd->callback([&] {
    action = [&] {
      Run run("grid-diag", gd);
      tda::ScalarField field;
      if (!gdField.empty()) {
        if (!gdC.in.empty()) throw UsageError("give either --in points or --field, not both");
        field = readFieldFile(run, gdField);
      } else {
        const auto points = readPoints(run, singleInput(gdC, "points"));
        const auto grid = makeGridFrom(gdE);
        field = tda::estimatedField(grid, makeEstimator(gdE)(points, grid.queries(), gdC.threads));
      }
      if (gdDump) {
        writeText(gdC.out, filtrationText(tda::buildGridFiltration(field, gdSublevel)));
        return;
      }
      const auto diagram = tda::fieldDiagram(field, gdSublevel);
      writeText(gdC.out, diagramText(gdC, run, diagram));
      if (!gdC.svg.empty()) writeText(gdC.svg, tda::svg::diagramPlot(diagram, gdBand));
    };
  });

  // rips-diag ---------------------------------------------------------------
  Common rdC;
  std::string rdMatrix, rdStrategy = "twist";
  int rdMaxDim = 1;
  double rdMaxScale = 0.0, rdBand = 0.0;
  bool rdDump = false;
  CLI::App* rd = command("rips-diag", "Persistence diagram of a Vietoris-Rips filtration");
  addCommon(rd, rdC);
  rd->add_option("--dist-matrix", rdMatrix, "Distance matrix CSV instead of --in points");
  rd->add_option("--maxdim", rdMaxDim, "Largest homology dimension")->check(CLI::NonNegativeNumber)->capture_default_str();
  rd->add_option("--maxscale", rdMaxScale, "Largest filtration value")->required();
  rd->add_option("--strategy", rdStrategy, "Reduction strategy")
      ->check(CLI::IsMember({"standard", "twist"}))
      ->capture_default_str();
  rd->add_flag("--dump-filtration", rdDump, "Write the filtration as value;v0,v1,... instead of the diagram");
  rd->add_option("--band", rdBand, "Band height drawn in the SVG")->capture_default_str();
  rd->callback([&] {
    action = [&] {
      Run run("rips-diag", rd);
      std::optional<tda::DistanceMatrix> dist;
      if (!rdMatrix.empty()) {
        if (!rdC.in.empty()) throw UsageError("give either --in points or --dist-matrix, not both");
        const Input input = run.read(rdMatrix);
        std::istringstream stream(input.text);
        dist = tda::io::readDistanceMatrixCsv(stream);
      } else {
        dist = tda::DistanceMatrix::fromPoints(readPoints(run, singleInput(rdC, "points")));
      }
      if (rdDump) {
        writeText(rdC.out, filtrationText(tda::buildRipsFiltration(*dist, rdMaxDim, rdMaxScale)));
        return;
      }
      const auto strategy = rdStrategy == "standard" ? tda::ReductionStrategy::standard : tda::ReductionStrategy::twist;
      const auto diagram = tda::ripsDiag(*dist, rdMaxDim, rdMaxScale, strategy);
      writeText(rdC.out, diagramText(rdC, run, diagram));
      if (!rdC.svg.empty()) writeText(rdC.svg, tda::svg::diagramPlot(diagram, rdBand));
    };
  });

  // distance ----------------------------------------------------------------
  Common diC;
  std::vector<std::string> diFiles;
  std::string diMetric = "bottleneck";
  double diP = 1.0;
  int diDim = 0;
  CLI::App* di = command("distance", "Bottleneck or Wasserstein distance between two diagrams");
  addCommon(di, diC, false);
  di->add_option("files", diFiles, "Two diagram files (CSV or JSON)");
  di->add_option("--metric", diMetric, "Metric")
      ->check(CLI::IsMember({"bottleneck", "wasserstein"}))
      ->capture_default_str();
  di->add_option("--p", diP, "Wasserstein power")->capture_default_str();
  di->add_option("--dim", diDim, "Homology dimension")->check(CLI::NonNegativeNumber)->capture_default_str();
  di->callback([&] {
    action = [&] {
      Run run("distance", di);
      std::vector<std::string> files = diC.in;
      files.insert(files.end(), diFiles.begin(), diFiles.end());
      if (files.size() != 2) throw UsageError("distance needs exactly two diagram files");
      const auto a = readDiagramFile(run, files[0]);
      const auto b = readDiagramFile(run, files[1]);
      const double value =
          diMetric == "bottleneck" ? tda::bottleneck(a, b, diDim) : tda::wasserstein(a, b, diP, diDim);
      if (std::isinf(value)) {
        throw tda::DomainError("diagrams have different numbers of essential classes in dimension " +
                               std::to_string(diDim));
      }
      if (diC.format == "json") {
        writeText(diC.out, dumpJson(Json{{"manifest", run.manifest(diC.seed)},
                                         {"metric", diMetric},
                                         {"dimension", diDim},
                                         {"value", tda::io::toJson(value)}}));
      } else {
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "%.6f\n", value);
        writeText(diC.out, buffer);
      }
    };
  });

  // landscape / silhouette --------------------------------------------------
  struct CurveOptions {
    Common c;
    int dim = 1;
    std::size_t kk = 1;
    double p = 1.0;
    std::optional<double> tmin, tmax;
    std::size_t tlen = 500;
    bool excludeEssential = false;
  };
  CurveOptions laO, siO;
  auto curveCommand = [&](const std::string& name, CurveOptions& o, bool isLandscape) {
    CLI::App* sub = command(name, isLandscape ? "Persistence landscape of a diagram" : "Power-weighted silhouette");
    addCommon(sub, o.c);
    sub->add_option("--dim", o.dim, "Homology dimension")->check(CLI::NonNegativeNumber)->capture_default_str();
    if (isLandscape) sub->add_option("--KK", o.kk, "Landscape order")->check(CLI::PositiveNumber)->capture_default_str();
    else sub->add_option("--p", o.p, "Weight power")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--tmin", o.tmin, "Domain start (default: smallest diagram value)");
    sub->add_option("--tmax", o.tmax, "Domain end (default: largest diagram value)");
    sub->add_option("--tlen", o.tlen, "Number of domain samples")->check(CLI::Range(2, 10000000))->capture_default_str();
    sub->add_flag("--exclude-essential", o.excludeEssential, "Drop essential classes");
    sub->callback([&, sub, name, isLandscape] {
      action = [&, sub, name, isLandscape] {
        Run run(name, sub);
        const auto diagram = readDiagramFile(run, singleInput(o.c, "diagram"));
        const auto tseq = domain(o.tmin, o.tmax, o.tlen, diagram);
        tda::SummaryCurve curve;
        Json extra = Json::object();
        if (isLandscape) {
          curve = tda::landscape(diagram, o.dim, o.kk, tseq, !o.excludeEssential);
        } else {
          const auto s = tda::silhouette(diagram, o.p, o.dim, tseq, !o.excludeEssential);
          curve = s.curve;
          extra["empty"] = s.empty;
        }
        if (o.c.format == "json") {
          Json j{{"manifest", run.manifest(o.c.seed)}, {"curve", tda::io::curveToJson(curve)}};
          for (auto& [k, v] : extra.items()) j[k] = v;
          writeText(o.c.out, dumpJson(j));
        } else {
          std::ostringstream out;
          tda::io::writeCurveCsv(out, curve);
          writeText(o.c.out, out.str());
        }
        if (!o.c.svg.empty()) writeText(o.c.svg, tda::svg::curvePlot(curve, isLandscape ? "landscape" : "silhouette"));
      };
    });
  };
  curveCommand("landscape", laO, true);
  curveCommand("silhouette", siO, false);

  // bootstrap-band ----------------------------------------------------------
  Common bbC;
  EstimatorOptions bbE;
  std::size_t bbB = 100;
  double bbAlpha = 0.1;
  bool bbSublevel = false;
  CLI::App* bb = command("bootstrap-band", "Bootstrap sup-norm confidence band and significant features");
  addCommon(bb, bbC);
  addEstimatorOptions(bb, bbE);
  bb->add_option("--B", bbB, "Bootstrap replicates")->check(CLI::PositiveNumber)->capture_default_str();
  bb->add_option("--alpha", bbAlpha, "Significance level")->capture_default_str();
  bb->add_flag("--sublevel", bbSublevel, "Sublevel filtration for the diagram (default: superlevel)");
  bb->callback([&] {
    action = [&] {
      Run run("bootstrap-band", bb);
      const auto points = readPoints(run, singleInput(bbC, "points"));
      const auto grid = makeGridFrom(bbE);
      const auto queries = grid.queries();
      const auto band = tda::bootstrapBand(points, makeEstimator(bbE), queries, bbB, bbAlpha, bbC.seed, bbC.threads);
      const auto diagram = tda::fieldDiagram(tda::ScalarField(grid, band.center), bbSublevel);
      const auto split = tda::significantFeatures(diagram, band.width);
      if (bbC.format == "json") {
        Json sig = Json::array();
        for (const auto& p : split.significant) {
          sig.push_back(Json{{"dimension", p.dimension}, {"birth", tda::io::toJson(p.birth)},
                             {"death", tda::io::toJson(p.death)}, {"essential", p.essential}});
        }
        Json axes = Json::array();
        for (const auto& a : grid.axes()) axes.push_back(tda::io::toJson(a));
        writeText(bbC.out, dumpJson(Json{{"manifest", run.manifest(bbC.seed)},
                                         {"band", tda::io::bandToJson(band)},
                                         {"axes", axes},
                                         {"diagram", tda::io::diagramToJson(diagram)},
                                         {"significant", sig}}));
      } else {
        std::ostringstream out;
        tda::io::writeBandCsv(out, queries, band);
        writeText(bbC.out, out.str());
      }
      if (!bbC.svg.empty()) writeText(bbC.svg, tda::svg::diagramPlot(diagram, 2 * band.width));
    };
  });

  // multip-bootstrap --------------------------------------------------------
  Common mbC;
  std::string mbCurves;
  std::size_t mbB = 100, mbN = 10, mbM = 80, mbKK = 1, mbTlen = 500;
  double mbAlpha = 0.05, mbMaxScale = 5.0;
  int mbMaxDim = 1, mbDim = 1;
  std::optional<double> mbTmin, mbTmax;
  CLI::App* mb = command("multip-bootstrap", "Multiplier-bootstrap band for a mean landscape");
  addCommon(mb, mbC);
  mb->add_option("--curves", mbCurves, "Curve matrix CSV (first row t, then one curve per row) instead of --in points");
  mb->add_option("--B", mbB, "Bootstrap replicates")->check(CLI::PositiveNumber)->capture_default_str();
  mb->add_option("--alpha", mbAlpha, "Significance level")->capture_default_str();
  mb->add_option("--n", mbN, "Number of subsamples")->check(CLI::PositiveNumber)->capture_default_str();
  mb->add_option("--m", mbM, "Subsample size")->check(CLI::PositiveNumber)->capture_default_str();
  mb->add_option("--maxdim", mbMaxDim, "Rips max dimension")->check(CLI::NonNegativeNumber)->capture_default_str();
  mb->add_option("--maxscale", mbMaxScale, "Rips max scale")->capture_default_str();
  mb->add_option("--dim", mbDim, "Landscape dimension")->check(CLI::NonNegativeNumber)->capture_default_str();
  mb->add_option("--KK", mbKK, "Landscape order")->check(CLI::PositiveNumber)->capture_default_str();
  mb->add_option("--tmin", mbTmin, "Domain start (default 0)");
  mb->add_option("--tmax", mbTmax, "Domain end (default maxscale)");
  mb->add_option("--tlen", mbTlen, "Number of domain samples")->check(CLI::Range(2, 10000000))->capture_default_str();
  mb->callback([&] {
    action = [&] {
      Run run("multip-bootstrap", mb);
      std::vector<double> tseq;
      std::vector<std::vector<double>> curves;
      if (!mbCurves.empty()) {
        if (!mbC.in.empty()) throw UsageError("give either --in points or --curves, not both");
        const Input input = run.read(mbCurves);
        std::istringstream stream(input.text);
        auto matrix = tda::io::readCurvesCsv(stream);
        tseq = std::move(matrix.tseq);
        curves = std::move(matrix.curves);
      } else {
        const auto points = readPoints(run, singleInput(mbC, "points"));
        tseq = tda::linspace(mbTmin.value_or(0.0), mbTmax.value_or(mbMaxScale), mbTlen);
        curves = tda::subsampleLandscapes(points, mbN, mbM, mbMaxDim, mbMaxScale, mbDim, mbKK, tseq, mbC.seed,
                                          mbC.threads);
      }
      const auto band = tda::multipBootstrap(curves, mbB, mbAlpha, mbC.seed, mbC.threads);
      if (mbC.format == "json") {
        writeText(mbC.out,
                  dumpJson(Json{{"manifest", run.manifest(mbC.seed)}, {"band", tda::io::multiplierBandToJson(tseq, band)}}));
      } else {
        std::ostringstream out;
        tda::io::writeMultiplierBandCsv(out, tseq, band);
        writeText(mbC.out, out.str());
      }
      if (!mbC.svg.empty()) writeText(mbC.svg, tda::svg::bandPlot(tseq, band.mean, band.lower, band.upper));
    };
  });

  // max-persistence ---------------------------------------------------------
  Common mpC;
  EstimatorOptions mpE;
  std::vector<double> mpParams;
  std::optional<double> mpMin, mpMax, mpStep;
  std::size_t mpB = 30;
  double mpAlpha = 0.1;
  bool mpSublevel = false;
  CLI::App* mp = command("max-persistence", "Smoothing-parameter selection by significant persistence");
  addCommon(mp, mpC);
  addEstimatorOptions(mp, mpE);
  mp->add_option("--params", mpParams, "Parameter values")->delimiter(',');
  mp->add_option("--pmin", mpMin, "First parameter");
  mp->add_option("--pmax", mpMax, "Last parameter");
  mp->add_option("--pstep", mpStep, "Parameter step");
  mp->add_option("--B", mpB, "Bootstrap replicates")->check(CLI::PositiveNumber)->capture_default_str();
  mp->add_option("--alpha", mpAlpha, "Significance level")->capture_default_str();
  mp->add_flag("--sublevel", mpSublevel, "Sublevel filtration (default: superlevel)");
  mp->callback([&] {
    action = [&] {
      Run run("max-persistence", mp);
      std::vector<double> params = mpParams;
      if (params.empty()) {
        if (!mpMin || !mpMax || !mpStep) throw UsageError("give --params or all of --pmin, --pmax, --pstep");
        params = parameterSequence(*mpMin, *mpMax, *mpStep);
      }
      const auto points = readPoints(run, singleInput(mpC, "points"));
      const auto grid = makeGridFrom(mpE);
      const auto result = tda::maxPersistence(makeEstimator(mpE, true), params, points, grid, mpSublevel, mpB, mpAlpha,
                                              mpC.seed, mpC.threads);
      if (mpC.format == "json") {
        Json j{{"manifest", run.manifest(mpC.seed)}};
        j.update(tda::io::maxPersistenceToJson(result));
        writeText(mpC.out, dumpJson(j));
      } else {
        std::ostringstream out;
        out << "parameter,width,N,S\n";
        for (const auto& e : result.entries) {
          out << tda::io::formatNumber(e.parameter) << ',' << tda::io::formatNumber(e.width) << ','
              << e.significantCount << ',' << tda::io::formatNumber(e.significantPersistence) << '\n';
        }
        writeText(mpC.out, out.str());
      }
      if (!mpC.svg.empty()) writeText(mpC.svg, tda::svg::maxPersistencePlot(result));
    };
  });

  // cluster-tree ------------------------------------------------------------
  Common ctC;
  std::size_t ctK = 0;
  std::string ctDensity = "knn", ctType = "lambda";
  std::optional<double> ctH;
  CLI::App* ct = command("cluster-tree", "Density cluster tree");
  addCommon(ct, ctC);
  ct->add_option("--k", ctK, "Neighbours for the graph (and the knn density)")->required()->check(CLI::PositiveNumber);
  ct->add_option("--density", ctDensity, "Density estimator")->check(CLI::IsMember({"knn", "kde"}))->capture_default_str();
  ct->add_option("--h", ctH, "Bandwidth of the kde density");
  ct->add_option("--type", ctType, "Dendrogram axis of the SVG")
      ->check(CLI::IsMember({"lambda", "alpha", "kappa"}))
      ->capture_default_str();
  ct->callback([&] {
    action = [&] {
      Run run("cluster-tree", ct);
      const auto points = readPoints(run, singleInput(ctC, "points"));
      const auto kind = tda::clusterDensityFromString(ctDensity);
      if (kind == tda::ClusterDensity::kde && !ctH) throw UsageError("--density kde requires --h");
      const auto tree = tda::clusterTree(points, ctK, kind, ctH, ctC.threads);
      if (ctC.format == "json") {
        Json j = tda::io::treeToJson(tree);
        const auto xpos = tda::svg::branchPositions(tree);
        const auto lambda = tda::svg::branchExtents(tree, tda::svg::TreeAxis::lambda);
        const auto alpha = tda::svg::branchExtents(tree, tda::svg::TreeAxis::alpha);
        const auto kappa = tda::svg::branchExtents(tree, tda::svg::TreeAxis::kappa);
        for (std::size_t id = 0; id < tree.branches.size(); ++id) {
          j["branches"][id]["coordinates"] =
              Json{{"x", xpos[id]},
                   {"lambda", {tda::io::toJson(lambda[id].first), tda::io::toJson(lambda[id].second)}},
                   {"alpha", {tda::io::toJson(alpha[id].first), tda::io::toJson(alpha[id].second)}},
                   {"kappa", {tda::io::toJson(kappa[id].first), tda::io::toJson(kappa[id].second)}}};
        }
        writeText(ctC.out, dumpJson(Json{{"manifest", run.manifest(ctC.seed)}, {"tree", j}}));
      } else {
        std::ostringstream out;
        out << "id,parent,lambda_birth,lambda_death,alpha_birth,alpha_death,kappa_birth,kappa_death,size\n";
        for (const auto& b : tree.branches) {
          out << b.id << ',' << (b.parent ? std::to_string(*b.parent) : std::string("-1"));
          for (double v : {b.lambdaBirth, b.lambdaDeath, b.alphaBirth, b.alphaDeath, b.kappaBirth, b.kappaDeath}) {
            out << ',' << tda::io::formatNumber(v);
          }
          out << ',' << b.members.size() << '\n';
        }
        writeText(ctC.out, out.str());
      }
      if (!ctC.svg.empty()) writeText(ctC.svg, tda::svg::dendrogramPlot(tree, tda::svg::treeAxisFromString(ctType)));
    };
  });

  // plot --------------------------------------------------------------------
  Common plC;
  std::string plKind, plType = "lambda", plTitle;
  double plBand = 0.0;
  CLI::App* pl = command("plot", "Render a saved artifact as SVG");
  addCommon(pl, plC, false);
  pl->add_option("--kind", plKind, "Plot kind")
      ->required()
      ->check(CLI::IsMember({"diagram", "barcode", "rotated", "landscape", "silhouette", "band", "dendrogram", "field"}));
  pl->add_option("--band", plBand, "Shaded band height for diagram and rotated plots")->capture_default_str();
  pl->add_option("--type", plType, "Dendrogram axis")->check(CLI::IsMember({"lambda", "alpha", "kappa"}))->capture_default_str();
  pl->add_option("--title", plTitle, "Figure title");
  pl->callback([&] {
    action = [&] {
      Run run("plot", pl);
      if (plBand < 0.0) throw tda::InvalidArgument("--band must be non-negative");
      const std::string& path = singleInput(plC, "artifact");
      std::string svgText;
      if (plKind == "diagram" || plKind == "barcode" || plKind == "rotated") {
        const auto d = readDiagramFile(run, path);
        if (plKind == "diagram") svgText = tda::svg::diagramPlot(d, plBand, plTitle);
        else if (plKind == "rotated") svgText = tda::svg::rotatedPlot(d, plBand, plTitle);
        else svgText = tda::svg::barcodePlot(d, plTitle);
      } else if (plKind == "landscape" || plKind == "silhouette") {
        svgText = tda::svg::curvePlot(readCurveFile(run, path), plKind, plTitle);
      } else if (plKind == "field") {
        svgText = tda::svg::fieldPlot(readFieldFile(run, path), plTitle);
      } else if (plKind == "band") {
        const Input input = run.read(path);
        if (looksLikeJson(input.text)) {
          const Json j = payload(Json::parse(input.text), "band");
          const auto band = tda::io::multiplierBandFromJson(j);
          svgText = tda::svg::bandPlot(tda::io::numbersFromJson(j.at("t")), band.mean, band.lower, band.upper, plTitle);
        } else {
          std::istringstream stream(input.text);
          const auto table = tda::io::readTable(stream);
          std::vector<double> t, mean, lower, upper;
          for (const auto& row : table.rows) {
            t.push_back(row.at(table.column("t")));
            mean.push_back(row.at(table.column("mean")));
            lower.push_back(row.at(table.column("lower")));
            upper.push_back(row.at(table.column("upper")));
          }
          svgText = tda::svg::bandPlot(t, mean, lower, upper, plTitle);
        }
      } else {
        const Input input = run.read(path);
        if (!looksLikeJson(input.text)) throw tda::InvalidArgument("dendrogram plots need the cluster-tree JSON output");
        const auto tree = tda::io::treeFromJson(payload(Json::parse(input.text), "tree"));
        svgText = tda::svg::dendrogramPlot(tree, tda::svg::treeAxisFromString(plType), plTitle);
      }
      writeText(plC.out, svgText);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exitUsage;
  }

  try {
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exitUsage;
  } catch (const tda::DomainError& e) {
    std::cerr << "numeric domain error: " << e.what() << "\n";
    return exitDomain;
  } catch (const tda::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return exitValidation;
  } catch (const Json::exception& e) {
    std::cerr << "invalid JSON input: " << e.what() << "\n";
    return exitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exitValidation;
  }
}
