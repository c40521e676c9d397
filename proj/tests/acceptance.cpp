// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "tda/io.hpp"
#include "tda/sampling.hpp"
#include "tda/tda.hpp"

#ifndef TDA_CLI_PATH
#error "TDA_CLI_PATH must point at the command-line tool"
#endif

using namespace tda;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

ScalarField integerGridField(const std::vector<std::size_t>& shape, std::vector<double> values) {
  std::vector<std::vector<double>> axes;
  for (std::size_t n : shape) {
    std::vector<double> axis(n);
    std::iota(axis.begin(), axis.end(), 0.0);
    axes.push_back(axis);
  }
  return ScalarField(EvaluationGrid(axes), std::move(values));
}

// Compares the field's diagram in both orientations against the rank oracle.
bool fieldMatchesOracle(const ScalarField& field) {
  const int maxDim = static_cast<int>(field.grid.dimension()) - 1;
  for (bool sublevel : {true, false}) {
    const auto d = fieldDiagram(field, sublevel);
    const auto f = buildGridFiltration(field, sublevel);
    if (oracle::sortedPairs(d.pairs) != oracle::publishedOracle(f, maxDim, d.orientation, d.scaleCap)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Outcome persistenceOracle() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(20240101);
  std::size_t ripsTrials = 0, fields = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    const auto pts = sampleBox(n, 2, 0.0, 1.0, rng);
    const double scale = rng.uniform(0.2, 1.6);
    const int maxDim = static_cast<int>(rng.index(3));
    const auto d = ripsDiag(pts, maxDim, scale);
    const auto f = buildRipsFiltration(pts, maxDim, scale);
    if (oracle::sortedPairs(d.pairs) != oracle::publishedOracle(f, maxDim, Orientation::sublevel, scale)) {
      o.fail("Rips trial " + std::to_string(trial) + " differs from the oracle");
    }
    ++ripsTrials;
  }

  // Every field with values in {0,1,2,3} on shapes of at most 8 vertices.
  const std::vector<std::vector<std::size_t>> exhaustive{{2}, {3}, {4}, {5}, {6}, {7}, {8},
                                                         {2, 2}, {2, 3}, {3, 2}, {2, 4}, {4, 2}};
  for (const auto& shape : exhaustive) {
    std::size_t size = 1;
    for (auto s : shape) size *= s;
    std::vector<double> values(size, 0.0);
    const std::size_t total = std::size_t{1} << (2 * size);
    for (std::size_t code = 0; code < total; ++code) {
      for (std::size_t i = 0; i < size; ++i) values[i] = static_cast<double>((code >> (2 * i)) & 3);
      if (!fieldMatchesOracle(integerGridField(shape, values))) {
        o.fail("field of shape " + std::to_string(shape.size()) + "D #" + std::to_string(code) + " differs");
      }
      ++fields;
    }
  }
  // Larger shapes up to 4x4: seeded samples of the same value alphabet.
  const std::vector<std::vector<std::size_t>> sampled{{3, 3}, {3, 4}, {4, 3}, {4, 4}, {16}};
  for (const auto& shape : sampled) {
    std::size_t size = 1;
    for (auto s : shape) size *= s;
    for (int trial = 0; trial < 1500; ++trial) {
      std::vector<double> values(size);
      for (auto& v : values) v = static_cast<double>(rng.index(4));
      if (!fieldMatchesOracle(integerGridField(shape, values))) o.fail("sampled field differs from the oracle");
      ++fields;
    }
  }
  const double elapsed = seconds(start);
  if (elapsed >= 60.0) o.fail("runtime " + fmt(elapsed) + " s exceeds 60 s");
  if (o.pass) {
    o.detail = std::to_string(ripsTrials) + " Rips filtrations and " + std::to_string(fields) +
               " grid fields match the rank oracle (" + fmt(elapsed) + " s)";
  }
  return o;
}

Outcome unitSquare() {
  Outcome o;
  const auto d = ripsDiag(PointCloud(2, {0, 0, 1, 0, 0, 1, 1, 1}), 1, 2.0);
  std::vector<PersistencePair> h0, h1;
  for (const auto& p : d.pairs) (p.dimension == 0 ? h0 : h1).push_back(p);
  std::sort(h0.begin(), h0.end());
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
  if (h0.size() != 4) o.fail("expected 4 H0 pairs, got " + std::to_string(h0.size()));
  else {
    for (int i = 0; i < 3; ++i) {
      if (!near(h0[i].birth, 0) || !near(h0[i].death, 1) || h0[i].essential) o.fail("finite H0 pair is not (0,1)");
    }
    if (!near(h0[3].birth, 0) || !near(h0[3].death, 2) || !h0[3].essential) o.fail("essential H0 pair is not (0,2)");
  }
  if (h1.size() != 1 || !near(h1[0].birth, 1) || !near(h1[0].death, std::sqrt(2.0)) || h1[0].essential) {
    o.fail("H1 is not {(1, sqrt 2)}");
  }
  if (o.pass) o.detail = "H0 = {(0,1)x3, (0,2) essential}, H1 = {(1, 1.414214)}";
  return o;
}

Outcome stability() {
  Outcome o;
  Rng rng(7);
  double worstSlack = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nx = 4 + rng.index(9), ny = 4 + rng.index(9);
    std::vector<double> f(nx * ny), g(nx * ny);
    const double noise = rng.uniform(0.01, 1.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = rng.uniform(-2, 2);
      g[i] = f[i] + rng.uniform(-noise, noise);
      sup = std::max(sup, std::abs(f[i] - g[i]));
    }
    for (bool sublevel : {true, false}) {
      const auto df = fieldDiagram(integerGridField({nx, ny}, f), sublevel);
      const auto dg = fieldDiagram(integerGridField({nx, ny}, g), sublevel);
      for (int dim = 0; dim <= 1; ++dim) {
        const double b = bottleneck(df, dg, dim);
        worstSlack = std::min(worstSlack, sup - b);
        if (!(b <= sup + 1e-9)) o.fail("trial " + std::to_string(trial) + ": " + fmt(b) + " > " + fmt(sup));
      }
    }
  }
  if (o.pass) o.detail = "100 field pairs, both orientations, H0 and H1; min(sup|f-g| - bottleneck) = " + fmt(worstSlack);
  return o;
}

PersistenceDiagram randomDiagram(Rng& rng, std::size_t maxPoints) {
  PersistenceDiagram d{{}, Orientation::sublevel, 100.0};
  const std::size_t n = rng.index(maxPoints + 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Mix continuous and integer-valued points so exact ties occur too.
    const bool integral = rng.uniform() < 0.3;
    const double b = integral ? static_cast<double>(rng.index(4)) : rng.uniform(0, 5);
    const double len = integral ? static_cast<double>(1 + rng.index(3)) : rng.uniform(0.01, 3);
    d.pairs.push_back({0, b, b + len, false});
  }
  return d;
}

Outcome metricOracles() {
  Outcome o;
  Rng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = randomDiagram(rng, 6), b = randomDiagram(rng, 6);
    const auto pa = oracle::finitePoints(a, 0), pb = oracle::finitePoints(b, 0);
    const double eb = std::abs(bottleneck(a, b, 0) - oracle::exhaustiveBottleneck(pa, pb));
    worst = std::max(worst, eb);
    if (eb > 1e-9) o.fail("bottleneck differs from enumeration in trial " + std::to_string(trial));
    for (double p : {1.0, 2.0, 3.0}) {
      const double ew = std::abs(wasserstein(a, b, p, 0) - oracle::exhaustiveWasserstein(pa, pb, p));
      worst = std::max(worst, ew);
      if (ew > 1e-9) o.fail("Wasserstein differs from enumeration in trial " + std::to_string(trial));
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = randomDiagram(rng, 8), b = randomDiagram(rng, 8), c = randomDiagram(rng, 8);
    if (bottleneck(a, b, 0) != bottleneck(b, a, 0)) o.fail("bottleneck is not symmetric");
    if (std::abs(wasserstein(a, b, 2, 0) - wasserstein(b, a, 2, 0)) > 1e-12) o.fail("Wasserstein is not symmetric");
    if (bottleneck(a, c, 0) > bottleneck(a, b, 0) + bottleneck(b, c, 0) + 1e-12) o.fail("bottleneck triangle violated");
    for (double p : {1.0, 2.0}) {
      if (wasserstein(a, c, p, 0) > wasserstein(a, b, p, 0) + wasserstein(b, c, p, 0) + 1e-9) {
        o.fail("Wasserstein triangle violated");
      }
    }
  }
  if (o.pass) o.detail = "max deviation from enumeration " + fmt(worst) + "; symmetry and triangle hold on 100 triples";
  return o;
}

Outcome estimatorOracles() {
  Outcome o;
  Rng rng(5150);
  double worst = 0.0, identity = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.index(50), d = 1 + rng.index(3);
    const auto x = sampleBox(n, d, -2, 2, rng);
    const auto q = sampleBox(20, d, -2.5, 2.5, rng);
    const auto xr = oracle::rows(x);
    const double h = rng.uniform(0.1, 2.0), m0 = rng.uniform(0.01, 1.0);
    const std::size_t k = 1 + rng.index(n);
    const auto vd = distFct(x, q), vm = dtm(x, q, m0), vk = knnDE(x, q, k), ve = kde(x, q, h), vg = kernelDist(x, q, h);
    // Self-similarity term of the kernel distance, from its definition.
    double self = 0.0;
    for (const auto& a : xr) {
      for (const auto& b : xr) self += std::exp(-oracle::sq(a, b) / (2 * h * h));
    }
    self /= static_cast<double>(n * n);
    const double norm = std::pow(std::sqrt(2 * std::numbers::pi) * h, static_cast<double>(d));
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::vector<double> y(q[i].begin(), q[i].end());
      auto check = [&](double got, double want, double scale) {
        const double err = std::abs(got - want) / std::max(1.0, scale);
        worst = std::max(worst, err);
        if (err > 1e-12) o.fail("estimator deviates from the naive reference by " + fmt(err));
      };
      check(vd[i], oracle::naiveDist(xr, y), 1.0);
      check(vm[i], oracle::naiveDtm(xr, y, m0), 1.0);
      const double knn = oracle::naiveKnn(xr, y, k);
      check(vk[i], knn, std::abs(knn));
      check(ve[i], oracle::naiveKde(xr, y, h), 1.0);
      check(vg[i], oracle::naiveKernelDist(xr, y, h), 1.0);
      // kernelDist^2 = self + K(0) - 2 * norm * kde, with K(0) = 1.
      const double residual = std::abs(vg[i] * vg[i] - std::max(0.0, self + 1.0 - 2.0 * norm * ve[i]));
      identity = std::max(identity, residual);
      if (residual >= 1e-10) o.fail("kernel distance identity residual " + fmt(residual));
    }
  }
  if (o.pass) o.detail = "50 inputs; max deviation " + fmt(worst) + ", identity residual " + fmt(identity);
  return o;
}

Outcome summaries() {
  Outcome o;
  Rng rng(31337);
  const auto t = linspace(-0.5, 3.5, 1000);
  const PersistenceDiagram single{{{1, 0.3, 2.9, false}}, Orientation::sublevel, 5.0};
  const auto tent = landscape(single, 1, 1, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (tent.values[i] != triangle(0.3, 2.9, t[i])) o.fail("single-pair landscape differs from its tent");
  }
  const auto grid = linspace(0, 8, 400);
  for (int trial = 0; trial < 50; ++trial) {
    PersistenceDiagram d{{}, Orientation::sublevel, 10.0};
    const std::size_t n = 1 + rng.index(12);
    for (std::size_t i = 0; i < n; ++i) {
      const double b = rng.uniform(0, 5);
      d.pairs.push_back({1, b, b + rng.uniform(0.05, 3), false});
    }
    std::vector<double> previous = landscape(d, 1, 1, grid).values;
    for (std::size_t k = 2; k <= n + 1; ++k) {
      const auto next = landscape(d, 1, k, grid).values;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (next[i] > previous[i]) o.fail("landscape orders are not nested");
      }
      previous = next;
    }
    const auto s = silhouette(d, rng.uniform(0.5, 3), 1, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double lo = 1e300, hi = 0.0;
      for (const auto& p : d.pairs) {
        lo = std::min(lo, triangle(p.birth, p.death, grid[i]));
        hi = std::max(hi, triangle(p.birth, p.death, grid[i]));
      }
      if (s.curve.values[i] < lo - 1e-12 || s.curve.values[i] > hi + 1e-12) o.fail("silhouette leaves tent bounds");
    }
  }
  if (o.pass) o.detail = "tent exact at 1000 points; nesting and silhouette bounds on 50 random diagrams";
  return o;
}

Outcome circleExperiment() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(2015);
  const auto x = sampleCircle(400, 1.0, {}, rng);
  const auto grid = makeGrid({{-1.6, 1.6}, {-1.7, 1.7}}, 0.065);
  const auto estimator = Estimator::kernelDensity(0.3);
  const auto diagram = gridDiag(x, estimator, grid, false);
  const auto band = bootstrapBand(x, estimator, grid, 100, 0.1, 2015);
  const auto split = significantFeatures(diagram, band.width);
  std::size_t h0 = 0, h1 = 0;
  for (const auto& p : split.significant) (p.dimension == 0 ? h0 : h1) += 1;
  const double elapsed = seconds(start);
  if (h0 != 1 || h1 != 1) {
    o.fail("significant H0 = " + std::to_string(h0) + ", H1 = " + std::to_string(h1) + " (expected 1 and 1)");
  }
  if (elapsed >= 120.0) o.fail("runtime " + fmt(elapsed) + " s exceeds 120 s");
  if (o.pass) {
    o.detail = "2650-point grid, band width " + fmt(band.width) + ": 1 significant H0, 1 significant H1 (" +
               fmt(elapsed) + " s)";
  }
  return o;
}

Outcome maxPersistenceExperiment() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(2016);
  auto x = sampleCircle(600, 1.0, {}, rng);
  x = concat(x, sampleCircle(1000, 1.5, {2.5, 2.5}, rng));
  x = concat(x, sampleBox(80, 2, -2.0, 5.0, rng));
  const auto grid = makeGrid({{-2, 5}, {-2, 5}}, 0.2);
  std::vector<double> params;
  for (int i = 0; i <= 10; ++i) params.push_back((10 + 5 * i) / 100.0);
  const auto result = maxPersistence(Estimator::kernelDensity(0.1), params, x, grid, false, 50, 0.1, 2016);
  std::vector<std::size_t> n;
  std::vector<double> s;
  for (const auto& e : result.entries) {
    n.push_back(e.significantCount);
    s.push_back(e.significantPersistence);
  }
  const std::size_t peak = *std::max_element(n.begin() + 1, n.end() - 1);
  if (!(n.front() < peak && n.back() < peak)) o.fail("N(h) is not smaller at both endpoints than at its interior max");
  for (int i = 0; i < 3; ++i) {
    if (!(s[static_cast<std::size_t>(i)] > 0)) o.fail("S(h) is zero at parameter " + fmt(params[static_cast<std::size_t>(i)]));
  }
  const double elapsed = seconds(start);
  if (elapsed >= 600.0) o.fail("runtime " + fmt(elapsed) + " s exceeds 600 s");
  std::string shape = "N = [";
  for (std::size_t i = 0; i < n.size(); ++i) shape += (i ? " " : "") + std::to_string(n[i]);
  shape += "]";
  o.detail = (o.pass ? shape : o.detail + "; " + shape) + " (" + fmt(elapsed) + " s)";
  return o;
}

bool isAncestor(const ClusterTree& tree, std::size_t ancestor, std::size_t node) {
  for (std::optional<std::size_t> cur = node; cur; cur = tree.branches[*cur].parent) {
    if (*cur == ancestor) return true;
  }
  return false;
}

PointCloud threeBlobs(std::uint64_t seed) {
  Rng rng(seed);
  auto x = sampleGaussian(300, {1, 5}, 0.8, rng);
  x = concat(x, sampleGaussian(300, {3.5, 5}, 0.8, rng));
  return concat(x, sampleGaussian(300, {6, 1}, 1.0, rng));
}

Outcome clusterTreeExperiment() {
  Outcome o;
  // Seed 1 is the CLI default. Without pruning, a few seeds yield an extra
  // singleton leaf (two isolated density peaks in one blob) or merge the two
  // close blobs, so the leaf-count distribution over 200 seeds is reported too.
  const auto tree = clusterTree(threeBlobs(1), 100, ClusterDensity::knn);
  if (tree.leafCount() != 3) o.fail("tree has " + std::to_string(tree.leafCount()) + " leaves (expected 3)");

  // Tree property: single root, acyclic parent links, children nested in parents.
  std::size_t roots = 0;
  for (const auto& b : tree.branches) {
    if (!b.parent) ++roots;
    if (!isAncestor(tree, tree.root, b.id)) o.fail("branch not below the root");
    for (std::size_t c : b.children) {
      const auto& child = tree.branches[c];
      if (child.parent != b.id) o.fail("child/parent links disagree");
      if (!std::includes(b.members.begin(), b.members.end(), child.members.begin(), child.members.end())) {
        o.fail("child members are not a subset of the parent's");
      }
      if (child.lambdaBirth != b.lambdaDeath) o.fail("child is not born where the parent ends");
    }
  }
  if (roots != 1) o.fail("expected one root");
  // Alpha monotonicity along every branch and from parent to child.
  for (const auto& b : tree.branches) {
    if (b.alphaBirth < b.alphaDeath) o.fail("alpha increases along a branch");
    if (b.lambdaBirth > b.lambdaDeath) o.fail("lambda decreases along a branch");
    if (b.parent && tree.branches[*b.parent].alphaDeath > b.alphaBirth) o.fail("alpha not monotone parent to child");
  }
  std::map<std::size_t, int> histogram;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) ++histogram[clusterTree(threeBlobs(seed), 100, ClusterDensity::knn).leafCount()];
  std::string spread;
  for (const auto& [leaves, count] : histogram) spread += (spread.empty() ? "" : ", ") + std::to_string(leaves) + ":" + std::to_string(count);
  if (o.pass) o.detail = "3 leaves from 900 points; invariants hold; leaf counts over seeds 1..200 {" + spread + "}";
  return o;
}

// Runs the CLI; returns the exit status and fills `output` with the file it wrote.
int runCli(const std::string& args, const std::filesystem::path& out, std::string& output) {
  const std::string command = std::string(TDA_CLI_PATH) + " " + args + " --out " + out.string() + " 2>/dev/null";
  const int status = std::system(command.c_str());
  std::ifstream file(out, std::ios::binary);
  output.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
  return status;
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("tda_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string circle = (dir / "circle.csv").string();
  const std::string blobs = (dir / "blobs.csv").string();
  std::string text;
  runCli("sample-circle --n 150 --seed 9", circle, text);
  {
    Rng rng(3);
    auto x = sampleGaussian(60, {0, 0}, 0.4, rng);
    x = concat(x, sampleGaussian(60, {3, 0}, 0.4, rng));
    std::ofstream file(blobs);
    io::writePointsCsv(file, x);
  }
  const std::string grid = " --lim -1.5,1.5,-1.5,1.5 --by 0.15";
  const std::vector<std::string> commands{
      "sample-circle --n 50 --r 2 --offset 3,3 --seed 17",
      "bootstrap-band --in " + circle + " --fn kde --h 0.3" + grid + " --B 20 --alpha 0.1 --seed 4",
      "bootstrap-band --in " + circle + " --fn dtm --m0 0.1" + grid + " --B 20 --alpha 0.1 --seed 4 --sublevel",
      "multip-bootstrap --in " + circle + " --n 6 --m 30 --maxscale 2 --tlen 100 --B 50 --alpha 0.05 --seed 8",
      "max-persistence --in " + circle + " --fn kde" + grid + " --params 0.2,0.3,0.4 --B 10 --seed 6",
      "cluster-tree --in " + blobs + " --k 10 --density knn --seed 1",
      "grid-diag --in " + circle + " --fn kde --h 0.3" + grid,
      "rips-diag --in " + circle + " --maxdim 1 --maxscale 0.6",
  };
  std::size_t compared = 0;
  for (const auto& command : commands) {
    for (const std::string format : {"csv", "json"}) {
      std::string first, second, threaded;
      const int a = runCli(command + " --format " + format, dir / "a.out", first);
      const int b = runCli(command + " --format " + format, dir / "b.out", second);
      const int c = runCli(command + " --format " + format + " --threads 3", dir / "c.out", threaded);
      if (a != 0 || b != 0 || c != 0) {
        o.fail("command failed: " + command);
        continue;
      }
      if (first.empty() || first != second) o.fail("repeat run differs: " + command + " (" + format + ")");
      if (first != threaded) o.fail("--threads changes output: " + command + " (" + format + ")");
      ++compared;
    }
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = std::to_string(compared) + " command/format pairs byte-identical across repeats and thread counts";
  return o;
}

Outcome multiplierExperiment() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(2018);
  auto x = sampleCircle(2000, 1.0, {}, rng);
  x = concat(x, sampleCircle(2000, 2.0, {3, 3}, rng));
  const auto tseq = linspace(0, 5, 500);
  const auto curves = subsampleLandscapes(x, 10, 80, 1, 5.0, 1, 1, tseq, 2018);
  const auto band = multipBootstrap(curves, 100, 0.05, 2018);
  if (!(band.width > 0)) o.fail("band width is not positive");
  for (std::size_t t = 0; t < tseq.size(); ++t) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[t];
    if (band.mean[t] != sum / static_cast<double>(curves.size())) o.fail("mean differs from the arithmetic mean");
  }
  // The radius-2 loop is born near 0 and dies near 2 sqrt 3; its tent covers [1.5, 2.5].
  double lowest = 1e300;
  for (std::size_t t = 0; t < tseq.size(); ++t) {
    if (tseq[t] >= 1.5 && tseq[t] <= 2.5) lowest = std::min(lowest, band.mean[t]);
  }
  if (!(lowest > 0)) o.fail("mean landscape is not positive on [1.5, 2.5]");
  const double elapsed = seconds(start);
  if (elapsed >= 120.0) o.fail("runtime " + fmt(elapsed) + " s exceeds 120 s");
  if (o.pass) {
    o.detail = "width " + fmt(band.width) + ", min mean on [1.5, 2.5] = " + fmt(lowest) + " (" + fmt(elapsed) + " s)";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "persistence matches rank oracle", persistenceOracle},
      {2, "unit-square Rips diagram", unitSquare},
      {3, "bottleneck stability", stability},
      {4, "metric oracles and axioms", metricOracles},
      {5, "estimator oracles", estimatorOracles},
      {6, "landscape and silhouette properties", summaries},
      {7, "circle: one significant H0 and H1", circleExperiment},
      {8, "max-persistence parameter profile", maxPersistenceExperiment},
      {9, "three-cluster tree", clusterTreeExperiment},
      {10, "determinism of stochastic commands", determinism},
      {11, "multiplier bootstrap of mean landscape", multiplierExperiment},
  };
  // Optional arguments select criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << outcome.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
