#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <nlohmann/json.hpp>

#ifndef TDA_CLI_PATH
#error "TDA_CLI_PATH must point at the command-line tool"
#endif

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tda_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  // Runs the tool with stderr discarded; captures stdout.
  static Result run(const std::string& args) {
    Result r;
    const std::string command = std::string(TDA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) return r;
    char buffer[4096];
    std::size_t got = 0;
    while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, got);
    const int status = ::pclose(pipe);
    r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  fs::path dir_;
};

const char* const kSquare = "x1,x2\n0,0\n1,0\n0,1\n1,1\n";

}  // namespace

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
  EXPECT_EQ(run("sample-circle").status, 2);                       // missing --n
  EXPECT_EQ(run("sample-circle --n 5 --bogus 1").status, 2);       // unknown option
  EXPECT_EQ(run("sample-circle --n 5 --format xml").status, 2);    // bad choice
  EXPECT_EQ(run("estimate --fn kde --lim 0,1,0,1 --by 0.5").status, 2);  // no --in
  write("sq.csv", kSquare);
  EXPECT_EQ(run("estimate --in " + path("sq.csv") + " --fn kde --lim 0,1,0,1 --by 0.5").status, 2);  // no --h
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("rips-diag --help").status, 0);
}

TEST_F(Cli, ValidationErrorsExitThree) {
  EXPECT_EQ(run("rips-diag --in " + path("missing.csv") + " --maxscale 1").status, 3);
  write("bad.csv", "x1,x2\n0,0\n1,abc\n");
  EXPECT_EQ(run("rips-diag --in " + path("bad.csv") + " --maxscale 1").status, 3);
  write("sq.csv", kSquare);
  EXPECT_EQ(run("rips-diag --in " + path("sq.csv") + " --maxscale -1").status, 3);
  EXPECT_EQ(run("estimate --in " + path("sq.csv") + " --fn kde --h -0.3 --lim 0,1,0,1 --by 0.5").status, 3);
  EXPECT_EQ(run("estimate --in " + path("sq.csv") + " --fn knn --k 9 --lim 0,1,0,1 --by 0.5").status, 3);
  write("broken.json", "{\"orientation\":");
  EXPECT_EQ(run("distance " + path("broken.json") + " " + path("broken.json")).status, 3);
}

TEST_F(Cli, NumericDomainErrorsExitFour) {
  write("a.csv", "dimension,birth,death,essential\n0,0,2,1\n");
  write("b.csv", "dimension,birth,death,essential\n0,0,1,0\n");
  EXPECT_EQ(run("distance " + path("a.csv") + " " + path("b.csv") + " --metric bottleneck").status, 4);
  write("dup.csv", "x1,x2\n0,0\n0,0\n0,0\n1,1\n");
  EXPECT_EQ(run("estimate --in " + path("dup.csv") + " --fn knn --k 2 --lim 0,1,0,1 --by 0.5").status, 4);
}

TEST_F(Cli, RipsDiagramCsv) {
  write("sq.csv", kSquare);
  const auto r = run("rips-diag --in " + path("sq.csv") + " --maxdim 1 --maxscale 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out,
            "dimension,birth,death,essential\n"
            "0,0,1,0\n0,0,1,0\n0,0,1,0\n0,0,2,1\n1,1,1.4142135623730951,0\n");
  const auto twist = run("rips-diag --in " + path("sq.csv") + " --maxdim 1 --maxscale 2 --strategy standard");
  EXPECT_EQ(twist.out, r.out);
}

TEST_F(Cli, DumpFiltration) {
  write("two.csv", "x1\n0\n1.5\n");
  const auto r = run("rips-diag --in " + path("two.csv") + " --maxdim 0 --maxscale 2 --dump-filtration");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0;0\n0;1\n1.5;0,1\n");
  write("field.csv", "x1,value\n0,1\n1,0\n");
  const auto g = run("grid-diag --field " + path("field.csv") + " --sublevel --dump-filtration");
  ASSERT_EQ(g.status, 0);
  EXPECT_EQ(g.out, "0;1\n1;0\n1;0,1\n");
}

TEST_F(Cli, DistancePrintsSixDecimals) {
  write("a.csv", "dimension,birth,death,essential\n1,0,1,0\n");
  write("b.csv", "dimension,birth,death,essential\n1,0,1.3,0\n");
  const auto r = run("distance " + path("a.csv") + " " + path("b.csv") + " --metric bottleneck --dim 1");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0.300000\n");
  const auto w = run("distance --in " + path("a.csv") + " --in " + path("b.csv") + " --metric wasserstein --p 2 --dim 1");
  EXPECT_EQ(w.out, "0.300000\n");
  const auto empty = run("distance " + path("a.csv") + " " + path("b.csv") + " --dim 0");
  EXPECT_EQ(empty.out, "0.000000\n");
}

TEST_F(Cli, JsonEmbedsManifestAndWritesInfinityAsText) {
  write("two.csv", "x1\n0\n1.5\n");
  const auto r = run("rips-diag --in " + path("two.csv") + " --maxdim 0 --maxscale inf --format json --seed 7");
  ASSERT_EQ(r.status, 0);
  const auto j = Json::parse(r.out);
  const auto& m = j.at("manifest");
  EXPECT_EQ(m.at("subcommand"), "rips-diag");
  EXPECT_EQ(m.at("seed"), 7);
  EXPECT_EQ(m.at("params").at("maxdim"), 0);
  EXPECT_EQ(m.at("params").at("maxscale"), "inf");
  EXPECT_FALSE(m.at("params").contains("format"));
  ASSERT_EQ(m.at("inputs").size(), 1u);
  EXPECT_EQ(m.at("inputs")[0].at("sha256").get<std::string>().size(), 64u);
  EXPECT_FALSE(m.at("version").get<std::string>().empty());
  EXPECT_EQ(j.at("diagram").at("pairs")[1].at("death"), "inf");
}

TEST_F(Cli, DigestIdentifiesInputContent) {
  write("a.csv", "x1\n0\n1\n");
  write("b.csv", "x1\n0\n1\n");
  write("c.csv", "x1\n0\n2\n");
  auto digest = [&](const std::string& f) {
    return Json::parse(run("rips-diag --in " + path(f) + " --maxscale 1 --format json").out)["manifest"]["inputs"][0]["sha256"];
  };
  EXPECT_EQ(digest("a.csv"), digest("b.csv"));
  EXPECT_NE(digest("a.csv"), digest("c.csv"));
  // Agrees with the system sha256sum when available.
  std::FILE* p = ::popen(("sha256sum " + path("a.csv")).c_str(), "r");
  if (p) {
    char buf[65] = {};
    if (std::fread(buf, 1, 64, p) == 64) {
      EXPECT_EQ(digest("a.csv"), std::string(buf));
    }
    ::pclose(p);
  }
}

TEST_F(Cli, OutFileAndStdinAgree) {
  write("sq.csv", kSquare);
  ASSERT_EQ(run("rips-diag --in " + path("sq.csv") + " --maxscale 2 --out " + path("d.csv")).status, 0);
  const auto piped = run("rips-diag --in - --maxscale 2 < " + path("sq.csv"));
  EXPECT_EQ(read("d.csv"), piped.out);
}

TEST_F(Cli, SeededCommandsAreByteIdentical) {
  const auto a = run("sample-circle --n 40 --seed 3");
  const auto b = run("sample-circle --n 40 --seed 3");
  const auto c = run("sample-circle --n 40 --seed 4");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  write("c.csv", a.out);
  const std::string band = "bootstrap-band --in " + path("c.csv") + " --fn dtm --m0 0.2 --lim -1,1,-1,1 --by 0.25 --B 15 --seed 2";
  EXPECT_EQ(run(band + " --format json").out, run(band + " --format json --threads 4").out);
  EXPECT_NE(run(band + " --format json").out, run(band + " --format json --seed 9").out);
}

TEST_F(Cli, LandscapeAndSilhouetteCurves) {
  write("d.csv", "dimension,birth,death,essential\n1,0,2,0\n");
  const auto r = run("landscape --in " + path("d.csv") + " --dim 1 --tmin 0 --tmax 2 --tlen 5");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "t,value\n0,0\n0.5,0.5\n1,1\n1.5,0.5\n2,0\n");
  const auto s = run("silhouette --in " + path("d.csv") + " --dim 1 --p 1 --tmin 0 --tmax 2 --tlen 5");
  EXPECT_EQ(s.out, r.out);
}

TEST_F(Cli, PlotsRenderEveryKind) {
  write("sq.csv", kSquare);
  ASSERT_EQ(run("rips-diag --in " + path("sq.csv") + " --maxscale 2 --format json --out " + path("d.json")).status, 0);
  for (const std::string kind : {"diagram", "barcode", "rotated"}) {
    ASSERT_EQ(run("plot --in " + path("d.json") + " --kind " + kind + " --out " + path(kind + ".svg")).status, 0) << kind;
    EXPECT_EQ(read(kind + ".svg").rfind("<svg", 0), 0u) << kind;
  }
  for (const std::string kind : {"landscape", "silhouette"}) {
    ASSERT_EQ(run(kind + " --in " + path("d.json") + " --dim 1 --format json --out " + path(kind + ".json")).status, 0);
    ASSERT_EQ(run("plot --in " + path(kind + ".json") + " --kind " + kind + " --out " + path(kind + ".svg")).status, 0);
    EXPECT_EQ(read(kind + ".svg").rfind("<svg", 0), 0u) << kind;
  }
  ASSERT_EQ(run("cluster-tree --in " + path("sq.csv") + " --k 2 --format json --out " + path("t.json")).status, 0);
  EXPECT_EQ(run("plot --in " + path("t.json") + " --kind dendrogram --type alpha --out " + path("t.svg")).status, 0);
  EXPECT_EQ(run("plot --in " + path("sq.csv") + " --kind nonsense --out " + path("x.svg")).status, 2);
}
