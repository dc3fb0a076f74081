#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "beliefapprox/cli.hpp"
#include "beliefapprox/io.hpp"

using namespace beliefapprox;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("beliefapprox_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = (path_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kMix =
    R"({"type": "mixture", "weights": [0.5, 0.5], "components": [{"mean": -3, "variance": 1}, {"mean": 3, "variance": 1}]})";

} // namespace

TEST(SpecFiles, RoundTripEveryKind) {
  const std::vector<Density> ds{
      Gaussian1D(0.1, 2.0 / 3.0),
      Mixture1D({0.3, 0.7}, {Gaussian1D(-1.0, 0.5), Gaussian1D(2.0, 1.0 / 7.0)}),
      Categorical({0.1, 0.9}, {"a", "b"}),
      discretize(Gaussian1D(0.3, 1.1), -9.0, 9.0, 301),
      pushforward_affine(discretize(Gaussian1D(0.0, 1.0), -9.0, 9.0, 101), AffineMap(std::sqrt(2.0), 0.1)),
  };
  for (const auto& d : ds) {
    const Density back = io::parse_density(io::Json::parse(io::dump(io::to_json(d))));
    ASSERT_EQ(back.index(), d.index());
    if (std::holds_alternative<Categorical>(d)) {
      EXPECT_EQ(std::get<Categorical>(back).weights()[1], std::get<Categorical>(d).weights()[1]);
      continue;
    }
    for (double x : {-2.0, -0.33, 0.0, 0.7, 1.9}) EXPECT_NEAR(pdf(back, x), pdf(d, x), 1e-15) << "x = " << x;
  }
}

TEST(SpecFiles, ErrorsNameTheField) {
  auto message = [](const char* text) {
    try {
      io::parse_density(io::Json::parse(text));
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"type": "gaussian", "mean": 0})").find("'variance'"), std::string::npos);
  EXPECT_NE(message(R"({"type": "gaussian", "mean": 0, "variance": -1})").find("'variance'"), std::string::npos);
  EXPECT_NE(message(R"({"type": "categorical", "weights": [0.5, 0.6]})").find("'weights'"), std::string::npos);
  EXPECT_NE(message(R"({"type": "grid", "lo": 0, "hi": 1, "n": 3, "values": [1, 1]})").find("'values'"), std::string::npos);
  EXPECT_NE(message(R"({"type": "poisson"})").find("'type'"), std::string::npos);
}

TEST(Dump, SeventeenDigitsAndNonFiniteStrings) {
  io::Json j;
  j["x"] = 0.1;
  j["inf"] = std::numeric_limits<double>::infinity();
  const auto text = io::dump(j, -1);
  EXPECT_EQ(text, R"({"x":0.10000000000000001,"inf":"inf"})");
}

TEST(Cli, DivergenceOfMomentMatchBeatsPerturbations) {
  TempDir dir;
  const auto p = dir.write("mix.json", kMix);
  auto kl_to = [&](double mean, double var) {
    const auto q = dir.write("q.json", R"({"type": "gaussian", "mean": )" + io::format_double(mean) +
                                           R"(, "variance": )" + io::format_double(var) + "}");
    const auto r = run_cli({"divergence", "--p", p, "--q", q});
    EXPECT_EQ(r.code, 0) << r.err;
    return io::Json::parse(r.out)["kl_pq"].get<double>();
  };
  const double best = kl_to(0.0, 10.0);
  EXPECT_NEAR(best, 0.46199461346794508, 1e-11);
  for (auto [m, v] : {std::pair{0.1, 10.0}, {-0.1, 10.0}, {0.0, 9.5}, {0.0, 10.5}}) EXPECT_LT(best, kl_to(m, v));
}

TEST(Cli, BitsFlagDividesByLn2) {
  TempDir dir;
  const auto p = dir.write("p.json", R"({"type": "categorical", "weights": [0.5, 0.5]})");
  const auto q = dir.write("q.json", R"({"type": "categorical", "weights": [0.25, 0.75]})");
  const auto r = run_cli({"divergence", "--p", p, "--q", q, "--bits"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(io::Json::parse(r.out)["kl_pq"].get<double>(), 0.14384103622589045 / std::log(2.0), 1e-15);
}

TEST(Cli, EstimatePrintsOneNumber) {
  TempDir dir;
  const auto p = dir.write("mix.json", kMix);
  const auto r = run_cli({"estimate", "--spec", p, "--loss", "mean"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\n");
}

TEST(Cli, FitReportIsJson) {
  TempDir dir;
  const auto p = dir.write("mix.json", kMix);
  const auto r = run_cli({"fit", "--target", p, "--family", "gaussian", "--direction", "infer", "--init", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::Json::parse(r.out);
  EXPECT_EQ(j["direction"], "inference-kl");
  EXPECT_NEAR(j["fitted"]["mean"].get<double>(), 2.984305987097165, 1e-6);
  EXPECT_EQ(j["multistart_results"].size(), 1u);
}

TEST(Cli, Figure1WritesCsvAndSidecar) {
  TempDir dir;
  const auto csv = dir.file("fig1.csv");
  const auto r = run_cli({"figure1", "--out", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(slurp(csv));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "s,p,q_approx,q_infer");
  double prev = -std::numeric_limits<double>::infinity();
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3);
    const double s = std::stod(line.substr(0, line.find(',')));
    EXPECT_GT(s, prev);
    prev = s;
    ++rows;
  }
  EXPECT_EQ(rows, 401u);
  const auto side = io::Json::parse(slurp(dir.file("fig1.json")));
  EXPECT_NEAR(side["approximation"]["variance"].get<double>(), 10.0, 1e-5);
}

TEST(Cli, IdenticalInvocationsGiveIdenticalBytes) {
  TempDir dir;
  run_cli({"figure1", "--out", dir.file("a.csv")});
  run_cli({"figure1", "--out", dir.file("b.csv")});
  EXPECT_EQ(slurp(dir.file("a.csv")), slurp(dir.file("b.csv")));
  EXPECT_EQ(slurp(dir.file("a.json")), slurp(dir.file("b.json")));
}

TEST(Cli, VerifyAllPasses) {
  TempDir dir;
  const auto report = dir.file("report.json");
  const auto r = run_cli({"verify", "--suite", "all", "--report", report});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("all suites passed"), std::string::npos);
  EXPECT_TRUE(io::Json::parse(slurp(report))["passed"].get<bool>());
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run_cli({"bogus"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"divergence", "--p", dir.file("missing.json"), "--q", dir.file("missing.json")}).code, 1);
  const auto bad = dir.write("bad.json", R"({"type": "gaussian", "mean": 0, "variance": 0})");
  const auto r = run_cli({"estimate", "--spec", bad, "--loss", "mode"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'variance'"), std::string::npos);
  const auto zero = dir.write("zero.json", R"({"type": "categorical", "weights": [0, 1]})");
  EXPECT_EQ(run_cli({"fit", "--target", zero, "--family", "categorical", "--direction", "infer"}).code, 2);
  const auto p = dir.write("p.json", R"({"type": "categorical", "weights": [0.5, 0.5]})");
  const auto g = dir.write("g.json", R"({"type": "gaussian", "mean": 0, "variance": 1})");
  EXPECT_EQ(run_cli({"divergence", "--p", p, "--q", g}).code, 1);
}
