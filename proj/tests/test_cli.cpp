#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cstlab.hpp"
#include "cstlab/cli.hpp"

using namespace cstlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cstlab-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

RunConfig parse_text(const std::string& text, const std::map<std::string, std::string>& overrides = {}) {
  std::istringstream is(text);
  return parse_config(is, overrides);
}

std::string config_error_message(const std::string& text) {
  try {
    parse_text(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    return e.what();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return {};
}

}  // namespace

TEST(Config, DefaultsFromEmptyInput) {
  const RunConfig c = parse_text("");
  EXPECT_EQ(c.curve1, kDefaultCurve1);
  EXPECT_EQ(c.curve2, kDefaultCurve2);
  EXPECT_EQ(c.t_list, std::vector<std::int64_t>{1});
  EXPECT_EQ(c.m_list, std::vector<std::uint64_t>{1});
  ASSERT_EQ(c.intervals.size(), 1u);
  EXPECT_EQ(c.intervals[0].lo, -1.0);
  EXPECT_EQ(c.m_A, 1u);
  EXPECT_EQ(c.cutoff_L, 10000u);
  EXPECT_EQ(c.format, ReportFormat::csv);
}

TEST(Config, FullFileAndOverrides) {
  const std::string text =
      "[curves]\ncurve1 = 0,0,0,-1,0\ncurve2 = 0,0,0,0,1\n"
      "[sweep]\nx_max = 5000\nthreads = 3\n"
      "[experiment]\nt = 1,-2\nm = 2,3\nintervals = -0.25,0.25; theorem4-window\nm_A = 6\n"
      "[run]\nformat = json\nseed = 17\n";
  const RunConfig c = parse_text(text, {{"sweep.x_max", "7000"}});
  EXPECT_EQ(c.x_max, 7000u);
  EXPECT_EQ(c.threads, 3u);
  EXPECT_EQ(c.t_list, (std::vector<std::int64_t>{1, -2}));
  EXPECT_EQ(c.m_list, (std::vector<std::uint64_t>{2, 3}));
  EXPECT_TRUE(c.theorem4_window);
  EXPECT_EQ(c.intervals.size(), 1u);
  EXPECT_EQ(c.m_A, 6u);
  EXPECT_EQ(c.seed, 17u);
  EXPECT_EQ(c.format, ReportFormat::json);
}

TEST(Config, RejectsTraceZero) {
  const auto msg = config_error_message("[experiment]\nt = 1,0\n");
  EXPECT_NE(msg.find("t ∈ ℤ∖{0}"), std::string::npos) << msg;
  EXPECT_NE(msg.find("experiment.t"), std::string::npos) << msg;
}

TEST(Config, RejectsBadIntervals) {
  EXPECT_NE(config_error_message("[experiment]\nintervals = 0.5,0.2\n").find("experiment.intervals"), std::string::npos);
  EXPECT_NE(config_error_message("[experiment]\nintervals = 0.1,0.2\n").find("experiment.intervals"), std::string::npos);
  EXPECT_NE(config_error_message("[experiment]\nintervals = -2,0.2\n").find("experiment.intervals"), std::string::npos);
  EXPECT_NE(config_error_message("[experiment]\nintervals = 0.1\n").find("experiment.intervals"), std::string::npos);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_NE(config_error_message("[sweep]\nxmax = 10\n").find("sweep.xmax"), std::string::npos);
  EXPECT_NE(config_error_message("[experiment]\nm = 0\n").find("experiment.m"), std::string::npos);
  EXPECT_NE(config_error_message("[run]\nformat = xml\n").find("run.format"), std::string::npos);
  EXPECT_NE(config_error_message("[sweep]\nthreads = many\n").find("sweep.threads"), std::string::npos);
  EXPECT_NE(config_error_message("[curves]\ncurve1 = 0,0,1,-1\n").find("curves.curve1"), std::string::npos);
  // y^2 = x^3 has zero discriminant.
  EXPECT_NE(config_error_message("[curves]\ncurve1 = 0,0,0,0,0\n").find("curves.curve1"), std::string::npos);
  EXPECT_NE(config_error_message("[curves]\ncurve2 = 0,0,1,-1,0\n").find("curves.curve2"), std::string::npos);
}

TEST(Config, SampleFileParses) {
  const RunConfig c = parse_config_file(CSTLAB_SAMPLE_CONFIG);
  EXPECT_EQ(c.x_max, 10000000u);
  EXPECT_EQ(c.t_list, (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(c.m_list.size(), 4u);
  EXPECT_EQ(c.intervals.size(), 2u);
}

TEST(Config, MissingFileIsResourceError) {
  try {
    parse_config_file("/nonexistent/cstlab.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/cstlab.ini"), std::string::npos);
  }
}

TEST(Cli, HelpAndUsageErrors) {
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("verify"), std::string::npos);
  const auto none = run({});
  EXPECT_EQ(none.code, 1);
  const auto bogus = run({"frobnicate"});
  EXPECT_EQ(bogus.code, 1);
  EXPECT_TRUE(nlohmann::json::accept(bogus.err));
}

TEST(Cli, ValidationErrorIsJsonOnStderr) {
  const auto r = run({"ffactor", "--t", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"]["kind"], "validation");
  EXPECT_EQ(j["exit_code"], 1);
  EXPECT_NE(j["error"]["message"].get<std::string>().find("t ∈ ℤ∖{0}"), std::string::npos);
}

TEST(Cli, DensityTable) {
  const auto r = run({"density", "--grid", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "s,phi_closed,phi_quadrature,phi_convolution");
  int rows = 0;
  while (std::getline(is, line)) {
    const auto cells = detail::csv_split(line, 1);
    ASSERT_EQ(cells.size(), 4u);
    const double s = std::stod(cells[0]);
    EXPECT_NEAR(s, -1.0 + 0.2 * (rows + 1), 1e-15);
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(std::stod(cells[k]), phi_closed(s), 1e-6);
    ++rows;
  }
  EXPECT_EQ(rows, 9);
}

TEST(Cli, FfactorJson) {
  const auto r = run({"ffactor", "--t", "1", "--cutoff", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["t"], 1);
  EXPECT_EQ(j["cutoff"], 100);
  EXPECT_TRUE(j.contains("tail_bound"));
  ASSERT_EQ(j["factors"].size(), 25u);
  EXPECT_EQ(j["factors"][0]["ell"], 2);
  EXPECT_EQ(j["factors"][0]["numerator"], "8");
  EXPECT_EQ(j["factors"][0]["denominator"], "9");
  EXPECT_NEAR(j["value"].get<double>(), euler_product_F(1, 1, 100).value_double(), 1e-15);

  const auto many = run({"ffactor", "--t", "1,2", "--cutoff", "50"});
  ASSERT_EQ(many.code, 0);
  EXPECT_EQ(nlohmann::json::parse(many.out).size(), 2u);
}

TEST(Cli, MonteCarloJson) {
  const auto r = run({"mc", "--draws", "20000", "--bins", "20", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["draws"], 20000);
  EXPECT_EQ(j["chi_square"]["dof"], 19);
  EXPECT_NEAR(j["second_moment"].get<double>(), 1.0, 0.05);
  EXPECT_EQ(run({"mc", "--draws", "20000", "--bins", "20", "--seed", "4"}).out, r.out);
}

TEST_F(TempDir, SweepIsReproducible) {
  const auto a = path("a.csv"), b = path("b.csv");
  ASSERT_EQ(run({"sweep", "--xmax", "20000", "--cache", a, "--threads", "1"}).code, 0);
  ASSERT_EQ(run({"sweep", "--xmax", "20000", "--cache", b, "--threads", "4", "--crossover", "100"}).code, 0);
  const auto ta = slurp(a);
  EXPECT_FALSE(ta.empty());
  // Only the crossover metadata line may differ.
  auto strip = [](const std::string& s) {
    std::istringstream is(s);
    std::string out, line;
    while (std::getline(is, line))
      if (line.find("crossover=") == std::string::npos) out += line + "\n";
    return out;
  };
  EXPECT_EQ(strip(ta), strip(slurp(b)));
  ASSERT_EQ(run({"sweep", "--xmax", "20000", "--cache", b, "--threads", "1"}).code, 0);
  EXPECT_EQ(ta, slurp(b));
}

TEST_F(TempDir, IsogenyWarning) {
  const auto r = run({"sweep", "--xmax", "1000", "--cache", path("c.csv"), "--curve2", "0,-1,1,0,0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.err.empty()) << r.err;
  // 11a1 and 11a3 share every a_p.
  const auto w = run({"sweep", "--xmax", "1000", "--cache", path("d.csv"), "--curve1", "0,-1,1,-10,-20", "--curve2",
                      "0,-1,1,0,0"});
  EXPECT_EQ(w.code, 0);
  EXPECT_NE(w.err.find("isogenous"), std::string::npos);
}

TEST_F(TempDir, LangTrotterAndCoverage) {
  const auto cache = path("t.csv");
  ASSERT_EQ(run({"sweep", "--xmax", "20000", "--cache", cache}).code, 0);
  const auto r = run({"lt", "--xmax", "20000", "--cache", cache, "--t", "1,-1", "--cutoff", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x,t,pi_A,prediction,ratio,F,F_tail_bound");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 2 * 4);  // 100, 1000, 10000, 20000 for each t

  const auto beyond = run({"lt", "--xmax", "50000", "--cache", cache});
  EXPECT_EQ(beyond.code, 1);
  const auto msg = nlohmann::json::parse(beyond.err)["error"]["message"].get<std::string>();
  EXPECT_NE(msg.find("max p = 19997"), std::string::npos) << msg;
  EXPECT_NE(msg.find(cache), std::string::npos) << msg;

  const auto wrong = run({"lt", "--xmax", "20000", "--cache", cache, "--curve2", "0,0,0,0,1"});
  EXPECT_EQ(wrong.code, 1);
  EXPECT_NE(wrong.err.find("curves.curve2"), std::string::npos);

  EXPECT_EQ(run({"lt", "--xmax", "1000", "--cache", path("missing.csv")}).code, 2);
}

TEST_F(TempDir, CstReportFromConfigWithFlagOverride) {
  const auto cache = path("t.csv"), ini = path("run.ini"), out = path("report.json");
  ASSERT_EQ(run({"sweep", "--xmax", "30000", "--cache", cache}).code, 0);
  std::ofstream(ini) << "[sweep]\nx_max = 1000000\ncache = " << cache
                     << "\n[experiment]\nt = 1\nm = 1,2\nintervals = -0.25,0.25; -1,1\n[run]\nformat = csv\n";
  // The file asks for 1e6, beyond the cache; the flag wins.
  EXPECT_EQ(run({"cst", "--config", ini}).code, 1);
  const auto r = run({"cst", "--config", ini, "--xmax", "30000", "--format", "json", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream is(out);
  const auto reports = report_parse(is, ReportFormat::json);
  ASSERT_EQ(reports.size(), 4u);
  EXPECT_EQ(reports[0].query.m, 1u);
  EXPECT_EQ(reports[2].query.m, 2u);
  EXPECT_EQ(reports[1].query.interval.lo, -1.0);
  EXPECT_NE(reports[0].notes.find("m_A=1"), std::string::npos);
  EXPECT_EQ(reports[1].raw_count, reports[1].pi_x - 2);  // bad primes 37 and 43

  const auto csv = run({"cst", "--config", ini, "--xmax", "30000"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), kReportCsvHeader);
}

TEST_F(TempDir, TheoremWindowInterval) {
  const auto cache = path("t.csv");
  ASSERT_EQ(run({"sweep", "--xmax", "100000", "--cache", cache}).code, 0);
  // x = 1e5: |t| x^{1/4} ~ 17.8 < 20 < sqrt(x) / log x ~ 27.5.
  const auto r = run({"cst", "--xmax", "100000", "--cache", cache, "--m", "20", "--interval", "theorem4-window",
                      "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_TRUE(j[0]["query"]["interval_open"].get<bool>());
  const auto bad = run({"cst", "--xmax", "100000", "--cache", cache, "--m", "3", "--interval", "theorem4-window"});
  EXPECT_EQ(bad.code, 1);
}

TEST_F(TempDir, UnwritableOutputIsResourceError) {
  const auto r = run({"density", "--grid", "3", "--out", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"]["kind"], "resource");
}

TEST(Cli, VerifyPasses) {
  const auto r = run({"verify"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("verify: all checks passed"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
