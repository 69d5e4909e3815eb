#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "commands.hpp"

namespace fs = std::filesystem;
using namespace pstrack;
using pstrack::xprec::dd_real;
using pstrack::xprec::qd_real;

namespace {

struct cli_run {
  int code = -1;
  std::string out;
  std::string err;
};

cli_run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  cli_run r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("pstrack_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  cli::run_record record(const std::string& p) const {
    return cli::run_record_from_json(nlohmann::ordered_json::parse(slurp(p)));
  }

  std::string sqrt_system() const { return write("sqrt.txt", "n 1 d 1\nx0^2 - 1 + t;\n"); }
  std::string unit_start() const { return write("one.txt", "n 1\n(1,0)\n"); }

 private:
  fs::path dir_;
};

}  // namespace

TEST(CliGenerate, CyclicFourMatchesGenerator) {
  const auto r = run({"generate", "cyclic", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_system<dd_real>(r.out), generate_cyclic<dd_real>(4));
}

TEST(CliGenerate, RandomBenchmarkShapeIsDeterministic) {
  const std::vector<std::string> args{"generate", "random", "--n", "64", "--terms", "64", "--maxexp", "8", "--seed", "1"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto sys = parse_system<dd_real>(a.out);
  EXPECT_EQ(sys.variables(), 64u);
  ASSERT_EQ(sys.size(), 64u);
  for (const auto& p : sys.polynomials()) EXPECT_EQ(p.size(), 64u);
  EXPECT_LE(sys.max_exponent(), 8u);
  EXPECT_EQ(sys, generate_random<dd_real>(64, 64, 8, 1));
  EXPECT_NE(run({"generate", "random", "--n", "64", "--terms", "64", "--maxexp", "8", "--seed", "2"}).out, a.out);
}

TEST_F(CliFiles, NewtonHomotopyAddsOneTermPerPolynomial) {
  const auto in = write("c3.txt", run({"generate", "cyclic", "--n", "3"}).out);
  const auto r = run({"generate", "newton-homotopy", "--in", in});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto hom = parse_system<dd_real>(r.out);
  const auto base = generate_cyclic<dd_real>(3);
  ASSERT_EQ(hom.size(), base.size());
  for (std::size_t i = 0; i < hom.size(); ++i) EXPECT_EQ(hom[i].size(), base[i].size() + 1);
  EXPECT_EQ(hom, make_newton_homotopy(base));
  EXPECT_EQ(run({"generate", "newton-homotopy", "--in", write("h.txt", r.out)}).code, cli::exit_usage);
}

TEST_F(CliFiles, RandomPointOutIsARoot) {
  const auto r = run({"--precision", "qd", "generate", "random", "--n", "3", "--terms", "4", "--maxexp", "3", "--seed",
                      "7", "--point-out", path("x0.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto sys = parse_system<qd_real>(r.out);
  const auto x0 = parse_point<qd_real>(slurp(path("x0.txt")));
  for (const auto& v : evaluate_at(sys, std::span<const xprec::xcomplex<qd_real>>(x0)))
    EXPECT_LT(abs(v).to_double(), 1e-60);
}

TEST_F(CliFiles, CyclicPointOutIsARoot) {
  const auto r = run({"--precision", "dd", "generate", "cyclic", "--n", "5", "--point-out", path("x0.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto x0 = parse_point<dd_real>(slurp(path("x0.txt")));
  for (const auto& v : evaluate_at(parse_system<dd_real>(r.out), std::span<const xprec::xcomplex<dd_real>>(x0)))
    EXPECT_LT(abs(v).to_double(), 1e-14);
}

TEST(CliGenerate, BadParametersAreUsageErrors) {
  EXPECT_EQ(run({"generate", "cyclic", "--n", "1"}).code, cli::exit_usage);
  EXPECT_EQ(run({"generate", "random", "--n", "2", "--terms", "0"}).code, cli::exit_usage);
  EXPECT_EQ(run({"generate", "random", "--n", "2", "--maxexp", "0"}).code, cli::exit_usage);
  EXPECT_EQ(run({"generate", "newton-homotopy", "--in", "/nonexistent/file.txt"}).code, cli::exit_usage);
  EXPECT_EQ(run({"generate"}).code, cli::exit_usage);
  EXPECT_EQ(run({"--precision", "hex", "generate", "cyclic", "--n", "3"}).code, cli::exit_usage);
}

TEST_F(CliFiles, LinearHomotopyTakesOneStep) {
  const auto sys = write("lin.txt", "n 1 d 1\nx0 - 1 + t;\n");
  const auto r = run({"track", "--system", sys, "--start", unit_start(), "--out", path("run.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rec = record(path("run.json"));
  EXPECT_EQ(rec.status, "success");
  EXPECT_EQ(rec.exit_code, 0);
  ASSERT_EQ(rec.steps.size(), 1u);
  EXPECT_EQ(rec.steps[0].binding, "target");
  EXPECT_EQ(xprec::parse_real<dd_real>(rec.t_final), dd_real(1.0));
  ASSERT_EQ(rec.point.size(), 1u);
  EXPECT_EQ(xprec::parse_real<dd_real>(rec.point[0].first), dd_real(0.0));
}

TEST_F(CliFiles, SqrtPathEndpointAtThreeQuarters) {
  const auto r = run({"--precision", "dd", "--degree", "8", "--threads", "4", "--target", "0.75", "track", "--system",
                      sqrt_system(), "--start", unit_start(), "--out", path("run.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rec = record(path("run.json"));
  EXPECT_EQ(rec.config.precision, "dd");
  EXPECT_EQ(rec.config.degree, 8u);
  EXPECT_EQ(rec.config.target, "0.75");
  EXPECT_EQ(rec.config.pade_numerator, 4u);
  const dd_real x = xprec::parse_real<dd_real>(rec.point.at(0).first);
  EXPECT_LT(std::abs((x - dd_real(0.5)).to_double()), 1e-20);
  EXPECT_EQ(xprec::parse_real<dd_real>(rec.t_final), xprec::parse_real<dd_real>("0.75"));
  EXPECT_LT(xprec::parse_real<dd_real>(rec.residual).to_double(), 1e-25);
  for (const auto& [stage, seconds] : rec.seconds) EXPECT_GE(seconds, 0.0) << stage;
}

TEST_F(CliFiles, MissingStartFileIsUsageError) {
  const auto r = run({"track", "--system", sqrt_system(), "--start", path("absent.txt")});
  EXPECT_EQ(r.code, cli::exit_usage);
  EXPECT_NE(r.err.find("start point"), std::string::npos);
  EXPECT_EQ(run({"track", "--system", sqrt_system()}).code, cli::exit_usage);
}

TEST_F(CliFiles, MalformedInputsAreUsageErrors) {
  const auto bad = write("bad.txt", "n 1 d 1\nx0^2 - * 1;\n");
  EXPECT_EQ(run({"track", "--system", bad, "--start", unit_start()}).code, cli::exit_usage);
  const auto two = write("two.txt", "n 2\n(1,0)\n(1,0)\n");
  EXPECT_EQ(run({"track", "--system", sqrt_system(), "--start", two}).code, cli::exit_usage);
  for (const std::vector<std::string> flags :
       {std::vector<std::string>{"--pade", "4"}, {"--pade", "5,5"}, {"--pade", "a,b"}, {"--beta", "x"},
        {"--target", "-1"}, {"--minstep", "0"}, {"--threads", "1,2"}, {"--threads", "0"}}) {
    auto args = flags;
    for (const auto& a : {"track", "--system", "", "--start", ""}) args.push_back(a);
    args[args.size() - 3] = sqrt_system();
    args.back() = unit_start();
    EXPECT_EQ(run(args).code, cli::exit_usage) << flags[0] << " " << flags[1];
  }
}

TEST_F(CliFiles, TrackerFailuresMapToExitCodes) {
  const auto c4 = write("c4.txt", run({"generate", "newton-homotopy", "--in", write("c.txt", run({"generate", "cyclic", "--n", "4"}).out)}).out);
  const auto x0 = write("x0.txt", "n 4\n(1,0)\n(-1,0)\n(-1,0)\n(1,0)\n");
  auto r = run({"--precision", "qd", "--target", "0.5", "track", "--system", c4, "--start", x0, "--out", path("c4.json")});
  EXPECT_EQ(r.code, cli::exit_singular_jacobian);
  EXPECT_EQ(record(path("c4.json")).status, "singular-jacobian");

  r = run({"--target", "2", "track", "--system", sqrt_system(), "--start", unit_start(), "--out", path("far.json")});
  EXPECT_EQ(r.code, cli::exit_step_failure);
  const auto far = record(path("far.json"));
  EXPECT_EQ(far.exit_code, cli::exit_step_failure);
  EXPECT_FALSE(far.steps.empty());

  EXPECT_EQ(cli::exit_code_of(tracking_failure::corrector_failure), cli::exit_corrector_failure);
  EXPECT_EQ(cli::exit_code_of(tracking_failure::step_failure), cli::exit_step_failure);
  EXPECT_EQ(cli::exit_code_of(tracking_failure::singular_jacobian), cli::exit_singular_jacobian);
}

TEST_F(CliFiles, NewtonCommandReportsBinomialSeries) {
  const auto r = run({"--degree", "4", "newton", "--system", sqrt_system(), "--start", unit_start(), "--out",
                      path("n.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rec = record(path("n.json"));
  ASSERT_EQ(rec.series.size(), 1u);
  ASSERT_EQ(rec.series[0].size(), 5u);
  const double expect[] = {1.0, -0.5, -0.125, -0.0625, -0.0390625};
  for (std::size_t k = 0; k < 5; ++k)
    EXPECT_LT(std::abs((xprec::parse_real<dd_real>(rec.series[0][k].first) - dd_real(expect[k])).to_double()), 1e-28);
}

TEST_F(CliFiles, RunRecordRoundTrips) {
  ASSERT_EQ(run({"--target", "0.5", "track", "--system", sqrt_system(), "--start", unit_start(), "--out",
                 path("run.json")})
                .code,
            0);
  const auto json = nlohmann::ordered_json::parse(slurp(path("run.json")));
  const auto rec = cli::run_record_from_json(json);
  EXPECT_EQ(cli::to_json(rec), json);
  EXPECT_EQ(cli::run_record_from_json(cli::to_json(rec)), rec);
  EXPECT_EQ(rec.schema, cli::run_record_schema);

  cli::run_record custom;
  custom.config.command = "newton";
  custom.series = {{{"1", "0"}, {"-0.5", "0"}}};
  custom.steps.push_back({});
  custom.steps.back().condition = "12.5";
  custom.seconds["newton"] = 0.25;
  EXPECT_EQ(cli::run_record_from_json(cli::to_json(custom)), custom);

  auto wrong = json;
  wrong["schema"] = 99;
  EXPECT_THROW(cli::run_record_from_json(wrong), std::runtime_error);
  wrong = json;
  wrong.erase("steps");
  EXPECT_THROW(cli::run_record_from_json(wrong), nlohmann::json::exception);
}

TEST_F(CliFiles, BenchBlocksolveEmitsThreeRows) {
  const auto r = run({"--degree", "8", "--threads", "1,2,4", "--oversubscribe", "--out", path("b.csv"), "bench",
                      "blocksolve", "--n", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream table(r.out);
  std::string line;
  std::vector<std::string> rows;
  const std::regex row(R"(^\s+\d+\s+[0-9.]+\s+[0-9.]+\s+[0-9.]+%$)");
  while (std::getline(table, line))
    if (std::regex_match(line, row)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u) << r.out;
  EXPECT_NE(rows[0].find("1.00"), std::string::npos);
  EXPECT_NE(rows[0].find("100.0%"), std::string::npos);
  EXPECT_NE(r.out.find("S(p)"), std::string::npos);
  EXPECT_NE(r.out.find("E(p)"), std::string::npos);

  std::istringstream csv(slurp(path("b.csv")));
  std::getline(csv, line);
  EXPECT_EQ(line, "stage,n,d,p,seconds");
  std::size_t count = 0;
  while (std::getline(csv, line)) {
    EXPECT_EQ(line.rfind("blocksolve,64,8,", 0), 0u) << line;
    ++count;
  }
  EXPECT_EQ(count, 3u);
}

TEST(CliBench, ThreadCountsAreCappedWithAWarning) {
  cli::global_options g;
  g.threads = {1, 2, 4, 8};
  g.hardware_threads = 2;
  std::ostringstream err;
  EXPECT_EQ(cli::capped_threads(g, err), (std::vector<std::size_t>{1, 2}));
  EXPECT_NE(err.str().find("warning"), std::string::npos);
  g.oversubscribe = true;
  std::ostringstream quiet;
  EXPECT_EQ(cli::capped_threads(g, quiet), (std::vector<std::size_t>{1, 2, 4, 8}));
  EXPECT_TRUE(quiet.str().empty());
}

TEST(CliBench, SerialRunsRepeatBitwise) {
  cli::global_options g;
  g.precision = "dd";
  g.degree = 4;
  g.seed = 11;
  cli::bench_options o;
  o.n = 6;
  o.terms = 5;
  o.max_exponent = 3;
  for (const auto& stage : cli::bench_stages) {
    o.stage = stage;
    std::ostringstream err;
    const auto a = cli::run_bench<dd_real>(g, o, err);
    const auto b = cli::run_bench<dd_real>(g, o, err);
    ASSERT_EQ(a.rows.size(), 1u);
    EXPECT_EQ(a.rows[0].digest, b.rows[0].digest) << stage;
    EXPECT_GE(a.rows[0].seconds, 0.0);
    EXPECT_TRUE(err.str().empty()) << err.str();
  }
}

TEST(CliBench, ThreadCountDoesNotChangeResults) {
  cli::global_options g;
  g.precision = "dd";
  g.degree = 4;
  g.threads = {1, 3};
  g.oversubscribe = true;
  cli::bench_options o;
  o.cyclic = 5;
  for (const auto& stage : cli::bench_stages) {
    o.stage = stage;
    std::ostringstream err;
    const auto t = cli::run_bench<dd_real>(g, o, err);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.n, 5u);
    EXPECT_EQ(t.rows[0].digest, t.rows[1].digest) << stage;
  }
}

TEST(CliBench, BadRequestsAreUsageErrors) {
  EXPECT_EQ(run({"bench", "lu"}).code, cli::exit_usage);
  EXPECT_EQ(run({"--degree", "4", "--pade", "3,3", "bench", "pade", "--n", "2"}).code, cli::exit_usage);
  EXPECT_EQ(run({"bench", "pade", "--n", "2", "--repeat", "0"}).code, cli::exit_usage);
  EXPECT_EQ(run({"bench", "C", "--cyclic", "1"}).code, cli::exit_usage);
}

TEST(CliHelp, HelpExitsCleanly) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("track"), std::string::npos);
}
