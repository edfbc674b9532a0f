#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "circlekit/cli/config.hpp"
#include "circlekit/cli/run.hpp"
#include "circlekit/cli/serialize.hpp"

using namespace circlekit;
namespace fs = std::filesystem;

namespace {

const char* kCircleConfig = R"({
  "form": [{"exponents": [2, 0], "coefficient": 1}, {"exponents": [0, 2], "coefficient": 1}],
  "box": {"a": ["0", "0"], "b": ["1", "1"]}, "P": "5", "n": "25"
})";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("circlekit_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "circlekit");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

CliRun run_task(const fs::path& dir, const std::string& task, const std::string& config,
                std::vector<std::string> extra = {}) {
  const fs::path cfg = dir / (task + ".cfg.json");
  std::ofstream(cfg, std::ios::binary) << config;
  std::vector<std::string> args{task, "--config", cfg.string(), "--out-dir", (dir / "out").string()};
  args.insert(args.end(), extra.begin(), extra.end());
  return cli(args);
}

std::string config_error(const std::string& text, const std::string& task = "count") {
  try {
    parse_config(text, task);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("format_double uses seventeen significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1.5e-300) == "-1.5000000000000001e-300");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  for (double x : {M_PI, 1.0 / 3.0, -7.25e17, 2.2250738585072014e-308}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("JSON encodings round trip") {
  const auto t = make_tuple(3, {0}, {2}, {0, 0, 1});
  CHECK(tuple_from_json(Json::parse(to_json(t).dump())) == t);

  SeriesValue s;
  s.value = {0.1, -2.0 / 3.0};
  s.imag_residual = 1e-17;
  s.Q = 7;
  s.term_tail_estimate = 3.5e-4;
  s.converged = true;
  s.blocks = {{1.0, 0.0}, {0.25, -1e-300}};
  CHECK(series_from_json(Json::parse(to_json(s).dump())) == s);

  IntegralValue v;
  v.value = {M_PI / 4, 1e-12};
  v.Q = 100.0;
  v.tail_estimate = 1e-5;
  v.error_estimate = 2e-11;
  v.convergence_unguaranteed = true;
  CHECK(integral_from_json(Json::parse(to_json(v).dump())) == v);

  ExpansionResult r;
  r.P = Rational(7, 2);
  r.n = Integer("123456789012345678901234567890");
  r.K = 2;
  r.Q_series = 9;
  r.Q_integral = 60.0;
  r.terms.push_back({t, s, v, -1, 0.123456789, false, ""});
  r.terms.push_back({make_tuple(3, {}, {}), s, v, 0, 0.0, true, "did not converge"});
  r.total = 0.123456789;
  r.exact_count = Integer(3);
  r.residual = 3.0 - r.total;
  r.warnings = {"a warning"};
  CHECK(expansion_from_json(Json::parse(to_json(r).dump())) == r);
  r.exact_count.reset();
  r.residual.reset();
  CHECK(expansion_from_json(Json::parse(to_json(r).dump(2))) == r);

  ReportRow row{Rational(10), 2, Integer(100), Integer(-4), 1.25, -5.25, 0.001};
  CHECK(report_row_from_json(Json::parse(to_json(row).dump())) == row);
}

TEST_CASE("configuration errors name the field") {
  CHECK(config_error(R"({"form": {"diagonal": {"d": 2, "s": 2}}, "box": {"a": ["1", "0"], "b": ["1", "1"]}})")
            .find("/box/a/0") != std::string::npos);
  CHECK(config_error(R"({"form": {"diagonal": {"d": 2, "s": 2}}, "bogus": 1})").find("/bogus") != std::string::npos);
  CHECK(config_error(R"({"P": "5"})").find("/form") != std::string::npos);
  CHECK(config_error("{\n  \"form\": [\n}").find("line") != std::string::npos);
  CHECK(config_error(R"({"form": {"diagonal": {"d": 2, "s": 2}}})", "compare").find("/P_grid") != std::string::npos);
  CHECK(config_error(kCircleConfig).empty());
}

TEST_CASE("configuration hash ignores the thread count") {
  const auto a = parse_config(kCircleConfig, "count");
  std::string with_threads = kCircleConfig;
  with_threads.insert(with_threads.rfind('}'), ", \"threads\": 3");
  const auto b = parse_config(with_threads, "count");
  CHECK(b.threads == 3);
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(parse_config(kCircleConfig, "expand")));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("count task writes the circle example") {
  const auto dir = scratch("count");
  const auto r = run_task(dir, "count", kCircleConfig);
  CHECK(r.code == kExitOk);
  CHECK(slurp(dir / "out" / "count.csv") == "count\n2\n");
  const auto j = Json::parse(slurp(dir / "out" / "count.json"));
  CHECK(j.at("task") == "count");
}

TEST_CASE("waring task reports the q = 2 sum") {
  const auto dir = scratch("waring");
  const auto r = run_task(dir, "waring", R"({"waring": {"q": 2, "a": 1, "d": 2, "s": 5, "j": 0, "n": 1, "Q": 20}})");
  REQUIRE(r.code == kExitOk);
  const std::string csv = slurp(dir / "out" / "waring.csv");
  CHECK(csv.find("T,-0.5") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("reruns are byte identical and hit the cache") {
  const auto dir = scratch("determinism");
  const std::string cfg = R"({"form": {"diagonal": {"d": 2, "s": 4}}, "P": "5", "n": "25", "K": 2,
                              "Q_series": 6, "Q_integral": 30})";
  const auto first = run_task(dir, "expand", cfg, {"--threads", "1"});
  REQUIRE(first.code == kExitOk);
  CHECK(first.err.find("cache miss") != std::string::npos);
  const std::string json1 = slurp(dir / "out" / "expand.json"), csv1 = slurp(dir / "out" / "expand.csv");
  const auto second = run_task(dir, "expand", cfg, {"--threads", "1"});
  REQUIRE(second.code == kExitOk);
  CHECK(second.err.find("cache hit") != std::string::npos);
  CHECK(slurp(dir / "out" / "expand.json") == json1);
  CHECK(slurp(dir / "out" / "expand.csv") == csv1);

  fs::remove_all(dir / "out" / ".cache");
  const auto third = run_task(dir, "expand", cfg, {"--threads", "1"});
  REQUIRE(third.code == kExitOk);
  CHECK(third.err.find("cache miss") != std::string::npos);
  CHECK(slurp(dir / "out" / "expand.json") == json1);
  CHECK(slurp(dir / "out" / "expand.csv") == csv1);
  const auto j = Json::parse(json1);
  CHECK(expansion_from_json(j.at("result")).terms.size() == 9);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  CHECK(run_task(dir, "count", R"({"form": {"diagonal": {"d": 2, "s": 2}}, "box": "nowhere"})").code == kExitConfig);
  CHECK(cli({"count", "--config", (dir / "missing.json").string()}).code == kExitConfig);
  CHECK(cli({"frobnicate", "--config", (dir / "missing.json").string()}).code == kExitConfig);
  CHECK(run_task(dir, "count", R"({"form": {"diagonal": {"d": 2, "s": 3}}, "P": "50", "n": "3",
                                  "budgets": {"count": 1000}, "cache": false})")
            .code == kExitBudget);
  CHECK(run_task(dir, "integral", R"({"form": {"diagonal": {"d": 2, "s": 2}}, "P": "2", "n": "1", "Q_integral": 50,
                                     "quadrature": {"abs_tol": 1e-300, "rel_tol": 1e-300, "max_refinements": 1},
                                     "cache": false})")
            .code == kExitConvergence);
}

TEST_CASE("em-check matches the direct lattice sum") {
  const auto dir = scratch("emcheck");
  const auto r = run_task(dir, "em-check", R"({"form": {"diagonal": {"d": 2, "s": 2}}, "P": "4", "K": 3, "gamma": 0.01})");
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(slurp(dir / "out" / "em-check.json"));
  CHECK(j.at("result").at("difference").get<double>() < 1e-9);
}

TEST_CASE("mobius task reports the exact identity") {
  const auto dir = scratch("mobius");
  const auto r = run_task(dir, "mobius", R"({
    "form": [{"exponents": [2, 0, 0], "coefficient": 1}, {"exponents": [0, 2, 0], "coefficient": 1},
             {"exponents": [0, 0, 2], "coefficient": -2}],
    "P": "5", "Q_series": 6, "Q_integral": 30})");
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(slurp(dir / "out" / "mobius.json"));
  CHECK(j.at("result").at("identity_holds").get<bool>());
  CHECK(j.at("result").at("direct") == "4");
}
