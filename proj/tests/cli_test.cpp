#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "nlohmann/json.hpp"

using namespace qtele;
using namespace qtele::cli;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QTELE_TEST_DATA_DIR) + "/" + name; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<std::string> lines(const std::string& s) {
  auto v = split(s, '\n');
  if (!v.empty() && v.back().empty()) v.pop_back();
  return v;
}

std::string column(const std::string& csv, const std::string& name, std::size_t row = 1) {
  const auto ls = lines(csv);
  const auto header = split(ls.at(0), ',');
  const auto values = split(ls.at(row), ',');
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return values.at(i);
  }
  return "<missing>";
}

}  // namespace

TEST(ConfigParsing, FractionForms) {
  const RawConfig raw = parse_config_json(
      R"({"p1": [1, 100], "p2": {"num": 1, "den": 50}, "eta_c_sq": "1/10", "cascade_n": 2,
          "theta": {"cos_num": 3, "cos_den": 5, "sin_num": 4, "sin_den": 5}, "y_policy": "no-click"})");
  const ExperimentConfig c = resolve_config(raw);
  EXPECT_EQ(c.p1, Scalar::fraction(1, 100));
  EXPECT_EQ(c.p2, Scalar::fraction(1, 50));
  EXPECT_EQ(c.cascade.eta_c_sq, Scalar::fraction(1, 10));
  EXPECT_EQ(c.cascade.n_detectors, 2u);
  EXPECT_EQ(c.theta.cos, Scalar::fraction(3, 5));
  EXPECT_EQ(c.cascade.y_policy, YPolicy::no_click);
  EXPECT_EQ(c.mode(), ScalarMode::exact);
}

TEST(ConfigParsing, DegreesSelectFloatingMode) {
  const ExperimentConfig c = resolve_config(parse_config_json(R"({"theta": {"degrees": 30}})"));
  EXPECT_EQ(c.mode(), ScalarMode::floating);
  EXPECT_NEAR(c.theta.sin.to_double(), 0.5, 1e-15);
}

TEST(ConfigParsing, ErrorsNameTheKey) {
  auto message = [](const std::string& text) -> std::string {
    try {
      resolve_config(parse_config_json(text));
    } catch (const std::exception& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(R"({"pump_power": 1})").find("pump_power"), std::string::npos);
  EXPECT_NE(message(R"({"p1": 0.01})").find("p1"), std::string::npos);
  EXPECT_NE(message(R"({"order": 5})").find("order"), std::string::npos);
  EXPECT_NE(message(R"({"y_policy": "maybe"})").find("y_policy"), std::string::npos);
  EXPECT_NE(message(R"({"theta": {"cos_num": 1}})").find("theta"), std::string::npos);
  EXPECT_NE(message("[1, 2]").find("config"), std::string::npos);
  EXPECT_NE(message("{").find("config"), std::string::npos);
}

TEST(ConfigParsing, FloatModeAcceptsDecimals) {
  const ExperimentConfig c = resolve_config(parse_config_json(R"({"p1": 0.01, "mode": "float"})"));
  EXPECT_EQ(c.mode(), ScalarMode::floating);
  EXPECT_NEAR(c.p1.to_double(), 0.01, 1e-18);
}

TEST(Fidelity, CsvRowCarriesExactAndDecimal) {
  const CliRun r = run_cli({"fidelity", "--config", data("innsbruck.json")});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  ASSERT_EQ(lines(r.out).size(), 2u);
  EXPECT_EQ(column(r.out, "fidelity"), "10/39");
  EXPECT_NEAR(std::stod(column(r.out, "fidelity_decimal")), 10.0 / 39.0, 1e-15);
  EXPECT_EQ(column(r.out, "vacuum_signal_ratio"), "29/10");
  EXPECT_EQ(column(r.out, "y_policy"), "trace");
  EXPECT_EQ(column(r.out, "mode"), "exact");
  // 15 significant digits
  const std::string dec = column(r.out, "fidelity_decimal");
  std::size_t digits = 0;
  for (char ch : dec.substr(0, dec.find_first_of("eE"))) digits += std::isdigit(static_cast<unsigned char>(ch)) ? 1 : 0;
  EXPECT_GE(digits, 15u);
}

TEST(Fidelity, FlagsOverrideConfigFile) {
  const CliRun r = run_cli({"fidelity", "--config", data("innsbruck.json"), "--eta-c-sq", "1"});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_EQ(column(r.out, "eta_c_sq"), "1");
}

TEST(Fidelity, JsonOutput) {
  const CliRun r = run_cli({"fidelity", "--config", data("innsbruck.json"), "--format", "json"});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_TRUE(doc.is_object());
  EXPECT_EQ(doc["fidelity"], "10/39");
  EXPECT_EQ(doc["order"], 2);
}

TEST(Fidelity, ThetaFlag) {
  const CliRun r = run_cli({"fidelity", "--theta", "5/13,12/13", "--y-policy", "no-click", "--cascade-n", "2"});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_EQ(column(r.out, "theta_cos"), "5/13");
  EXPECT_EQ(column(r.out, "cascade_n"), "2");
}

TEST(Fidelity, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli({"fidelity", "--order", "4"}).code, exit_config_error);
  EXPECT_EQ(run_cli({"fidelity", "--config", data("unknown_key.json")}).code, exit_config_error);
  EXPECT_EQ(run_cli({"fidelity", "--theta", "1/2,1/2"}).code, exit_config_error);
  EXPECT_EQ(run_cli({"fidelity", "--config", data("missing.json")}).code, exit_config_error);
  EXPECT_EQ(run_cli({}).code, exit_config_error);
}

TEST(Scan, RowsFollowSweepOrder) {
  const CliRun r = run_cli({"scan", "--sweep", "eta_c_sq", "--values", "1,1/2,1/10", "--y-policy", "no-click"});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  ASSERT_EQ(lines(r.out).size(), 4u);
  EXPECT_EQ(column(r.out, "eta_c_sq", 1), "1");
  EXPECT_EQ(column(r.out, "eta_c_sq", 2), "1/2");
  EXPECT_EQ(column(r.out, "eta_c_sq", 3), "1/10");
  EXPECT_EQ(column(r.out, "fidelity", 1), "1/2");
}

TEST(Scan, EmptySweepPrintsHeaderOnly) {
  const CliRun r = run_cli({"scan", "--sweep", "eta_c_sq", "--values="});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  ASSERT_EQ(lines(r.out).size(), 1u);
  EXPECT_EQ(lines(r.out)[0].rfind("p1,p2,", 0), 0u);
  const CliRun j = run_cli({"scan", "--sweep", "eta_c_sq", "--values=", "--format", "json"});
  EXPECT_EQ(nlohmann::json::parse(j.out), nlohmann::json::array());
}

TEST(PdcStats, SummaryQuantities) {
  const CliRun r = run_cli({"pdc-stats", "--p", "1/100", "--n-max", "3"});
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_NE(r.out.find("trials_distinguish,80000,"), std::string::npos);
  EXPECT_NE(r.out.find("trials_expected,10000,"), std::string::npos);
  // n = 2: 3 (p/2)^2 = 3/40000 against p^2/2 = 1/20000
  EXPECT_NE(r.out.find("2,3/40000,"), std::string::npos);
  const CliRun j = run_cli({"pdc-stats", "--p", "0.001", "--mode", "float", "--n-max", "30", "--format", "json"});
  ASSERT_EQ(j.code, exit_ok) << j.err;
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_NEAR(std::stod(doc["summary"]["ds2_times_8_over_p2"]["decimal"].get<std::string>()), 1.0, 0.01);
  EXPECT_EQ(run_cli({"pdc-stats", "--p", "2"}).code, exit_config_error);
}

TEST(Matrix, ByteStableWithExpectedBlocks) {
  const CliRun a = run_cli({"matrix", "--order", "3", "--theta", "3/5,4/5"});
  const CliRun b = run_cli({"matrix", "--order", "3", "--theta", "3/5,4/5"});
  ASSERT_EQ(a.code, exit_ok) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto doc = nlohmann::json::parse(a.out);
  std::vector<std::string> keys;
  for (const auto& [k, _] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"(1,1)", "(1,2)", "(2,0)", "(2,1)", "(3,0)"}));
  for (const auto& entry : doc["(1,1)"]) {
    ASSERT_EQ(entry.size(), 4u);
    EXPECT_EQ(entry[0].size(), 2u);
    EXPECT_TRUE(entry[2].is_string());
  }
  const CliRun two = run_cli({"matrix"});
  EXPECT_EQ(nlohmann::json::parse(two.out).size(), 2u);
}

TEST(Verify, ExitCodes) {
  EXPECT_EQ(run_cli({"verify", "--filter", "pump-economics"}).code, exit_ok);
  EXPECT_EQ(run_cli({"verify", "--filter", "threshold", "--perturb-threshold"}).code,
            exit_verification_failed);
  EXPECT_EQ(run_cli({"verify", "--filter", "nothing-matches-this"}).code, exit_config_error);
  const CliRun csv = run_cli({"verify", "--filter", "pump-economics", "--format", "csv"});
  EXPECT_EQ(lines(csv.out).at(0), "criterion,group,name,status,expected,actual");
}
