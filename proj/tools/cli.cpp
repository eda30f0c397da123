#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtele/parallel.hpp"
#include "qtele/verification.hpp"

namespace qtele::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "p1",       "p2",       "theta_cos", "theta_sin", "degrees", "eta_u_sq", "eta_v_sq",
      "eta_c_sq", "cascade_n", "topology", "y_policy",  "order",   "mode"};
  return keys;
}

bool is_known(const std::string& key) {
  const auto& k = known_keys();
  return std::find(k.begin(), k.end(), key) != k.end();
}

// ------------------------------------------------------------ json input

std::string integer_text(const Json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
  return v.dump();
}

std::string scalar_text(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) {
    std::string s = v.dump();
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
  }
  if (v.is_array() && v.size() == 2) {
    return integer_text(v[0], key) + "/" + integer_text(v[1], key);
  }
  if (v.is_object() && v.contains("num") && v.contains("den") && v.size() == 2) {
    return integer_text(v["num"], key) + "/" + integer_text(v["den"], key);
  }
  throw ConfigError(key + ": expected a fraction [num, den], {\"num\", \"den\"}, \"n/d\" or a number");
}

void read_theta(const Json& v, RawConfig& raw) {
  if (v.is_number()) {
    raw.set("degrees", scalar_text(v, "theta"));
    return;
  }
  if (!v.is_object()) throw ConfigError("theta: expected an object");
  if (v.contains("degrees")) {
    if (v.size() != 1) throw ConfigError("theta: degrees excludes other fields");
    raw.set("degrees", scalar_text(v["degrees"], "theta.degrees"));
    return;
  }
  for (const auto& [k, _] : v.items()) {
    if (k != "cos_num" && k != "cos_den" && k != "sin_num" && k != "sin_den") {
      throw ConfigError("theta." + k + ": unknown key");
    }
  }
  for (const char* k : {"cos_num", "cos_den", "sin_num", "sin_den"}) {
    if (!v.contains(k)) throw ConfigError(std::string("theta.") + k + ": missing");
  }
  raw.set("theta_cos", integer_text(v["cos_num"], "theta.cos_num") + "/" +
                           integer_text(v["cos_den"], "theta.cos_den"));
  raw.set("theta_sin", integer_text(v["sin_num"], "theta.sin_num") + "/" +
                           integer_text(v["sin_den"], "theta.sin_den"));
}

// ---------------------------------------------------------- config build

Scalar scalar_field(const RawConfig& raw, const std::string& key, const Scalar& fallback,
                    ScalarMode mode) {
  const std::string* text = raw.find(key);
  Scalar value = fallback;
  if (text) {
    try {
      value = Scalar::parse(*text);
    } catch (const std::exception&) {
      throw ConfigError(key + ": cannot parse '" + *text + "'");
    }
    if (mode == ScalarMode::exact && !value.is_exact()) {
      throw ConfigError(key + ": exact mode needs an integer fraction such as 1/100, got '" +
                        *text + "'");
    }
  }
  return mode == ScalarMode::floating ? value.to_floating() : value;
}

unsigned unsigned_field(const RawConfig& raw, const std::string& key, unsigned fallback) {
  const std::string* text = raw.find(key);
  if (!text) return fallback;
  const bool digits = !text->empty() && std::all_of(text->begin(), text->end(), [](char ch) {
    return ch >= '0' && ch <= '9';
  });
  if (!digits || text->size() > 6) throw ConfigError(key + ": expected a small non-negative integer");
  return static_cast<unsigned>(std::stoul(*text));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string exact_text(const Scalar& s) { return s.str(); }
std::string decimal_text(const Scalar& s) { return s.decimal(15); }

std::string policy_text(YPolicy y) { return y == YPolicy::no_click ? "no-click" : "trace"; }
std::string topology_text(CascadeTopology t) {
  return t == CascadeTopology::balanced ? "balanced" : "chain";
}

std::vector<std::pair<std::string, std::string>> row_fields(const ResultRow& r) {
  const ExperimentConfig& c = r.config;
  return {
      {"p1", exact_text(c.p1)},
      {"p2", exact_text(c.p2)},
      {"theta_cos", exact_text(c.theta.cos)},
      {"theta_sin", exact_text(c.theta.sin)},
      {"eta_u_sq", exact_text(c.eta_u_sq)},
      {"eta_v_sq", exact_text(c.eta_v_sq)},
      {"eta_c_sq", exact_text(c.cascade.eta_c_sq)},
      {"cascade_n", std::to_string(c.cascade.n_detectors)},
      {"topology", topology_text(c.cascade.topology)},
      {"y_policy", policy_text(c.cascade.y_policy)},
      {"order", std::to_string(c.truncation_order)},
      {"mode", c.mode() == ScalarMode::exact ? "exact" : "float"},
      {"fidelity", exact_text(r.fidelity)},
      {"fidelity_decimal", decimal_text(r.fidelity)},
      {"vacuum_signal_ratio", exact_text(r.vacuum_signal_ratio)},
      {"vacuum_signal_ratio_decimal", decimal_text(r.vacuum_signal_ratio)},
      {"threshold_eta_c_sq", exact_text(r.threshold_eta_c_sq)},
      {"threshold_eta_c_sq_decimal", decimal_text(r.threshold_eta_c_sq)},
      {"trace", exact_text(r.trace)},
      {"trace_decimal", decimal_text(r.trace)},
  };
}

std::string csv_header() {
  ResultRow dummy{ExperimentConfig{}, 0, 0, 0, 0};
  std::string out;
  for (const auto& [k, _] : row_fields(dummy)) out += (out.empty() ? "" : ",") + k;
  return out + "\n";
}

// --------------------------------------------------------------- options

struct ConfigFlags {
  std::string file;
  RawConfig overrides;
  std::string format = "csv";
};

void add_config_options(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.file, "JSON config file")->check(CLI::ExistingFile);
  const auto bind = [&](const std::string& flag, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.overrides.set(key, v); }, help);
  };
  bind("--p1", "p1", "source-1 pair probability, e.g. 1/100");
  bind("--p2", "p2", "source-2 pair probability");
  bind("--degrees", "degrees", "rotation angle in degrees (float mode)");
  bind("--eta-u-sq", "eta_u_sq", "efficiency of the u detector");
  bind("--eta-v-sq", "eta_v_sq", "efficiency of the v detector");
  bind("--eta-c-sq", "eta_c_sq", "efficiency of the cascade detectors");
  bind("--cascade-n", "cascade_n", "number of cascade detectors");
  bind("--topology", "topology", "cascade tree: balanced | chain");
  bind("--y-policy", "y_policy", "a_y handling: no-click | trace");
  bind("--order", "order", "total pair order: 2 | 3");
  bind("--mode", "mode", "exact | float");
  cmd->add_option_function<std::string>(
      "--theta",
      [&flags](const std::string& v) {
        const auto comma = v.find(',');
        if (comma == std::string::npos) throw CLI::ValidationError("--theta", "expected COS,SIN");
        flags.overrides.set("theta_cos", v.substr(0, comma));
        flags.overrides.set("theta_sin", v.substr(comma + 1));
      },
      "rotation as COS,SIN fractions, e.g. 3/5,4/5");
  cmd->add_option("--format", flags.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

RawConfig load_raw(const ConfigFlags& flags) {
  RawConfig raw;
  if (!flags.file.empty()) {
    std::ifstream in(flags.file);
    if (!in) throw ConfigError("config: cannot open " + flags.file);
    std::stringstream buf;
    buf << in.rdbuf();
    raw = parse_config_json(buf.str());
  }
  for (const auto& [k, v] : flags.overrides.values) {
    if (k == "theta_cos" || k == "theta_sin") raw.values.erase(
        std::remove_if(raw.values.begin(), raw.values.end(),
                       [](const auto& e) { return e.first == "degrees"; }),
        raw.values.end());
    if (k == "degrees") raw.values.erase(
        std::remove_if(raw.values.begin(), raw.values.end(),
                       [](const auto& e) { return e.first == "theta_cos" || e.first == "theta_sin"; }),
        raw.values.end());
    raw.set(k, v);
  }
  return raw;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

// -------------------------------------------------------------- commands

int cmd_rows(const std::vector<ExperimentConfig>& configs, const std::string& format, bool single,
             std::ostream& out) {
  const auto rows = parallel_map(configs, [](const ExperimentConfig& c) { return evaluate(c); });
  out << (format == "json" ? render_rows_json(rows, single) : render_rows_csv(rows));
  return exit_ok;
}

int cmd_pdc_stats(const std::string& p_text, unsigned n_max, const std::string& mode_text,
                  const std::string& format, std::ostream& out) {
  RawConfig raw;
  raw.set("p", p_text);
  if (mode_text != "exact" && mode_text != "float") throw ConfigError("mode: expected exact or float");
  const ScalarMode mode = mode_text == "exact" ? ScalarMode::exact : ScalarMode::floating;
  const Scalar p = scalar_field(raw, "p", 0, mode);
  if (p.sign() <= 0 || !(p < Scalar(1))) throw ConfigError("p: must satisfy 0 < p < 1");

  Json rows = Json::array();
  std::ostringstream csv;
  csv << "n,p_pdc,p_pdc_decimal,p_poisson,p_poisson_decimal,difference,difference_decimal\n";
  for (unsigned n = 0; n <= n_max; ++n) {
    const Scalar a = p_pdc_small(n, p);
    const Scalar b = p_poisson(n, p);
    const Scalar d = a - b;
    csv << n << "," << csv_field(exact_text(a)) << "," << decimal_text(a) << ","
        << csv_field(exact_text(b)) << "," << decimal_text(b) << "," << csv_field(exact_text(d))
        << "," << decimal_text(d) << "\n";
    rows.push_back({{"n", n},
                    {"p_pdc", exact_text(a)},
                    {"p_pdc_decimal", decimal_text(a)},
                    {"p_poisson", exact_text(b)},
                    {"p_poisson_decimal", decimal_text(b)},
                    {"difference", exact_text(d)},
                    {"difference_decimal", decimal_text(d)}});
  }
  const Scalar ds2 = n_max >= 1 ? statistical_distance_sq(p, n_max) : Scalar(0);
  const std::vector<std::pair<std::string, Scalar>> summary{
      {"ds2", ds2},
      {"ds2_times_8_over_p2", ds2 * distinguishability_trials(p)},
      {"trials_distinguish", distinguishability_trials(p)},
      {"trials_expected", expected_trials(p)},
  };
  if (format == "json") {
    Json doc;
    doc["p"] = exact_text(p);
    doc["mode"] = mode_text;
    doc["rows"] = rows;
    Json s;
    for (const auto& [k, v] : summary) s[k] = {{"value", exact_text(v)}, {"decimal", decimal_text(v)}};
    doc["summary"] = s;
    out << doc.dump(2) << "\n";
  } else {
    out << csv.str() << "\nquantity,value,decimal\n";
    for (const auto& [k, v] : summary) {
      out << k << "," << csv_field(exact_text(v)) << "," << decimal_text(v) << "\n";
    }
  }
  return exit_ok;
}

int cmd_verify(const VerifyOptions& options, const std::string& format, std::ostream& out,
               std::ostream& err) {
  const auto checks = run_verification(options);
  if (checks.empty()) {
    err << "verify: no checks match filter '" << options.filter << "'\n";
    return exit_config_error;
  }
  bool all = true;
  for (const auto& c : checks) all = all && c.passed;
  if (format == "json") {
    Json doc = Json::array();
    for (const auto& c : checks) {
      doc.push_back({{"criterion", c.criterion},
                     {"group", c.group},
                     {"name", c.name},
                     {"passed", c.passed},
                     {"expected", c.expected},
                     {"actual", c.actual}});
    }
    out << doc.dump(2) << "\n";
  } else if (format == "csv") {
    out << "criterion,group,name,status,expected,actual\n";
    for (const auto& c : checks) {
      out << c.criterion << "," << csv_field(c.group) << "," << csv_field(c.name) << ","
          << (c.passed ? "pass" : "fail") << "," << csv_field(c.expected) << ","
          << csv_field(c.actual) << "\n";
    }
  } else {
    std::size_t passed = 0;
    for (const auto& c : checks) {
      passed += c.passed ? 1 : 0;
      out << (c.passed ? "PASS" : "FAIL") << " [" << c.criterion << " " << c.group << "] " << c.name
          << "\n     expected: " << c.expected << "\n     actual:   " << c.actual << "\n";
    }
    out << passed << "/" << checks.size() << " checks passed\n";
  }
  return all ? exit_ok : exit_verification_failed;
}

}  // namespace

// ------------------------------------------------------------- RawConfig

void RawConfig::set(const std::string& key, std::string value) {
  for (auto& [k, v] : values) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  values.emplace_back(key, std::move(value));
}

const std::string* RawConfig::find(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return &v;
  }
  return nullptr;
}

RawConfig parse_config_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  RawConfig raw;
  for (const auto& [key, v] : doc.items()) {
    if (key == "theta") {
      read_theta(v, raw);
    } else if (key == "degrees") {
      raw.set("degrees", scalar_text(v, key));
    } else if (key == "cascade_n" || key == "order") {
      raw.set(key, integer_text(v, key));
    } else if (key == "y_policy" || key == "mode" || key == "topology") {
      if (!v.is_string()) throw ConfigError(key + ": expected a string");
      raw.set(key, v.get<std::string>());
    } else if (is_known(key) && key != "theta_cos" && key != "theta_sin") {
      raw.set(key, scalar_text(v, key));
    } else {
      throw ConfigError(key + ": unknown key");
    }
  }
  return raw;
}

ExperimentConfig resolve_config(const RawConfig& raw) {
  for (const auto& [k, _] : raw.values) {
    if (!is_known(k)) throw ConfigError(k + ": unknown key");
  }
  ScalarMode mode = ScalarMode::exact;
  if (const auto* m = raw.find("mode")) {
    if (*m == "float") {
      mode = ScalarMode::floating;
    } else if (*m != "exact") {
      throw ConfigError("mode: expected exact or float, got '" + *m + "'");
    }
  }
  if (raw.find("degrees")) mode = ScalarMode::floating;

  ExperimentConfig c;
  c.p1 = scalar_field(raw, "p1", c.p1, mode);
  c.p2 = scalar_field(raw, "p2", c.p2, mode);
  c.eta_u_sq = scalar_field(raw, "eta_u_sq", c.eta_u_sq, mode);
  c.eta_v_sq = scalar_field(raw, "eta_v_sq", c.eta_v_sq, mode);
  c.cascade.eta_c_sq = scalar_field(raw, "eta_c_sq", c.cascade.eta_c_sq, mode);
  c.cascade.n_detectors = unsigned_field(raw, "cascade_n", c.cascade.n_detectors);
  c.truncation_order = unsigned_field(raw, "order", c.truncation_order);

  if (const auto* d = raw.find("degrees")) {
    if (raw.find("theta_cos") || raw.find("theta_sin")) {
      throw ConfigError("theta: give either cos/sin or degrees");
    }
    const Scalar deg = scalar_field(raw, "degrees", 0, ScalarMode::floating);
    (void)d;
    c.theta = Angle::from_degrees(deg.to_double());
  } else if (raw.find("theta_cos") || raw.find("theta_sin")) {
    if (!raw.find("theta_cos") || !raw.find("theta_sin")) {
      throw ConfigError("theta: both cos and sin are required");
    }
    c.theta = {scalar_field(raw, "theta_cos", 1, mode), scalar_field(raw, "theta_sin", 0, mode)};
  } else if (mode == ScalarMode::floating) {
    c.theta = {c.theta.cos.to_floating(), c.theta.sin.to_floating()};
  }

  if (const auto* y = raw.find("y_policy")) {
    if (*y == "no-click") {
      c.cascade.y_policy = YPolicy::no_click;
    } else if (*y == "trace") {
      c.cascade.y_policy = YPolicy::trace_out;
    } else {
      throw ConfigError("y_policy: expected no-click or trace, got '" + *y + "'");
    }
  }
  if (const auto* t = raw.find("topology")) {
    if (*t == "balanced") {
      c.cascade.topology = CascadeTopology::balanced;
    } else if (*t == "chain") {
      c.cascade.topology = CascadeTopology::chain;
    } else {
      throw ConfigError("topology: expected balanced or chain, got '" + *t + "'");
    }
  }
  c.validate();
  return c;
}

ResultRow evaluate(const ExperimentConfig& config) {
  const OrderedDensity od = build_output_state(config);
  const DensityOperator rho = od.combined(config.p1, config.p2);
  const IdealState ideal = IdealState::make(config.theta);
  const Scalar trace = dm_trace(rho);
  if (trace.is_zero() || rho.expectation(ideal.psi).is_zero()) {
    throw ConfigError("the conditioning event has no teleported signal for this config");
  }
  return {config, fidelity(rho, ideal), vacuum_signal_ratio(rho, ideal),
          f2_threshold(config.cascade.n_detectors, config.p1, config.p2), trace};
}

std::string render_rows_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_header();
  for (const auto& r : rows) {
    std::string line;
    for (const auto& [_, v] : row_fields(r)) line += (line.empty() ? "" : ",") + csv_field(v);
    out += line + "\n";
  }
  return out;
}

std::string render_rows_json(const std::vector<ResultRow>& rows, bool single) {
  Json doc = Json::array();
  for (const auto& r : rows) {
    Json obj = Json::object();
    for (const auto& [k, v] : row_fields(r)) {
      if (k == "cascade_n" || k == "order") {
        obj[k] = std::stoul(v);
      } else {
        obj[k] = v;
      }
    }
    doc.push_back(obj);
  }
  if (single && doc.size() == 1) return doc[0].dump(2) + "\n";
  return doc.dump(2) + "\n";
}

std::string matrix_json(const OrderedDensity& rho) {
  const std::vector<ModeId> modes(rho.modes().begin(), rho.modes().end());
  Json doc = Json::object();
  for (const auto& [order, block] : rho.blocks()) {
    Json entries = Json::array();
    for (const auto& [key, _] : block.entries()) {
      const Scalar v = block.physical_entry(key.first, key.second);
      const std::string rat = v.is_exact() ? v.rational_part().get_str() : v.decimal(17);
      const std::string rad = v.is_exact() ? v.radical_part().get_str() : "0";
      entries.push_back({key.first.occupations(modes), key.second.occupations(modes), rat, rad});
    }
    doc[order.str()] = entries;
  }
  return doc.dump(2) + "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-source photonic teleportation simulator", "qtele"};
  app.require_subcommand(1);

  ConfigFlags fid_flags, scan_flags, matrix_flags;
  auto* fid = app.add_subcommand("fidelity", "evaluate one configuration");
  add_config_options(fid, fid_flags);

  auto* scan = app.add_subcommand("scan", "evaluate a sweep over one config key");
  add_config_options(scan, scan_flags);
  std::string sweep_key, sweep_values;
  scan->add_option("--sweep", sweep_key, "config key to vary, e.g. eta_c_sq")->required();
  scan->add_option("--values", sweep_values, "comma-separated values; may be empty")
      ->required()
      ->expected(0, 1);

  auto* pdc = app.add_subcommand("pdc-stats", "down-converter photon statistics");
  std::string p_text = "1/100", pdc_mode = "exact", pdc_format = "csv";
  unsigned n_max = 4;
  pdc->add_option("--p", p_text, "single-pair probability");
  pdc->add_option("--n-max", n_max, "largest photon-pair number")->check(CLI::Range(0u, 400u));
  pdc->add_option("--mode", pdc_mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
  pdc->add_option("--format", pdc_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "run the closed-form verification suite");
  VerifyOptions vopts;
  std::string verify_format = "text";
  verify->add_option("--filter", vopts.filter, "substring of a group or check name");
  verify->add_flag("--perturb-threshold", vopts.perturb_threshold_constant,
                   "negative control: shift a reference constant");
  verify->add_option("--format", verify_format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  auto* matrix = app.add_subcommand("matrix", "dump the order-resolved output blocks as JSON");
  add_config_options(matrix, matrix_flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config_error;
  }

  try {
    if (*fid) {
      return cmd_rows({resolve_config(load_raw(fid_flags))}, fid_flags.format, true, out);
    }
    if (*scan) {
      if (!is_known(sweep_key) || sweep_key == "theta_cos" || sweep_key == "theta_sin") {
        throw ConfigError("sweep: '" + sweep_key + "' is not a sweepable key");
      }
      const RawConfig base = load_raw(scan_flags);
      std::vector<ExperimentConfig> configs;
      for (const auto& v : split_list(sweep_values)) {
        RawConfig raw = base;
        raw.set(sweep_key, v);
        configs.push_back(resolve_config(raw));
      }
      return cmd_rows(configs, scan_flags.format, false, out);
    }
    if (*pdc) return cmd_pdc_stats(p_text, n_max, pdc_mode, pdc_format, out);
    if (*verify) return cmd_verify(vopts, verify_format, out, err);
    if (*matrix) {
      out << matrix_json(build_output_state(resolve_config(load_raw(matrix_flags))));
      return exit_ok;
    }
  } catch (const std::invalid_argument& e) {
    // ConfigError, DetectionError, OpticsError and PdcError
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  }
  return exit_config_error;
}

}  // namespace qtele::cli
