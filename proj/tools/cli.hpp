#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qtele/experiment.hpp"

namespace qtele::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 1;
inline constexpr int exit_config_error = 2;

/// Settings as written in a config file or on the command line, keyed by
/// config-file name. Values stay textual until the mode is known.
struct RawConfig {
  std::vector<std::pair<std::string, std::string>> values;

  void set(const std::string& key, std::string value);
  const std::string* find(const std::string& key) const;
};

/// Reads a JSON config document; unknown keys and malformed values raise
/// ConfigError naming the key.
RawConfig parse_config_json(const std::string& text);

/// Resolves a raw config. Exact mode accepts only integer fractions;
/// degrees force floating mode.
ExperimentConfig resolve_config(const RawConfig& raw);

struct ResultRow {
  ExperimentConfig config;
  Scalar fidelity;
  Scalar vacuum_signal_ratio;
  Scalar threshold_eta_c_sq;
  Scalar trace;
};

ResultRow evaluate(const ExperimentConfig& config);

std::string render_rows_csv(const std::vector<ResultRow>& rows);
std::string render_rows_json(const std::vector<ResultRow>& rows, bool single);

/// Blocks keyed "(i,j)", entries [ket, bra, rational_part, radical_part] in
/// the normalized Fock basis over (d_x, d_y).
std::string matrix_json(const OrderedDensity& rho);

/// Entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qtele::cli
