#pragma once

#include <cstdint>
#include <exception>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include <json.hpp>

#include "savi/betting.hpp"
#include "savi/io/report.hpp"
#include "savi/sequential.hpp"

namespace savi::io {

enum class Subcommand { cs, test, ebh, detect, simulate };

Subcommand parse_subcommand(const std::string& name);
std::string subcommand_name(Subcommand s);

/// One CLI invocation. `params` holds method-specific options keyed by their
/// long flag name without dashes ("sigma", "grid", "n-a"...). Every key must
/// be consumed by the selected method or dispatch fails with ConfigError.
struct RunConfig {
  Subcommand subcommand = Subcommand::cs;
  std::string method;  // cs method, test null, ebh procedure, detect base
  double alpha = 0.05;
  nlohmann::json params = nlohmann::json::object();
  std::string input;   // empty or "-" = stdin
  std::string output;  // empty or "-" = stdout
  std::optional<Format> format;
  std::optional<std::uint64_t> seed;
  bool header = false;  // skip the first input line
  bool trace = false;   // test: one row per observation

  /// Everything needed to rerun, echoed into JSON reports.
  nlohmann::json echo() const;
};

/// Strict accessor over a JSON object: tracks which keys were read, and
/// finish() rejects any that were not.
class Params {
 public:
  explicit Params(nlohmann::json obj, std::string context);

  bool has(const std::string& key) const;
  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  long long integer(const std::string& key, std::optional<long long> fallback = std::nullopt);
  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt);
  nlohmann::json object(const std::string& key);
  /// Throws ConfigError naming the first unused key.
  void finish() const;

 private:
  const nlohmann::json& fetch(const std::string& key);

  nlohmann::json obj_;
  std::string context_;
  std::set<std::string> used_;
};

/// "lo:hi:n" -> MeanGridSpec.
MeanGridSpec parse_grid(const std::string& text);

/// Bet policy from keys policy (plugin|fixed|mixture), lambda, c, alpha-ref.
BetPolicy make_policy(Params& p);

/// Scalar e-process by kind: gaussian-lr, constant, symmetry, betting,
/// subgaussian, ttest, exchangeability, logrank.
std::unique_ptr<SequentialEProcess> make_process(const std::string& kind, Params& p);
/// From {"kind": ..., other keys}; strict.
std::unique_ptr<SequentialEProcess> make_process(const nlohmann::json& spec);

/// Runs one subcommand. Library errors propagate.
void run(const RunConfig& config);

/// 0 success, 2 configuration / parameter / I/O, 3 data, 4 internal.
int exit_code_for(const std::exception& e);

/// run() with errors reported to `err` and mapped to an exit status.
int dispatch(const RunConfig& config, std::ostream& err);

}  // namespace savi::io
