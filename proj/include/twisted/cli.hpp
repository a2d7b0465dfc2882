#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "twisted/shooting.hpp"

namespace twisted::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 2, kSolverFailure = 3, kVerificationFailure = 4 };

/// Every setting of a run. Precedence: built-in defaults, then the JSON config
/// file (--config, or the path in TWISTED_EIG_CONFIG), then command-line flags.
struct RunConfig {
  double p = 2.0;
  double q = 2.0;
  int dim = 2;
  double radius = 1.0;
  double r1 = 0.0;  // 0: equal split of omega_N
  double r2 = 0.0;
  std::string method = "structured";
  double ode_tol = 1e-10;
  double newton_tol = 1e-10;
  double zero_tol = 1e-12;
  std::size_t grid = 512;
  std::size_t steps = 33;
  double volume = 0.0;  // 0: omega_N
  double min_fraction = 0.4;
  double split_tol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t cases = 50;
  std::string out;  // json or csv; empty picks csv for sweep, json otherwise
  std::string suite = "all";
  std::string shape = "circle";
  double a = 1.0;
  double b = 2.0;
  std::size_t samples = 4097;
  bool reproducible = false;  // report timing_ms as 0 so output is byte-stable

  ShootOptions shoot_options() const;
};

Json to_json(const RunConfig& config);

/// Overwrites the fields named in `j` except those listed in `locked`.
/// Throws Error{InvalidArgument} on unknown keys or mistyped values.
void apply_json(RunConfig& config, const Json& j, const std::vector<std::string>& locked = {});

/// Throws Error{InvalidArgument} for non-positive tolerances or unknown enum strings.
void check_config(const RunConfig& config);

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Residual that passes when value <= tolerance (NaN never passes).
Residual at_most(std::string name, double value, double tolerance);

struct RunReport {
  Json inputs = Json::object();
  Json result = Json::object();
  std::vector<Residual> residuals;
  Json flags = Json::object();
  double timing_ms = 0.0;
  std::string csv;  // filled by commands whose natural output is a table

  bool all_pass() const;
  Json to_json() const;
};

RunReport cmd_ball(const RunConfig& config);
RunReport cmd_twisted(const RunConfig& config);
RunReport cmd_sweep(const RunConfig& config);
RunReport cmd_verify(const RunConfig& config);
RunReport cmd_wirtinger(const RunConfig& config);
RunReport cmd_curve(const RunConfig& config);

/// Names accepted by --suite, without "all".
const std::vector<std::string>& suite_names();

/// Runs one named verification suite and appends its residuals.
void run_suite(const std::string& name, const RunConfig& config, std::vector<Residual>& out,
               Json& details);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twisted::cli
