#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace spinwehrl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDeviation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Raised by compare for scenarios where only one method applies.
class NothingToCompare : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Largest relative deviation between two methods over a trajectory,
/// |a - b| / max(|a|, |b|, 1e-6 * scale, 1e-8) where scale is the largest
/// magnitude the quantity reaches along the trajectory.
struct MethodDelta {
  std::string quantity;
  std::string method_a;
  std::string method_b;
  double max_rel = 0.0;
  double at_t = 0.0;
};

std::vector<MethodDelta> method_deltas(const ScenarioConfig& cfg, const ScenarioResult& result, bool final_only);

struct CommandOptions {
  std::string config;
  std::string out_dir = ".";
  std::optional<std::string> grid;
  std::optional<double> tol;
  bool trajectory = false;  // run: also write <csv stem>_trajectory.csv
  std::string param;
  std::vector<std::string> values;
};

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_list_scenarios(std::ostream& out);

}  // namespace spinwehrl::cli
