#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "statlab/harness.hpp"
#include "statlab/kernels.hpp"

namespace statlab {

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// prop1, channel, quadratic, remark, theorem1, minnorm, smoothing
const std::vector<std::string>& suite_names();

/// Runs one named suite ("all" is handled by the CLI). Throws ConfigError on unknown names.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace statlab
