#pragma once

#include <cstdint>
#include <filesystem>

#include "config.hpp"
#include "ksreg/threebody.hpp"

namespace ksreg::cli {

struct RunContext {
  Config config;
  bool config_given = false;
  std::filesystem::path out;
  std::uint64_t seed = 2024;
};

// Masses are required when a config file is given; otherwise the command defaults apply.
MassConfig masses(const RunContext& ctx, double m0, double m1, double m2);

// Each returns the process exit code; errors propagate as ksreg::Error.
int cmd_verify(const RunContext& ctx);
int cmd_simulate(const RunContext& ctx);
int cmd_portrait(const RunContext& ctx);
int cmd_average(const RunContext& ctx);
int cmd_torsion(const RunContext& ctx);

}  // namespace ksreg::cli
