#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ksreg/errors.hpp"

namespace ksreg::cli {

MassConfig masses(const RunContext& ctx, double m0, double m1, double m2) {
  const auto& c = ctx.config;
  if (ctx.config_given) return MassConfig::from_masses(c.required_number("m0"), c.required_number("m1"), c.required_number("m2"));
  return MassConfig::from_masses(m0, m1, m2);
}

}  // namespace ksreg::cli

int main(int argc, char** argv) {
  using namespace ksreg;
  using namespace ksreg::cli;

  CLI::App app{"Regularized lunar three-body toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  std::uint64_t seed = 2024;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "seed for Monte Carlo checks")->capture_default_str();

  const std::map<std::string, std::pair<std::string, std::function<int(const RunContext&)>>> commands{
      {"verify", {"run the numeric checks and write verify.json", cmd_verify}},
      {"simulate", {"integrate the regularized flow; trajectory, events and summary", cmd_simulate}},
      {"portrait", {"phase portrait of the quadrupolar system", cmd_portrait}},
      {"average", {"double average against the closed-form quadrupole", cmd_average}},
      {"torsion", {"frequency coefficient and torsion table", cmd_torsion}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunContext ctx;
    ctx.seed = seed;
    ctx.out = out_dir;
    if (!config_path.empty()) {
      ctx.config = Config::load(config_path);
      ctx.config_given = true;
    }
    std::filesystem::create_directories(ctx.out);
    const auto* sub = app.get_subcommands().front();
    return commands.at(sub->get_name()).second(ctx);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.code() == Errc::ConfigInvalid) return 2;
    return is_physical_domain(e.code()) ? 3 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
