#include <cmath>

#include "commands.hpp"
#include "ksreg/errors.hpp"
#include "ksreg/secular.hpp"
#include "output.hpp"

namespace ksreg::cli {

int cmd_average(const RunContext& ctx) {
  const auto& c = ctx.config;
  c.restrict_to({"m0", "m1", "m2", "L1", "L2", "G1", "g1", "G2", "g2", "C", "alphas", "nodes", "tolerance"},
                "average");
  const MassConfig m = masses(ctx, 1.0, 0.4, 0.7);
  SecularPoint sp;
  sp.L1 = c.positive("L1", 1.0);
  sp.L2 = c.positive("L2", 1.5);
  sp.G1 = c.number("G1", 0.6);
  sp.g1 = c.number("g1", 0.4);
  sp.G2 = c.positive("G2", 1.2);
  sp.g2 = c.number("g2", 0.3);
  sp.C = c.number("C", 1.5);
  const auto alphas = c.list("alphas", {0.02, 0.01, 0.005});
  const long nodes = c.integer("nodes", 128);
  const double tol = c.positive("tolerance", 1e-6);
  if (nodes < 8) fail(Errc::ConfigInvalid, "nodes must be at least 8");
  if (alphas.size() < 2) fail(Errc::ConfigInvalid, "alphas needs at least two values");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) fail(Errc::ConfigInvalid, "alphas must be positive");
    if (i && !(alphas[i] < alphas[i - 1])) fail(Errc::ConfigInvalid, "alphas must be strictly decreasing");
  }

  const auto geom = geometry_from_secular(sp);
  {
    CsvWriter csv(ctx.out / "average.csv",
                  {"alpha", "even", "odd", "total", "even_over_alpha3", "odd_over_alpha4"},
                  {"1", "energy*length", "energy*length", "energy*length", "energy*length", "energy*length"});
    for (double a : alphas) {
      const auto pa = average_pert_parts(geom, 1.0, a, m, static_cast<int>(nodes));
      csv.row({a, pa.even, pa.odd, pa.total(), pa.even / (a * a * a), pa.odd / (a * a * a * a)});
    }
  }
  const auto ex = alpha_expansion(geom, m, alphas, static_cast<int>(nodes));
  const double closed = f_quad(sp, m);
  const double err = std::abs(ex.quadrupole - closed) / std::abs(closed);
  const bool ok = err <= tol;
  Json summary = {{"command", "average"},
                  {"seed", ctx.seed},
                  {"masses", {m.m0, m.m1, m.m2}},
                  {"point",
                   {{"L1", sp.L1}, {"L2", sp.L2}, {"G1", sp.G1}, {"g1", sp.g1}, {"G2", sp.G2}, {"g2", sp.g2}, {"C", sp.C}}},
                  {"eccentricities", {geom.e1, geom.e2}},
                  {"quadrupole", ex.quadrupole},
                  {"quadrupole_residual", ex.quad_residual},
                  {"f_quad", closed},
                  {"relative_error", err},
                  {"tolerance", tol},
                  {"agrees", ok},
                  {"octupole", ex.octupole},
                  {"octupole_residual", ex.oct_residual}};
  write_json(ctx.out / "expansion.json", summary);
  return ok ? 0 : 1;
}

}  // namespace ksreg::cli
