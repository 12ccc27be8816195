#include <algorithm>
#include <cmath>
#include <numbers>

#include "commands.hpp"
#include "ksreg/errors.hpp"
#include "ksreg/quad_dynamics.hpp"
#include "output.hpp"

namespace ksreg::cli {

int cmd_portrait(const RunContext& ctx) {
  const auto& c = ctx.config;
  c.restrict_to({"m0", "m1", "m2", "a1", "a2", "e2", "dC", "orbits", "max_fraction", "rtol"}, "portrait");
  const MassConfig m = masses(ctx, 1.0, 0.5, 1.0);
  const double a1 = c.positive("a1", 1.0), a2 = c.positive("a2", 10.0);
  const double e2 = c.number("e2", 0.1), dC = c.number("dC", 0.0);
  if (e2 >= 1.0) fail(Errc::HyperbolicOuter, "outer eccentricity must be below 1");
  if (e2 < 0.0) fail(Errc::ConfigInvalid, "e2 must be non-negative");

  PortraitSpec spec;
  spec.orbits = static_cast<int>(c.integer("orbits", 8));
  spec.max_fraction = c.number("max_fraction", 0.9);
  spec.orbit.rtol = c.positive("rtol", spec.orbit.rtol);
  if (spec.orbits < 1 || !(spec.max_fraction > 0.0 && spec.max_fraction < 1.0))
    fail(Errc::ConfigInvalid, "empty grid: orbits must be positive and max_fraction in (0, 1)");

  QuadParams q;
  q.L1 = m.mu1 * std::sqrt(m.M1 * a1);
  q.L2 = m.mu2 * std::sqrt(m.M2 * a2);
  q.G2 = q.L2 * std::sqrt(1.0 - e2 * e2);
  q.C = dC == 0.0 ? q.G2 : q.G2 + dC * q.L1;
  q.mu_quad = m.mu_quad;
  const auto p = phase_portrait(q, spec);

  {
    CsvWriter csv(ctx.out / "portrait_orbits.csv", {"orbit", "branch", "t", "G1", "g1", "g1_wrapped"},
                  {"1", "1", "time", "action", "rad", "rad"});
    const auto emit = [&](const std::vector<OrbitRecord>& set, int branch) {
      for (std::size_t k = 0; k < set.size(); ++k) {
        const auto& o = set[k];
        for (std::size_t i = 0; i < o.t.size(); ++i)
          csv.row({k, branch, o.t[i], o.G1[i], o.g1[i], std::remainder(o.g1[i], 2 * std::numbers::pi)});
      }
    };
    emit(p.orbits, 0);
    emit(p.mirrored, 1);
  }
  {
    CsvWriter csv(ctx.out / "portrait_summary.csv",
                  {"orbit", "branch", "G1_start", "g1_start", "period", "energy", "energy_drift", "closure_gap",
                   "winding", "action", "crossings", "min_crossing_angle"},
                  {"1", "1", "action", "rad", "time", "energy", "energy", "1", "1", "action", "1", "rad"});
    const auto emit = [&](const std::vector<OrbitRecord>& set, int branch) {
      for (std::size_t k = 0; k < set.size(); ++k) {
        const auto& o = set[k];
        double angle = NAN;
        for (const auto& x : o.crossings) angle = std::isnan(angle) ? x.angle : std::min(angle, x.angle);
        const double action = action_and_frequencies(o, q).action;
        csv.row({k, branch, o.start.G1, o.start.g1, o.period, o.energy, o.energy_drift, o.closure_gap, o.winding,
                 action, o.crossings.size(), angle});
      }
    };
    emit(p.orbits, 0);
    emit(p.mirrored, 1);
  }
  {
    CsvWriter csv(ctx.out / "equilibria.csv", {"G1", "g1", "energy", "hessian_det", "symmetry_fixed", "kind"},
                  {"action", "rad", "energy", "energy^2/action^2", "1", "text"});
    for (const auto& e : p.equilibria)
      csv.row({e.point.G1, e.point.g1, e.energy, e.hessian_det, e.symmetry_fixed ? 1 : 0, std::string(e.kind)});
  }
  Json summary = {{"command", "portrait"},
                  {"seed", ctx.seed},
                  {"masses", {m.m0, m.m1, m.m2}},
                  {"params", {{"L1", q.L1}, {"L2", q.L2}, {"G2", q.G2}, {"C", q.C}, {"mu_quad", q.mu_quad}}},
                  {"on_cover", q.on_cover()},
                  {"G1_range", {q.G1_min(), q.G1_max()}},
                  {"orbits", p.orbits.size()},
                  {"mirrored", p.mirrored.size()},
                  {"equilibria", p.equilibria.size()},
                  {"separatrix_start", number(p.separatrix_start)},
                  {"separatrix_energy", number(p.separatrix_energy)}};
  write_json(ctx.out / "portrait.json", summary);
  return 0;
}

}  // namespace ksreg::cli
