#include <cmath>
#include <string>
#include <vector>

#include "commands.hpp"
#include "ksreg/elements.hpp"
#include "ksreg/errors.hpp"
#include "ksreg/flow.hpp"
#include "output.hpp"

namespace ksreg::cli {

namespace {

KeplerElements read_orbit(const Config& c, int k, double a, double e) {
  const std::string s = std::to_string(k);
  KeplerElements el;
  el.a = c.positive("a" + s, a);
  el.e = c.number("e" + s, e);
  el.i = c.number("incl" + s, k == 1 ? 0.7 : 0.0);
  el.node = c.number("node" + s, k == 1 ? 3.141592653589793 : 0.0);
  el.peri = c.number("peri" + s, k == 1 ? 0.4 : 0.0);
  el.mean_anomaly = c.number("mean" + s, k == 1 ? 0.5 : 1.0);
  if (el.e < 0.0) fail(Errc::ConfigInvalid, "e" + s + " must be non-negative");
  return el;
}

Json peaks_json(const std::vector<Peak>& peaks) {
  Json a = Json::array();
  for (const auto& p : peaks)
    a.push_back({{"frequency", p.frequency}, {"amplitude", p.amplitude}, {"phase", p.phase}, {"residual", p.residual}});
  return a;
}

}  // namespace

int cmd_simulate(const RunContext& ctx) {
  const auto& c = ctx.config;
  c.restrict_to({"m0", "m1", "m2", "a1", "e1", "incl1", "node1", "peri1", "mean1", "a2", "e2", "incl2", "node2",
                 "peri2", "mean2", "periods", "samples_per_period", "rtol", "atol", "collision_threshold",
                 "perturbation"},
                "simulate");
  const MassConfig m = masses(ctx, 1.0, 0.5, 1.0);
  const auto inner = read_orbit(c, 1, 1.0, 0.999);
  const auto outer = read_orbit(c, 2, 10.0, 0.1);
  if (outer.e >= 1.0) fail(Errc::HyperbolicOuter, "outer eccentricity " + format_double(outer.e) + " is not elliptic");
  if (inner.e > 1.0) fail(Errc::EccentricityOutOfRange, "inner eccentricity above 1");
  if (!(outer.a > inner.a)) fail(Errc::ConfigInvalid, "a2 must exceed a1");

  const double periods = c.positive("periods", 1000.0);
  const long per = c.integer("samples_per_period", 16);
  if (per < 1) fail(Errc::ConfigInvalid, "samples_per_period must be at least 1");
  FlowOptions opt;
  opt.rtol = c.positive("rtol", opt.rtol);
  opt.atol = c.positive("atol", opt.atol);
  opt.perturbation = c.boolean("perturbation", true);
  opt.collision_threshold = c.positive("collision_threshold", 1e-2) * inner.a;

  const auto s0 = state_from_elements(inner, outer, m);
  const double T = inner_period_tau(s0, m);
  opt.sample_dtau = T / static_cast<double>(per);
  const auto tr = integrate(s0, m, periods * T, opt);
  const auto rep = near_collision_events(tr, inner.a);

  {
    CsvWriter csv(ctx.out / "trajectory.csv",
                  {"tau", "t", "z0", "z1", "z2", "z3", "w0", "w1", "w2", "w3", "Q2x", "Q2y", "Q2z", "P2x", "P2y",
                   "P2z", "r1", "F", "BL", "Cx", "Cy", "Cz"},
                  {"time/length", "time", "length^1/2", "length^1/2", "length^1/2", "length^1/2",
                   "momentum*length^1/2", "momentum*length^1/2", "momentum*length^1/2", "momentum*length^1/2",
                   "length", "length", "length", "momentum", "momentum", "momentum", "length", "energy*length",
                   "action", "action", "action", "action"});
    for (const auto& sm : tr.samples) {
      const auto& y = sm.y;
      const double r1 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
      csv.row({sm.tau, sm.t, y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], y[8], y[9], y[10], y[11], y[12], y[13],
               r1, sm.F, sm.BL, sm.C.x(), sm.C.y(), sm.C.z()});
    }
  }
  {
    CsvWriter csv(ctx.out / "events.csv", {"tau", "t", "r1", "r1_over_a1"}, {"time/length", "time", "length", "1"});
    for (const auto& e : rep.events) csv.row({e.tau, e.t, e.r, e.r / inner.a});
  }

  Json peaks = Json::array();
  if (tr.samples.size() >= 16) {
    std::vector<double> r1;
    r1.reserve(tr.samples.size());
    for (const auto& sm : tr.samples) {
      const auto& y = sm.y;
      r1.push_back(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
    }
    peaks = peaks_json(frequency_estimate(r1, opt.sample_dtau, 4));
  }
  const double peri0 = inner.a * (1.0 - inner.e);
  Json summary = {{"command", "simulate"},
                  {"seed", ctx.seed},
                  {"masses", {m.m0, m.m1, m.m2}},
                  {"energy_parameter", tr.f},
                  {"inner_period_tau", T},
                  {"tau_span", periods * T},
                  {"t_final", tr.final.t},
                  {"accepted_steps", tr.accepted},
                  {"rejected_steps", tr.rejected},
                  {"samples", tr.samples.size()},
                  {"drift", {{"F", tr.F_drift}, {"BL", tr.BL_drift}, {"C", tr.C_drift}}},
                  {"near_collision",
                   {{"threshold", tr.collision_threshold},
                    {"events", rep.events.size()},
                    {"global_min_r1", number(rep.global.r)},
                    {"global_min_t", number(rep.global.t)},
                    {"global_min_over_initial_pericentre", number(rep.global.r / peri0)},
                    {"exact_zero", rep.exact_zero}}},
                  {"r1_peaks", peaks}};
  write_json(ctx.out / "summary.json", summary);
  return 0;
}

}  // namespace ksreg::cli
