#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "ksreg/errors.hpp"
#include "ksreg/quad_dynamics.hpp"
#include "ksreg/secular.hpp"
#include "output.hpp"

namespace ksreg::cli {

namespace {

using std::numbers::pi;

struct Check {
  std::string name;
  double measured = 0.0, reference = 0.0, error = 0.0, tolerance = 0.0;
  bool pass = false;
};

Check relative(std::string name, double measured, double reference, double tol) {
  const double err = std::abs(measured - reference) / std::abs(reference);
  return {std::move(name), measured, reference, err, tol, err <= tol};
}

std::string fixed(double x, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

int cmd_verify(const RunContext& ctx) {
  const auto& c = ctx.config;
  c.restrict_to({"m0", "m1", "m2", "points", "alphas", "nodes", "scaling", "fault"}, "verify");
  const MassConfig m = masses(ctx, 1.0, 0.4, 0.7);
  const long points = c.integer("points", 5);
  const long nodes = c.integer("nodes", 128);
  const auto alphas = c.list("alphas", {0.02, 0.01, 0.005});
  const bool scaling = c.boolean("scaling", true);
  const std::string fault = c.text("fault", "none");
  if (points < 1) fail(Errc::ConfigInvalid, "points must be at least 1");
  if (nodes < 8) fail(Errc::ConfigInvalid, "nodes must be at least 8");
  if (alphas.size() < 2) fail(Errc::ConfigInvalid, "alphas needs at least two values");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < 1.0)) fail(Errc::ConfigInvalid, "alphas must lie in (0, 1)");
    if (i && !(alphas[i] < alphas[i - 1])) fail(Errc::ConfigInvalid, "alphas must be strictly decreasing");
  }
  if (fault != "none" && fault != "torsion") fail(Errc::ConfigInvalid, "fault must be none or torsion");

  std::vector<Check> checks;

  // Test hook: a deliberately wrong reference for the torsion limit.
  const double torsion_skew = fault == "torsion" ? 1.0 + 1e-3 : 1.0;
  for (double beta : {0.5, 1.0, 2.0})
    checks.push_back(relative("torsion_limit_beta_" + fixed(beta, 1), torsion_limit_estimate(beta, 1e-4),
                              torsion_limit(beta) * torsion_skew, 1e-6));

  {
    Check worst{"morse_hessian_grid"};
    worst.tolerance = 1e-8;
    for (double L1 : {0.5, 1.0, 2.0})
      for (double G2 : {0.6, 1.0, 1.4}) {
        const QuadParams q{L1, 1.5, G2, G2, m.mu_quad};
        const auto ch = relative("", equilibrium_hessian(q), equilibrium_hessian_closed(q), 1e-8);
        if (ch.error >= worst.error) {
          worst.measured = ch.measured;
          worst.reference = ch.reference;
          worst.error = ch.error;
        }
      }
    worst.pass = worst.error <= worst.tolerance;
    checks.push_back(worst);
  }

  for (double g1 : {0.0, pi / 4, pi / 2}) {
    const double L2 = 1.3, G2 = 0.9, mu = m.mu_quad;
    const SecularPoint sp{0.0, g1, G2, 0.4, 1.1, L2, G2};
    const double cg = std::cos(g1);
    const double expect = -15.0 * mu * L2 * L2 * L2 / (8.0 * std::pow(G2, 4)) * (3.0 - 4.0 * cg * cg);
    const double got = nu_quad2(sp, m);
    const double err = std::abs(got - expect) / std::max(1.0, std::abs(expect));
    checks.push_back({"nu_quad2_g1_" + fixed(g1, 4), got, expect, err, 1e-8, err <= 1e-8});
  }

  {
    std::mt19937_64 gen(ctx.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (long k = 0; k < points; ++k) {
      SecularPoint sp;
      sp.L1 = 1.0;
      sp.L2 = 1.5;
      sp.G2 = sp.L2 * (0.6 + 0.39 * U(gen));
      sp.g1 = 2 * pi * U(gen);
      sp.g2 = 2 * pi * U(gen);
      if (k == 0) {
        sp.C = sp.G2;
        sp.G1 = 0.0;
      } else {
        sp.C = sp.G2 * (0.5 + U(gen));
        const double lo = std::abs(sp.C - sp.G2), hi = std::min(sp.L1, sp.C + sp.G2);
        sp.G1 = lo + (hi - lo) * U(gen);
      }
      const auto ex = alpha_expansion(geometry_from_secular(sp), m, alphas, static_cast<int>(nodes));
      checks.push_back(relative("averaging_point_" + std::to_string(k), ex.quadrupole, f_quad(sp, m), 1e-6));
    }
  }

  {
    const auto eq = MassConfig::from_masses(m.m0, m.m0, m.m2);
    const double oct = alpha_expansion(coplanar_geometry(0.6, 0.4, 1.0, 0.0), eq, alphas, static_cast<int>(nodes)).octupole;
    checks.push_back({"octupole_equal_inner_masses", oct, 0.0, std::abs(oct), 0.0, oct == 0.0});
  }

  if (scaling) {
    const double G1 = std::sqrt(1 - 0.25), G2 = std::sqrt(1 - 0.09);
    const auto geom = geometry_from_secular({G1, 0.4, G2, 0.1, 1.0, 1.0, G2 + 0.5 * G1});
    const auto r = elimination_generator(geom, m);
    const double er = std::abs(r.residual_exponent - 4.5), eg = std::abs(r.generator_exponent - 3.0);
    checks.push_back({"elimination_residual_exponent", r.residual_exponent, 4.5, er, 0.3, er <= 0.3});
    checks.push_back({"generator_amplitude_exponent", r.generator_exponent, 3.0, eg, 0.2, eg <= 0.2});
  }

  bool all = true;
  Json list = Json::array();
  for (const auto& ch : checks) {
    all = all && ch.pass;
    std::printf("%s %-34s measured %-24s reference %-24s error %.3e (tol %.1e)\n", ch.pass ? "PASS" : "FAIL",
                ch.name.c_str(), format_double(ch.measured).c_str(), format_double(ch.reference).c_str(), ch.error,
                ch.tolerance);
    list.push_back({{"name", ch.name},
                    {"pass", ch.pass},
                    {"measured", number(ch.measured)},
                    {"reference", number(ch.reference)},
                    {"error", number(ch.error)},
                    {"tolerance", ch.tolerance}});
  }
  Json report = {{"command", "verify"},
                 {"seed", ctx.seed},
                 {"masses", {m.m0, m.m1, m.m2}},
                 {"fault", fault},
                 {"passed", all},
                 {"checks", list}};
  write_json(ctx.out / "verify.json", report);
  std::printf("%s: %zu checks\n", all ? "ALL PASS" : "FAILURES", checks.size());
  return all ? 0 : 1;
}

}  // namespace ksreg::cli
