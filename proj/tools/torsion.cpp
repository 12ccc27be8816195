#include <cmath>

#include "commands.hpp"
#include "ksreg/errors.hpp"
#include "ksreg/quad_dynamics.hpp"
#include "output.hpp"

namespace ksreg::cli {

int cmd_torsion(const RunContext& ctx) {
  const auto& c = ctx.config;
  c.restrict_to({"alphas", "betas", "agreement_tol", "limit_tol", "eps"}, "torsion");
  const auto alphas = c.list("alphas", {0.5, 1.0, 1.5, 2.0});
  const auto betas = c.list("betas", {0.5, 1.0, 2.0});
  const double agree_tol = c.positive("agreement_tol", 1e-10);
  const double limit_tol = c.positive("limit_tol", 1e-6);
  const double eps = c.positive("eps", 1e-4);
  if (alphas.empty() || betas.empty()) fail(Errc::ConfigInvalid, "empty alpha or beta grid");
  for (double a : alphas)
    if (!(a > 0.0)) fail(Errc::ConfigInvalid, "alphas must be positive");
  for (double b : betas)
    if (!(b > 0.0)) fail(Errc::ConfigInvalid, "betas must be positive");

  CsvWriter csv(ctx.out / "torsion.csv",
                {"alpha", "beta", "status", "coefficient_closed", "coefficient_quadrature", "quadrature_error",
                 "agreement", "torsion", "limit_closed", "limit_estimate", "limit_rel_error"},
                {"1", "1", "text", "1", "1", "1", "1", "1", "1", "1", "1"});
  int rows = 0, disagreements = 0, limit_failures = 0, degenerate = 0;
  for (double a : alphas)
    for (double b : betas) {
      ++rows;
      if (a == b) {
        const double lim = torsion_limit(b), est = torsion_limit_estimate(b, eps);
        const double err = std::abs(est - lim) / lim;
        if (!(err <= limit_tol)) ++limit_failures;
        csv.row({a, b, "limit", frequency_coefficient(a, b), NAN, NAN, NAN, NAN, lim, est, err});
        continue;
      }
      try {
        const double closed = frequency_coefficient(a, b);
        const auto quad = frequency_coefficient_quadrature(a, b);
        const bool agree = std::abs(quad.value - closed) <= agree_tol * std::abs(closed);
        if (!agree) ++disagreements;
        csv.row({a, b, "ok", closed, quad.value, quad.error, agree ? 1 : 0, torsion(a, b).torsion, NAN, NAN, NAN});
      } catch (const Error& e) {
        if (e.code() != Errc::DegenerateRadicand) throw;
        ++degenerate;
        csv.row({a, b, "degenerate", NAN, NAN, NAN, NAN, NAN, NAN, NAN, NAN});
      }
    }
  Json summary = {{"command", "torsion"},
                  {"seed", ctx.seed},
                  {"rows", rows},
                  {"degenerate_rows", degenerate},
                  {"disagreements", disagreements},
                  {"limit_failures", limit_failures},
                  {"agreement_tol", agree_tol},
                  {"limit_tol", limit_tol}};
  write_json(ctx.out / "torsion.json", summary);
  return disagreements == 0 && limit_failures == 0 ? 0 : 1;
}

}  // namespace ksreg::cli
