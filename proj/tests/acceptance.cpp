// One PASS/FAIL line per acceptance criterion, each with its measured value and wall time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ksreg/elements.hpp"
#include "ksreg/errors.hpp"
#include "ksreg/flow.hpp"
#include "ksreg/legendre.hpp"
#include "ksreg/quad_dynamics.hpp"
#include "ksreg/secular.hpp"

using namespace ksreg;
using std::numbers::pi;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int failures = 0;

void run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %-32s %s; time %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), dt, limit_s, in_time ? "" : " exceeded");
  std::fflush(stdout);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1
Outcome torsion_limit_check() {
  double worst = 0.0;
  for (double beta : {0.5, 1.0, 2.0}) worst = std::max(worst, rel(torsion_limit_estimate(beta, 1e-4), torsion_limit(beta)));
  return {worst < 1e-6, fmt("max rel error %.2e (tol 1e-6)", worst)};
}

// 2
Outcome morse_hessian_check() {
  double worst = 0.0;
  for (double L1 : {0.5, 1.0, 2.0})
    for (double G2 : {0.6, 1.0, 1.4}) {
      const QuadParams q{L1, 1.5, G2, G2, 0.7};
      worst = std::max(worst, rel(equilibrium_hessian(q), equilibrium_hessian_closed(q)));
    }
  return {worst < 1e-8, fmt("max rel error %.2e over 3x3 grid (tol 1e-8)", worst)};
}

// 3
Outcome frequency_spot_check() {
  double worst = 0.0;
  for (double g1 : {0.0, pi / 4, pi / 2})
    for (double G2 : {0.8, 1.0}) {
      const double mu = 0.9, L2 = 1.3;
      const SecularPoint sp{0.0, g1, G2, 0.4, 1.1, L2, G2};
      const double c = std::cos(g1);
      const double expect = -15.0 * mu * L2 * L2 * L2 / (8.0 * std::pow(G2, 4)) * (3.0 - 4.0 * c * c);
      worst = std::max(worst, std::abs(nu_quad2(sp, mu) - expect) / std::max(1.0, std::abs(expect)));
    }
  return {worst < 1e-8, fmt("max error %.2e (tol 1e-8)", worst)};
}

// 4
Outcome quadrupolar_oracle_check() {
  const auto m = MassConfig::from_masses(1.0, 0.4, 0.7);
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::vector<double> alphas{0.02, 0.01, 0.005};
  double worst = 0.0;
  int degenerate = 0;
  for (int k = 0; k < 20; ++k) {
    SecularPoint sp;
    sp.L1 = 1.0;
    sp.L2 = 1.5;
    sp.G2 = sp.L2 * (0.6 + 0.39 * U(gen));
    sp.g1 = 2 * pi * U(gen);
    sp.g2 = 2 * pi * U(gen);
    if (k < 4) {
      // e1 = 1 on the double cover
      sp.C = sp.G2;
      sp.G1 = 0.0;
      ++degenerate;
    } else {
      sp.C = sp.G2 * (0.5 + U(gen));
      const double lo = std::abs(sp.C - sp.G2), hi = std::min(sp.L1, sp.C + sp.G2);
      sp.G1 = lo + (hi - lo) * U(gen);
    }
    const auto ex = alpha_expansion(geometry_from_secular(sp), m, alphas, 128);
    worst = std::max(worst, rel(ex.quadrupole, f_quad(sp, m)));
  }
  return {worst < 1e-6 && degenerate > 0, fmt("max rel error %.2e at 20 points, %.0f with e1 = 1 (tol 1e-6)", worst, degenerate)};
}

// 5
Outcome octupolar_shape_check() {
  const auto m = MassConfig::from_masses(1.0, 0.4, 0.7);
  const std::vector<double> alphas{0.02, 0.01, 0.005};
  std::vector<double> num, ref;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 8; ++c) {
        const double e1 = 0.25 * a, e2 = 0.15 * b, dg = c * pi / 4;
        const auto ex = alpha_expansion(coplanar_geometry(e1, e2, dg, 0.0), m, alphas, 128);
        num.push_back(ex.octupole);
        ref.push_back(octupolar_coplanar(e1, e2, dg));
      }
  double sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sxy += num[i] * ref[i];
    syy += ref[i] * ref[i];
  }
  const double k = sxy / syy;
  double res = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    res = std::max(res, std::abs(num[i] - k * ref[i]));
    scale = std::max(scale, std::abs(k * ref[i]));
  }
  const double relres = res / scale;
  const auto eq = MassConfig::from_masses(0.8, 0.8, 0.7);
  double eq_max = 0.0;
  for (double e1 : {0.3, 1.0})
    for (double dg : {0.0, 1.0})
      eq_max = std::max(eq_max, std::abs(alpha_expansion(coplanar_geometry(e1, 0.45, dg, 0.0), eq, alphas, 128).octupole));
  return {relres < 1e-4 && eq_max == 0.0,
          fmt("fitted constant %.10g, rel residual %.2e (tol 1e-4), equal-mass max |coef| %.1e", k, relres, eq_max)};
}

// 6
Outcome elimination_scaling_check() {
  const auto m = MassConfig::from_masses(1.0, 0.4, 0.7);
  bool ok = true;
  std::string d;
  for (double e1 : {0.5, 1.0 - 1e-3}) {
    const double G1 = std::sqrt(1 - e1 * e1), G2 = std::sqrt(1 - 0.3 * 0.3);
    const auto geom = geometry_from_secular({G1, 0.4, G2, 0.1, 1.0, 1.0, G2 + 0.5 * G1});
    const auto r = elimination_generator(geom, m);
    ok = ok && std::abs(r.residual_exponent - 4.5) <= 0.3 && std::abs(r.generator_exponent - 3.0) <= 0.2;
    d += fmt("e1=%.3f: residual exp %.3f, generator exp %.3f; ", e1, r.residual_exponent, r.generator_exponent);
  }
  return {ok, d + "tol 4.5+-0.3, 3.0+-0.2"};
}

// 7
Outcome regularization_identity_check() {
  const auto m = MassConfig::from_masses(1.0, 0.3, 0.8);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto vec = [&](double s) { return Vec3(s * U(gen), s * U(gen), s * U(gen)); };
  double worst_id = 0.0, worst_zero = 0.0;
  for (int n = 0; n < 1000; ++n) {
    JacobiState j;
    j.Q1 = vec(1.0);
    j.P1 = vec(0.5);
    j.Q2 = vec(1.0).normalized() * (8.0 + 2.0 * U(gen));
    j.P2 = vec(0.3);
    const double f = 1.0 + 0.5 * U(gen);
    const auto s = regularized_from_jacobi(j, f);
    if (std::abs(bl_form(s.ks)) > 1e-14) return {false, "KS lift off the BL = 0 set"};
    const auto h = eval_F(j, m);
    const double expect = j.Q1.norm() * (h.total() + f);
    const double scale = j.Q1.norm() * (std::abs(h.kepler) + std::abs(h.pert) + f);
    worst_id = std::max(worst_id, std::abs(eval_regularized(s, m).total() - expect) / scale);
    const auto z = regularized_from_jacobi(j, -h.total());
    const JacobiState back = jacobi_from_regularized(z);
    const double F = eval_F(back, m).total();
    // Roundoff scale: the size of the individual energy terms.
    const double terms = back.P1.squaredNorm() / (2 * m.mu1) + m.mu1 * m.M1 / back.Q1.norm() +
                         back.P2.squaredNorm() / (2 * m.mu2) + m.mu2 * m.M2 / back.Q2.norm() +
                         std::abs(h.pert);
    worst_zero = std::max(worst_zero, std::abs(F + z.f) / terms);
  }
  RegularizedState c;
  c.ks.w = Quaternion{0.2, 0.1, -0.3, 0.4};
  c.Q2 = Vec3(6, 1, 0);
  c.P2 = Vec3(0, 0.2, 0);
  const double at_zero = eval_regularized(c, m).total();
  const bool ok = worst_id < 1e-12 && worst_zero < 1e-14 && std::isfinite(at_zero);
  return {ok, fmt("identity max rel %.2e (tol 1e-12); F + f max %.2e of the energy terms (tol 1e-14); value at z = 0: %.6g", worst_id, worst_zero, at_zero)};
}

// 8
Outcome conservation_check() {
  const auto m = MassConfig::from_masses(1.0, 0.5, 0.8);
  KeplerElements in, out;
  in.a = 1.0;
  in.e = 0.6;
  in.i = 0.5;
  in.node = 0.3;
  in.peri = 1.1;
  in.mean_anomaly = 2.0;
  out.a = 20.0;
  out.e = 0.2;
  out.i = 0.1;
  out.node = 1.5;
  out.peri = 0.2;
  out.mean_anomaly = 0.5;
  const auto s = state_from_elements(in, out, m);
  const auto tr = integrate(s, m, 1000.0 * inner_period_tau(s, m));
  const bool ok = tr.F_drift < 1e-9 && tr.BL_drift < 1e-9 && tr.C_drift < 1e-9;
  return {ok, fmt("drift F %.2e, BL %.2e, C %.2e over 1000 inner periods (tol 1e-9)", tr.F_drift, tr.BL_drift, tr.C_drift)};
}

// 9
Outcome portrait_check() {
  const auto m = MassConfig::from_masses(1.0, 0.5, 1.0);
  const double L1 = m.mu1 * std::sqrt(m.M1 * 1.0), L2 = m.mu2 * std::sqrt(m.M2 * 10.0);
  const double G2 = L2 * std::sqrt(1 - 0.1 * 0.1);
  const QuadParams q{L1, L2, G2, G2, m.mu_quad};
  PortraitSpec spec;
  spec.orbits = 12;
  const auto p = phase_portrait(q, spec);
  double gap = 0.0, sym = 0.0, min_angle = pi;
  std::size_t crossings = 0;
  for (std::size_t k = 0; k < p.orbits.size(); ++k) {
    const auto& a = p.orbits[k];
    const auto& b = p.mirrored[k];
    gap = std::max({gap, a.closure_gap, b.closure_gap});
    sym = std::max(sym, std::abs(a.energy - b.energy) / std::abs(a.energy));
    sym = std::max(sym, std::abs(a.period - b.period) / a.period);
    // Points of the mirrored orbit are images of points of the first one.
    for (std::size_t i = 0; i < b.t.size(); i += std::max<std::size_t>(1, b.t.size() / 7)) {
      const auto img = cover_symmetry(quad_flow(a.start, q, b.t[i]));
      sym = std::max(sym, std::abs(img.G1 - b.G1[i]) / L1);
      sym = std::max(sym, std::abs(wrap_pi(img.g1 - b.g1[i])));
    }
    for (const auto* o : {&a, &b})
      for (const auto& c : o->crossings) {
        min_angle = std::min(min_angle, c.angle);
        ++crossings;
      }
  }
  const double threshold = 0.1;
  const bool ok = gap < 1e-8 && sym < 1e-8 && crossings >= 2 * 2 * p.orbits.size() && min_angle > threshold;
  return {ok, fmt("max closure gap %.2e, symmetry defect %.2e, min crossing angle %.4f rad", gap, sym, min_angle) +
                  fmt(" (threshold %.1f) over %.0f crossings", threshold, static_cast<double>(crossings))};
}

// 10
Outcome almost_collision_check() {
  const auto m = MassConfig::from_masses(1.0, 0.5, 1.0);
  const double a1 = 1.0, a2 = 10.0, e1 = 1.0 - 1e-3, e2 = 0.1;
  const double L1 = m.mu1 * std::sqrt(m.M1 * a1), L2 = m.mu2 * std::sqrt(m.M2 * a2);
  SecularPoint sp{L1 * std::sqrt(1 - e1 * e1), 0.7, L2 * std::sqrt(1 - e2 * e2), 0.0, L1, L2, 0.0};
  sp.C = sp.G2;
  const auto s = state_from_secular(sp, 0.5, 1.0, m);
  const auto el = inner_elements_from_ks(s, m);
  const double peri = el.a1 * (1.0 - el.e1);
  const auto tr = integrate(s, m, 20000.0 * inner_period_tau(s, m));
  const auto rep = near_collision_events(tr, el.a1);
  const double ratio = rep.global.r / peri;
  const bool ok = ratio < 0.1 && !rep.exact_zero && rep.global.r > 0.0;
  return {ok, fmt("min |Q1| / initial pericentre %.3e at t = %.4g, exact zero: %.0f", ratio, rep.global.t, rep.exact_zero ? 1.0 : 0.0)};
}

// 11
Outcome legendre_bound_check() {
  const auto m = MassConfig::from_masses(1.0, 0.4, 0.7);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto dir = [&] {
    const double c = 2 * U(gen) - 1, ph = 2 * pi * U(gen), s = std::sqrt(1 - c * c);
    return Vec3(s * std::cos(ph), s * std::sin(ph), c);
  };
  const double e2max = 0.3;
  int series_ok = 0, bound_ok = 0;
  double worst_ratio = 0.0, worst_series = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double alpha = 0.005 + 0.025 * U(gen);
    const double a1 = 1.0, a2 = a1 / alpha;
    JacobiState s;
    s.Q1 = dir() * (2.0 * a1 * U(gen));
    s.Q2 = dir() * (a2 * (1.0 - e2max + 2.0 * e2max * U(gen)));
    const auto r = pert_series(s, m, 12);
    const double pert = s.Q1.norm() * f_pert(s.Q1, s.Q2, m);
    const double err = std::abs(pert - r.value);
    if (err <= r.bound()) ++series_ok;
    worst_series = std::max(worst_series, r.bound() > 0.0 ? err / r.bound() : 0.0);
    const double b = pert_bound(alpha, e2max, m);
    if (std::abs(pert) <= b) ++bound_ok;
    worst_ratio = std::max(worst_ratio, std::abs(pert) / b);
  }
  return {series_ok == 1000 && bound_ok == 1000,
          fmt("series within bound %.0f/1000 (max err/bound %.2e), cubic bound %.0f/1000", series_ok, worst_series, bound_ok) +
              fmt(" (max ratio %.2e)", worst_ratio)};
}

// 12
Outcome nondegeneracy_check() {
  const auto m = MassConfig::from_masses(1.0, 0.3, 1.0);
  int bordered_ok = 0, bordered_total = 0;
  double min_margin = INFINITY;
  for (double alpha : {0.02, 0.05, 0.1})
    for (double a1 : {0.5, 1.0, 2.0}) {
      const double a2 = a1 / alpha;
      const double f = m.mu1 * m.M1 / (2 * a1) + m.mu2 * m.M2 / (2 * a2);
      const double L2 = m.mu2 * std::sqrt(m.M2 * a2);
      const double P0 = a1 * std::sqrt(2 * m.mu1 * f1_of_L2(L2, f, m));
      const std::vector<double> x{P0, L2};
      const auto K = [&](std::span<const double> v) { return kepler_energy_regular(v[0], v[1], f, m); };
      const double d1 = bordered_hessian(K, x, 1e-3), d2 = bordered_hessian(K, x, 5e-4);
      ++bordered_total;
      const double margin = std::abs(d2) / std::max(std::abs(d1 - d2), 1e-300);
      min_margin = std::min(min_margin, margin);
      if (d2 != 0.0 && margin > 100.0) ++bordered_ok;
    }

  int tori_ok = 0, tori_total = 0;
  double min_det = INFINITY;
  for (double dC : {0.05, 0.1})
    for (double j : {0.005, 0.01}) {
      TorusModel tm;
      tm.m = m;
      const double a1 = 1.0, alpha = 0.05, a2 = a1 / alpha, e2 = 0.3;
      const double L2 = m.mu2 * std::sqrt(m.M2 * a2), G2 = L2 * std::sqrt(1 - e2 * e2);
      const double L1 = m.mu1 * std::sqrt(m.M1 * a1);
      tm.f = m.mu1 * m.M1 / (2 * a1) + m.mu2 * m.M2 / (2 * a2);
      tm.C = G2 + dC * L1;
      const double P0 = a1 * std::sqrt(2 * m.mu1 * f1_of_L2(L2, tm.f, m));
      const auto jac = frequency_jacobian(tm, {P0, L2, j * L1, G2});
      ++tori_total;
      if (jac.nonzero()) ++tori_ok;
      min_det = std::min(min_det, std::abs(jac.det));
    }
  return {bordered_ok == bordered_total && tori_ok == tori_total,
          fmt("bordered Hessian nonzero %.0f/%.0f (min signal/error %.2e)", bordered_ok, bordered_total, min_margin) +
              fmt(", frequency-map Jacobian nonzero %.0f/%.0f (min |det| %.3e)", tori_ok, tori_total, min_det)};
}

}  // namespace

int main() {
  run(1, "torsion limit", 1, torsion_limit_check);
  run(2, "Morse Hessian", 1, morse_hessian_check);
  run(3, "frequency spot value", 1, frequency_spot_check);
  run(4, "quadrupolar oracle", 60, quadrupolar_oracle_check);
  run(5, "octupolar shape", 120, octupolar_shape_check);
  run(6, "averaging-order scaling", 120, elimination_scaling_check);
  run(7, "regularization identities", 1, regularization_identity_check);
  run(8, "conservation suite", 60, conservation_check);
  run(9, "portrait topology", 60, portrait_check);
  run(10, "almost-collision demonstration", 300, almost_collision_check);
  run(11, "Legendre bound", 10, legendre_bound_check);
  run(12, "iso-energetic non-degeneracy", 30, nondegeneracy_check);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
