#include "ksreg/quad_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "ksreg/dop853.hpp"
#include "ksreg/elements.hpp"
#include "ksreg/errors.hpp"

namespace ksreg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

QuadPartials partials(double G1, double g1, const QuadParams& q) {
  return f_quad_partials(G1, g1, q.L1, q.L2, q.C, q.G2, q.mu_quad);
}

// Energy scale mu L2^3 / (8 G2^3).
double energy_scale(const QuadParams& q) {
  return q.mu_quad * q.L2 * q.L2 * q.L2 / (8.0 * q.G2 * q.G2 * q.G2);
}

// Linear frequency at the centres of the cover, used as a time scale.
double linear_frequency(const QuadParams& q) {
  return std::sqrt(360.0) * energy_scale(q) / q.L1;
}

double hessian_det_2d(const std::function<double(double, double)>& f, double x, double y,
                      double hx, double hy) {
  const auto at = [&](double sx, double sy) {
    const double f0 = f(x, y);
    const double fxx = (f(x + sx, y) - 2.0 * f0 + f(x - sx, y)) / (sx * sx);
    const double fyy = (f(x, y + sy) - 2.0 * f0 + f(x, y - sy)) / (sy * sy);
    const double fxy =
        (f(x + sx, y + sy) - f(x + sx, y - sy) - f(x - sx, y + sy) + f(x - sx, y - sy)) /
        (4.0 * sx * sy);
    return std::array<double, 3>{fxx, fyy, fxy};
  };
  const auto a = at(hx, hy), b = at(0.5 * hx, 0.5 * hy);
  std::array<double, 3> r;
  for (int i = 0; i < 3; ++i) r[i] = (4.0 * b[i] - a[i]) / 3.0;
  return r[0] * r[1] - r[2] * r[2];
}

}  // namespace

double QuadParams::G1_max() const { return std::min(L1, C + G2); }

double QuadParams::G1_min() const { return on_cover() ? -G1_max() : std::abs(C - G2); }

PhasePoint cover_symmetry(const PhasePoint& p) { return {-p.G1, kPi - p.g1}; }

double quad_energy(const PhasePoint& p, const QuadParams& q) { return partials(p.G1, p.g1, q).value; }

std::array<double, 2> quad_vector_field(const PhasePoint& p, const QuadParams& q) {
  const auto d = partials(p.G1, p.g1, q);
  return {-d.dg1, d.dG1};
}

double equilibrium_hessian_closed(const QuadParams& q) {
  const double r = q.L2 / q.G2;
  const double r3 = r * r * r;
  return 45.0 / 8.0 * q.mu_quad * q.mu_quad * r3 * r3 / (q.L1 * q.L1);
}

double equilibrium_hessian(const QuadParams& q, double rel_step) {
  QuadParams c = q;
  c.C = c.G2;
  // Central differences of the exact gradient: rounding grows like 1/h instead of 1/h^2.
  const double h = rel_step * c.L1;
  const auto at = [&](double sx, double sy) {
    const auto xp = partials(sx, 0.0, c), xm = partials(-sx, 0.0, c);
    const auto yp = partials(0.0, sy, c), ym = partials(0.0, -sy, c);
    const double fxx = (xp.dG1 - xm.dG1) / (2.0 * sx);
    const double fyy = (yp.dg1 - ym.dg1) / (2.0 * sy);
    const double fxy = 0.5 * ((xp.dg1 - xm.dg1) / (2.0 * sx) + (yp.dG1 - ym.dG1) / (2.0 * sy));
    return std::array<double, 3>{fxx, fyy, fxy};
  };
  const auto a = at(h, rel_step), b = at(0.5 * h, 0.5 * rel_step);
  std::array<double, 3> r;
  for (int i = 0; i < 3; ++i) r[i] = (4.0 * b[i] - a[i]) / 3.0;
  return r[0] * r[1] - r[2] * r[2];
}

OrbitRecord trace_orbit(const PhasePoint& start, const QuadParams& q, const OrbitOptions& opt) {
  const double lo = q.G1_min(), hi = q.G1_max();
  if (!(start.G1 > lo && start.G1 < hi)) fail(Errc::NotClosed, "start outside the chart");
  const double omega = linear_frequency(q);
  const double L1 = q.L1;

  const auto v0 = quad_vector_field(start, q);
  double d0 = v0[0] / L1, d1 = v0[1];
  const double speed = std::hypot(d0, d1);
  if (!(speed > 1e-14 * omega)) fail(Errc::NotClosed, "start at an equilibrium");
  d0 /= speed;
  d1 /= speed;

  // y = (G1, g1, int G1 dg1, int df/dG2 dt, int df/dL1 dt)
  const auto rhs = [&q](double, std::span<const double> y, std::span<double> dy) {
    const auto d = partials(y[0], y[1], q);
    dy[0] = -d.dg1;
    dy[1] = d.dG1;
    dy[2] = y[0] * d.dG1;
    dy[3] = d.dG2;
    dy[4] = d.dL1;
  };
  Dop853::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_steps = opt.max_steps;
  Dop853 solver(rhs, 5, o);
  const std::array<double, 5> y0{start.G1, start.g1, 0.0, 0.0, 0.0};
  solver.reset(0.0, y0);

  const auto offset = [&](std::span<const double> y) {
    return std::array<double, 2>{(y[0] - start.G1) / L1, wrap_pi(y[1] - start.g1)};
  };
  const auto section = [&](double, std::span<const double> y) {
    const auto d = offset(y);
    return d[0] * d0 + d[1] * d1;
  };
  const auto g1_zero = [](double, std::span<const double> y) { return y[0]; };

  OrbitRecord rec;
  rec.start = start;
  rec.energy = quad_energy(start, q);
  if (opt.keep_samples) {
    rec.t.push_back(0.0);
    rec.G1.push_back(start.G1);
    rec.g1.push_back(start.g1);
  }
  const double t_max = opt.max_time > 0.0 ? opt.max_time : 1000.0 * kTwoPi / omega;

  double sig_prev = 0.0, G1_prev = start.G1;
  std::vector<double> y(5);
  try {
    while (solver.step(t_max)) {
      const auto& yn = solver.y();
      if (!(yn[0] > lo && yn[0] < hi)) fail(Errc::NotClosed, "orbit left the chart");
      rec.energy_drift =
          std::max(rec.energy_drift, std::abs(partials(yn[0], yn[1], q).value - rec.energy));
      const double ta = solver.t_prev(), tb = solver.t();

      if (q.on_cover() && ((G1_prev < 0.0) != (yn[0] < 0.0)) && yn[0] != 0.0) {
        const double tc = locate_root(solver, g1_zero, ta, tb, G1_prev, yn[0]);
        solver.dense(tc, y);
        const auto v = quad_vector_field({0.0, y[1]}, q);
        rec.crossings.push_back({tc, y[1], std::atan2(std::abs(v[0]) / L1, std::abs(v[1]))});
      }
      G1_prev = yn[0];

      const double sig = section(tb, yn);
      const auto dn = offset(yn);
      const double dist = std::hypot(dn[0], dn[1]);
      if (sig_prev < 0.0 && sig >= 0.0 && dist < 0.5 * rec.amplitude) {
        const double tc = locate_root(solver, section, ta, tb, sig_prev, sig);
        solver.dense(tc, y);
        // Drop crossings of G1 = 0 recorded after the return.
        while (!rec.crossings.empty() && rec.crossings.back().t > tc) rec.crossings.pop_back();
        const auto dc = offset(y);
        rec.period = tc;
        rec.closure_gap = std::hypot(dc[0], dc[1]) / rec.amplitude;
        rec.winding = static_cast<int>(std::lround((y[1] - start.g1) / kTwoPi));
        rec.flow_integral = y[2];
        rec.mean_dG2 = y[3] / tc;
        rec.mean_dL1 = y[4] / tc;
        if (opt.keep_samples) {
          rec.t.push_back(tc);
          rec.G1.push_back(y[0]);
          rec.g1.push_back(y[1]);
        }
        if (rec.closure_gap > opt.closure_tol) fail(Errc::NotClosed, "return misses the start");
        const double ref = action_reference(rec, q);
        rec.action = std::abs(rec.flow_integral - ref * kTwoPi * rec.winding) / kTwoPi;
        return rec;
      }
      rec.amplitude = std::max(rec.amplitude, dist);
      sig_prev = sig;
      if (opt.keep_samples) {
        rec.t.push_back(tb);
        rec.G1.push_back(yn[0]);
        rec.g1.push_back(yn[1]);
      }
    }
  } catch (const Error& e) {
    if (e.code() == Errc::StepFailure) fail(Errc::NotClosed, e.what());
    throw;
  }
  fail(Errc::NotClosed, "no return within the time budget");
}

PhasePoint quad_flow(const PhasePoint& start, const QuadParams& q, double t, double rtol) {
  const auto rhs = [&q](double, std::span<const double> y, std::span<double> dy) {
    const auto d = partials(y[0], y[1], q);
    dy[0] = -d.dg1;
    dy[1] = d.dG1;
  };
  Dop853::Options o;
  o.rtol = rtol;
  o.atol = 1e-16;
  Dop853 solver(rhs, 2, o);
  const std::array<double, 2> y0{start.G1, start.g1};
  solver.reset(0.0, y0);
  while (solver.step(t)) {
  }
  return {solver.y()[0], solver.y()[1]};
}

double action_reference(const OrbitRecord& o, const QuadParams& q) {
  return (!q.on_cover() && o.winding != 0) ? q.G1_min() : 0.0;
}

SecularFrequencies action_and_frequencies(const OrbitRecord& o, const QuadParams& q) {
  if (!(o.period > 0.0)) fail(Errc::NotClosed, "orbit has no period");
  SecularFrequencies s;
  const double ref = action_reference(o, q);
  const double signed_action = o.flow_integral - ref * kTwoPi * o.winding;
  const double sign = signed_action >= 0.0 ? 1.0 : -1.0;
  const double nu = kTwoPi / o.period;
  s.action = std::abs(signed_action) / kTwoPi;
  s.period = o.period;
  s.energy = o.energy;
  s.dE_dJ = sign * nu;
  // The reference |C - G2| moves with G2 when the orbit winds around the coplanar point.
  const double ref_prime = ref != 0.0 ? (q.C > q.G2 ? -1.0 : 1.0) : 0.0;
  s.dE_dG2 = o.mean_dG2 + nu * o.winding * ref_prime;
  s.dE_dL1 = o.mean_dL1;
  s.dE_dL2 = 3.0 * o.energy / q.L2;
  return s;
}

PhasePoint start_for_action(double J, const QuadParams& q, double g1_start, const OrbitOptions& opt) {
  if (!(J > 0.0)) fail(Errc::NotClosed, "action must be positive");
  const double base = q.on_cover() ? 0.0 : q.G1_min();
  const double span = q.G1_max() - base;
  OrbitOptions o = opt;
  o.keep_samples = false;
  const auto action_at = [&](double d) {
    try {
      return trace_orbit({base + d, g1_start}, q, o).action;
    } catch (const Error& e) {
      if (e.code() == Errc::NotClosed) return std::numeric_limits<double>::infinity();
      throw;
    }
  };
  double a = std::min(J / q.L1 * span, 0.5 * span);
  a = std::max(a, 1e-12 * span);
  double fa = action_at(a) - J;
  double b = a, fb = fa;
  for (int i = 0; i < 200 && fa > 0.0; ++i) {
    b = a;
    fb = fa;
    a *= 0.5;
    fa = action_at(a) - J;
  }
  for (int i = 0; i < 200 && fb <= 0.0; ++i) {
    a = b;
    fa = fb;
    b = std::min(2.0 * b, 0.5 * (b + span));
    fb = action_at(b) - J;
  }
  if (!(fa <= 0.0 && fb > 0.0)) fail(Errc::NotClosed, "no orbit with the requested action");
  if (std::isinf(fb)) {
    // Shrink the upper end until the orbit closes.
    while (std::isinf(fb)) {
      const double m = 0.5 * (a + b);
      const double fm = action_at(m) - J;
      if (fm <= 0.0) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
      if (b - a < 1e-15 * span) break;
    }
  }
  if (fa == 0.0) return {base + a, g1_start};
  std::uintmax_t iters = 100;
  const auto tol = [span](double x, double y) { return std::abs(x - y) <= 1e-15 * span; };
  const auto r = boost::math::tools::toms748_solve([&](double d) { return action_at(d) - J; }, a, b,
                                                   fa, fb, tol, iters);
  return {base + 0.5 * (r.first + r.second), g1_start};
}

TorusData torus_data(const TorusModel& tm, const std::array<double, 4>& x) {
  const MassConfig& m = tm.m;
  const double P0 = x[0], L2 = x[1], J = x[2], G2 = x[3];
  const double f1 = f1_of_L2(L2, tm.f, m);
  if (!(f1 > 0.0)) fail(Errc::ChartDegenerate, "f1 <= 0");
  const double f1p = f1_prime_of_L2(L2, m);
  const double nu1k = std::sqrt(2.0 * f1 / m.mu1);
  const double a1 = P0 / std::sqrt(2.0 * m.mu1 * f1);
  const double a2 = L2 * L2 / (m.mu2 * m.mu2 * m.M2);
  const double alpha = a1 / a2;
  const double L1 = m.mu1 * std::sqrt(m.M1 * a1);
  const QuadParams q{L1, L2, tm.C, G2, m.mu_quad};
  const PhasePoint st = start_for_action(J, q, tm.g1_start, tm.orbit);
  OrbitOptions o = tm.orbit;
  o.keep_samples = false;
  const auto sf = action_and_frequencies(trace_orbit(st, q, o), q);

  const double a3 = alpha * alpha * alpha;
  const double E = sf.energy;
  const double alpha_P0 = alpha / P0;
  const double alpha_L2 = alpha * (-f1p / (2.0 * f1) - 2.0 / L2);
  const double L1_P0 = L1 / (2.0 * P0);
  const double L1_L2 = -L1 * f1p / (4.0 * f1);

  TorusData d;
  d.alpha = alpha;
  d.L1 = L1;
  d.secular = sf;
  d.H = P0 * nu1k - m.mu1 * m.M1 + a3 * E;
  d.nu[0] = nu1k + 3.0 * alpha * alpha * alpha_P0 * E + a3 * sf.dE_dL1 * L1_P0;
  d.nu[1] = P0 * f1p / (m.mu1 * nu1k) + 3.0 * alpha * alpha * alpha_L2 * E +
            a3 * (sf.dE_dL2 + sf.dE_dL1 * L1_L2);
  d.nu[2] = a3 * sf.dE_dJ;
  d.nu[3] = a3 * sf.dE_dG2;
  return d;
}

std::array<double, 4> frequency_map(const TorusModel& tm, const std::array<double, 4>& x) {
  const auto d = torus_data(tm, x);
  return {d.H, d.nu[1] / d.nu[0], d.nu[2] / d.nu[0], d.nu[3] / d.nu[0]};
}

bool JacobianCheck::nonzero() const {
  return std::isfinite(det) && std::isfinite(det_half) && det != 0.0 &&
         std::abs(det) > 100.0 * std::abs(det - det_half);
}

JacobianCheck frequency_jacobian(const TorusModel& tm, const std::array<double, 4>& x,
                                 double rel_step) {
  const auto det_at = [&](double rel) {
    Eigen::Matrix4d Jm;
    for (int j = 0; j < 4; ++j) {
      const double h = rel * std::abs(x[j]);
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const auto fp = frequency_map(tm, xp), fm = frequency_map(tm, xm);
      for (int i = 0; i < 4; ++i) Jm(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return Jm.determinant();
  };
  return {det_at(rel_step), det_at(0.5 * rel_step)};
}

Portrait phase_portrait(const QuadParams& q, const PortraitSpec& spec) {
  if (spec.orbits < 1 || !(spec.max_fraction > 0.0 && spec.max_fraction < 1.0) ||
      spec.bisection_steps < 1)
    fail(Errc::ConfigInvalid, "empty portrait specification");
  const bool cover = q.on_cover();
  const double base = cover ? 0.0 : q.G1_min();
  const double span = q.G1_max() - base;
  OrbitOptions quiet = spec.orbit;
  quiet.keep_samples = false;

  const auto closes = [&](double d) {
    try {
      const auto o = trace_orbit({base + d, 0.0}, q, quiet);
      return cover ? o.winding == 0 : o.winding != 0;
    } catch (const Error& e) {
      if (e.code() == Errc::NotClosed) return false;
      throw;
    }
  };

  Portrait p;
  double a = 1e-3 * span, b = (1.0 - 1e-9) * span;
  if (closes(b)) {
    p.separatrix_start = b;
  } else {
    for (int i = 0; i < spec.bisection_steps; ++i) {
      const double m = 0.5 * (a + b);
      (closes(m) ? a : b) = m;
    }
    p.separatrix_start = 0.5 * (a + b);
  }
  p.separatrix_energy = quad_energy({base + p.separatrix_start, 0.0}, q);

  const double step = spec.max_fraction * p.separatrix_start / spec.orbits;
  for (int k = 1; k <= spec.orbits; ++k) {
    const PhasePoint s{base + k * step, 0.0};
    p.orbits.push_back(trace_orbit(s, q, spec.orbit));
    if (cover) p.mirrored.push_back(trace_orbit(cover_symmetry(s), q, spec.orbit));
  }

  const double h = 1e-3 * std::min(q.L1, q.G2);
  const auto energy = [&](double G1, double g1) { return quad_energy({G1, g1}, q); };
  if (cover) {
    for (double g : {0.0, kPi}) {
      Equilibrium e{{0.0, g}, energy(0.0, g), hessian_det_2d(energy, 0.0, g, h, 1e-3), false, "centre"};
      p.equilibria.push_back(e);
    }
    for (double g : {0.5 * kPi, -0.5 * kPi}) {
      Equilibrium e{{0.0, g}, energy(0.0, g), hessian_det_2d(energy, 0.0, g, h, 1e-3), true,
                    "symmetry-fixed"};
      p.equilibria.push_back(e);
    }
  } else {
    // Coplanar point, in the chart x + iy = sqrt(2 (G1 - G1_min)) exp(i g1).
    const double g0 = q.G1_min();
    const auto cart = [&](double x, double y) {
      return energy(g0 + 0.5 * (x * x + y * y), std::atan2(y, x));
    };
    const double hc = std::sqrt(2.0 * h);
    Equilibrium e{{g0, 0.0}, energy(g0, 0.0), hessian_det_2d(cart, 0.0, 0.0, hc, hc), false,
                  "coplanar"};
    p.equilibria.push_back(e);
  }
  return p;
}

double normalized_w(double alpha, double beta, double delta, double omega) {
  const double D = alpha * alpha - beta * beta - delta * delta;
  const double X = D * D / (4.0 * beta * beta);
  const double s = std::sin(omega);
  return -2.0 * delta * delta + X + 5.0 * (1.0 - delta * delta) * s * s * (X / (delta * delta) - 1.0);
}

double normalized_w_bar(double alpha, double beta, double delta, double omega) {
  return (normalized_w(alpha, beta, delta, omega) + 5.0 / 3.0) / (beta * beta * beta);
}

namespace {

double radicand(double a, double b) {
  return 9.0 * a * a * b - 6.0 * a * b * b + b * b * b - 4.0 * a * a * a + 5.0 * a;
}

}  // namespace

double xi_bar(double alpha, double beta, double omega) {
  if (alpha == beta) fail(Errc::CoincidentMomenta, "alpha == beta");
  const double a = alpha, b = beta;
  const double S = 5.0 * a * ((a - b) * (a - b) - 1.0);
  // R + S cos^2 written as (R + S) - S sin^2 with R + S = (a - b)^2 (a + b).
  const double s = std::sin(omega);
  const double num = (a - b) * (a - b) * (a + b) - S * s * s;
  const double b4 = b * b * b * b;
  return -2.0 * num / (b4 * std::abs(a - b));
}

double frequency_coefficient(double alpha, double beta) {
  const double R = radicand(alpha, beta);
  if (!(R > 0.0) || !(alpha + beta > 0.0)) fail(Errc::DegenerateRadicand, "radicand <= 0");
  const double b4 = beta * beta * beta * beta;
  return -2.0 * std::sqrt(alpha + beta) * std::sqrt(R) / b4;
}

QuadratureResult frequency_coefficient_quadrature(double alpha, double beta) {
  if (!(radicand(alpha, beta) > 0.0)) fail(Errc::DegenerateRadicand, "radicand <= 0");
  if (alpha == beta) fail(Errc::CoincidentMomenta, "alpha == beta");
  const auto inv = [&](double w) { return 1.0 / xi_bar(alpha, beta, w); };
  // Near alpha = beta the integrand peaks at omega = 0, an endpoint where the nodes cluster.
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  // The integrand depends on sin^2 only.
  const double integral = 4.0 * ts.integrate(inv, 0.0, 0.5 * kPi, 1e-14, &err);
  err *= 4.0;
  const double v = kTwoPi / integral;
  return {v, std::abs(v) * err / std::abs(integral)};
}

TorsionResult torsion(double alpha, double beta) {
  if (alpha == beta) fail(Errc::CoincidentMomenta, "alpha == beta, use the limit");
  const auto d = [&](double h) {
    return (frequency_coefficient(alpha, beta + h) - frequency_coefficient(alpha, beta - h)) / (2.0 * h);
  };
  const double der = (4.0 * d(5e-5) - d(1e-4)) / 3.0;
  return {frequency_coefficient(alpha, beta), der * der};
}

double torsion_limit(double beta) {
  const double b2 = beta * beta, b4 = b2 * b2;
  return 1125.0 / (2.0 * b4 * b4);
}

double torsion_limit_estimate(double beta, double eps) {
  const auto mean = [&](double e) {
    return 0.5 * (torsion(beta + e, beta).torsion + torsion(beta - e, beta).torsion);
  };
  return (4.0 * mean(0.5 * eps) - mean(eps)) / 3.0;
}

}  // namespace ksreg
