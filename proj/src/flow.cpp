#include "ksreg/flow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/FFT>

#include "ksreg/dop853.hpp"
#include "ksreg/errors.hpp"

namespace ksreg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Quaternion quat_at(std::span<const double> y, std::size_t o) { return {y[o], y[o + 1], y[o + 2], y[o + 3]}; }
Vec3 vec_at(std::span<const double> y, std::size_t o) { return {y[o], y[o + 1], y[o + 2]}; }

FlowSample make_sample(double tau, double t, std::span<const double> y, double f, const MassConfig& m,
                       bool pert) {
  FlowSample s;
  s.tau = tau;
  s.t = t;
  std::copy_n(y.begin(), 14, s.y.begin());
  const RegularizedState r = unpack(y, f);
  const auto h = eval_regularized(r, m);
  s.F = pert ? h.total() : h.kepler;
  s.BL = bl_form(r.ks);
  s.C = total_angular_momentum(r);
  return s;
}

}  // namespace

FlowVector pack(const RegularizedState& s) {
  FlowVector y{};
  for (int i = 0; i < 4; ++i) {
    y[i] = s.ks.z[i];
    y[4 + i] = s.ks.w[i];
  }
  for (int i = 0; i < 3; ++i) {
    y[8 + i] = s.Q2[i];
    y[11 + i] = s.P2[i];
  }
  return y;
}

RegularizedState unpack(std::span<const double> y, double f) {
  RegularizedState s;
  s.ks.z = quat_at(y, 0);
  s.ks.w = quat_at(y, 4);
  s.Q2 = vec_at(y, 8);
  s.P2 = vec_at(y, 11);
  s.f = f;
  return s;
}

StateDerivative hamiltonian_field(const RegularizedState& s, const MassConfig& m, bool perturbation) {
  const double r2 = s.Q2.squaredNorm();
  if (!(r2 > 0.0)) fail(Errc::OuterCollision, "Q2 = 0");
  const Quaternion& z = s.ks.z;
  const Quaternion& w = s.ks.w;
  const double rz = z.norm2();
  const double r = std::sqrt(r2);
  const double f1 = f1_of_state(s.P2, s.Q2, s.f, m);

  StateDerivative d;
  d.dz = w * (1.0 / (4.0 * m.mu1));
  Quaternion grad_z = z * (2.0 * f1);
  Vec3 grad_Q2 = rz * m.mu2 * m.M2 / (r2 * r) * s.Q2;
  if (perturbation && rz > 0.0) {
    const Vec3 Q1 = hopf(z);
    const double F = f_pert(Q1, s.Q2, m);
    const Vec3 G = grad_q1_f_pert(Q1, s.Q2, m);
    // d|z|^2 F(Q1(z)) / dz = 2 z F - 2 |z|^2 i z G
    grad_z += z * (2.0 * F) - (Quaternion::i() * z * Quaternion::imaginary(G)) * (2.0 * rz);
    grad_Q2 += rz * grad_q2_f_pert(Q1, s.Q2, m);
  }
  d.dw = grad_z * -1.0;
  d.dQ2 = rz / m.mu2 * s.P2;
  d.dP2 = -grad_Q2;
  d.dt = rz;
  return d;
}

Trajectory integrate(const RegularizedState& s0, const MassConfig& m, double tau_span,
                     const FlowOptions& opt) {
  if (!(tau_span > 0.0)) fail(Errc::ConfigInvalid, "tau span must be positive");
  const double f = s0.f;
  const double f1 = f1_of_state(s0.P2, s0.Q2, f, m);
  if (!(f1 > 0.0)) fail(Errc::HyperbolicOuter, "f1 <= 0");

  Trajectory tr;
  tr.f = f;
  tr.F_scale = m.mu1 * m.M1;
  tr.BL_scale = m.mu1 * m.M1 * std::sqrt(8.0 * m.mu1 / f1);
  if (std::abs(bl_form(s0.ks)) > 1e-12 * tr.BL_scale)
    fail(Errc::ConfigInvalid, "initial state violates BL = 0");

  const bool pert = opt.perturbation;
  const auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    const auto d = hamiltonian_field(unpack(y, f), m, pert);
    for (int i = 0; i < 4; ++i) {
      dy[i] = d.dz[i];
      dy[4 + i] = d.dw[i];
    }
    for (int i = 0; i < 3; ++i) {
      dy[8 + i] = d.dQ2[i];
      dy[11 + i] = d.dP2[i];
    }
    dy[14] = d.dt;
  };
  Dop853::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_steps = opt.max_steps;
  Dop853 solver(rhs, 15, o);
  std::array<double, 15> y0{};
  const FlowVector p0 = pack(s0);
  std::copy(p0.begin(), p0.end(), y0.begin());
  solver.reset(0.0, y0);

  tr.initial = make_sample(0.0, 0.0, y0, f, m, pert);
  const double a1 = m.mu1 * m.M1 / (2.0 * f1);
  tr.collision_threshold = opt.collision_threshold > 0.0 ? opt.collision_threshold : 1e-2 * a1;
  tr.C_scale = tr.initial.C.norm() > 0.0 ? tr.initial.C.norm() : 1.0;
  if (opt.record_steps) tr.steps.push_back(tr.initial);
  if (opt.sample_dtau > 0.0) tr.samples.push_back(tr.initial);

  // Minima of |z|^2 are the - to + crossings of <z, w>.
  const auto zw = [](double, std::span<const double> y) {
    return y[0] * y[4] + y[1] * y[5] + y[2] * y[6] + y[3] * y[7];
  };
  double g_prev = zw(0.0, y0);
  std::vector<double> y(15);
  std::size_t next_sample = 1;

  while (solver.step(tau_span)) {
    const auto& yn = solver.y();
    const double ta = solver.t_prev(), tb = solver.t();
    const double g = zw(tb, yn);
    if (g_prev < 0.0 && g >= 0.0) {
      const double tc = locate_root(solver, zw, ta, tb, g_prev, g);
      solver.dense(tc, y);
      tr.minima.push_back({tc, y[14], y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]});
    }
    g_prev = g;

    if (opt.sample_dtau > 0.0) {
      while (true) {
        const double ts = next_sample * opt.sample_dtau;
        if (ts > tb || ts > tau_span) break;
        solver.dense(ts, y);
        tr.samples.push_back(make_sample(ts, y[14], y, f, m, pert));
        ++next_sample;
      }
    }

    const FlowSample s = make_sample(tb, yn[14], yn, f, m, pert);
    const double dF = std::abs(s.F - tr.initial.F) / tr.F_scale;
    const double dBL = std::abs(s.BL) / tr.BL_scale;
    double dC = 0.0;
    for (int i = 0; i < 3; ++i) dC = std::max(dC, std::abs(s.C[i] - tr.initial.C[i]) / tr.C_scale);
    tr.F_drift = std::max(tr.F_drift, dF);
    tr.BL_drift = std::max(tr.BL_drift, dBL);
    tr.C_drift = std::max(tr.C_drift, dC);
    if (dF > opt.violation_limit || dBL > opt.violation_limit)
      fail(Errc::StepFailure, "constraint violation beyond the limit");
    if (opt.record_steps) tr.steps.push_back(s);
    tr.final = s;
  }
  tr.accepted = solver.accepted_steps();
  tr.rejected = solver.rejected_steps();
  return tr;
}

NearCollisionReport near_collision_events(const Trajectory& traj, double a1) {
  NearCollisionReport r;
  r.global.r = std::numeric_limits<double>::infinity();
  for (const auto& mn : traj.minima) {
    if (mn.r < traj.collision_threshold) r.events.push_back(mn);
    if (mn.r < r.global.r) r.global = mn;
    if (mn.r <= 1e-13 * a1) r.exact_zero = true;
  }
  return r;
}

std::vector<Peak> frequency_estimate(std::span<const double> series, double dt, std::size_t max_peaks,
                                     double rel_floor) {
  const std::size_t n = series.size();
  if (n < 16) fail(Errc::TooShort, "series shorter than 16 samples");
  if (!(dt > 0.0)) fail(Errc::ConfigInvalid, "sample step must be positive");

  std::vector<double> x(series.begin(), series.end());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : x) v -= mean;
  const auto rms = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s / static_cast<double>(n));
  };
  const double rms0 = rms(x);
  std::vector<Peak> peaks;
  if (rms0 <= 1e-14 * std::abs(mean) || rms0 == 0.0) return peaks;

  std::vector<double> hann(n);
  for (std::size_t k = 0; k < n; ++k)
    hann[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n - 1)));
  const double tc = 0.5 * static_cast<double>(n - 1);

  // Windowed spectral power at angular frequency om (time measured from the centre).
  const auto power = [&](const std::vector<double>& v, double om) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double a = om * (static_cast<double>(k) - tc) * dt;
      re += hann[k] * v[k] * std::cos(a);
      im += hann[k] * v[k] * std::sin(a);
    }
    return re * re + im * im;
  };

  // Least-squares amplitudes of all found frequencies; returns the residual series.
  std::vector<double> freqs;
  std::vector<std::array<double, 2>> coef;
  const auto fit = [&]() {
    const std::size_t p = freqs.size();
    Eigen::MatrixXd A(n, 2 * p);
    Eigen::VectorXd b(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = (static_cast<double>(k) - tc) * dt;
      for (std::size_t j = 0; j < p; ++j) {
        A(k, 2 * j) = std::cos(freqs[j] * t);
        A(k, 2 * j + 1) = std::sin(freqs[j] * t);
      }
      b(k) = x[k];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    coef.assign(p, {});
    std::vector<double> res(n);
    for (std::size_t j = 0; j < p; ++j) coef[j] = {c(2 * j), c(2 * j + 1)};
    const Eigen::VectorXd rv = b - A * c;
    for (std::size_t k = 0; k < n; ++k) res[k] = rv(k);
    return res;
  };
  // Series with every peak except j removed.
  const auto without_others = [&](std::size_t j) {
    std::vector<double> v = x;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      if (i == j) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const double t = (static_cast<double>(k) - tc) * dt;
        v[k] -= coef[i][0] * std::cos(freqs[i] * t) + coef[i][1] * std::sin(freqs[i] * t);
      }
    }
    return v;
  };
  const double bin = kTwoPi / (static_cast<double>(n) * dt);
  const auto refine = [&](const std::vector<double>& v, double om) {
    const auto r = boost::math::tools::brent_find_minima(
        [&](double w) { return -power(v, w); }, std::max(0.0, om - bin), om + bin, 52);
    return r.first;
  };

  Eigen::FFT<double> fft;
  std::vector<double> residual = x;
  while (peaks.size() < max_peaks) {
    std::vector<double> wv(n);
    for (std::size_t k = 0; k < n; ++k) wv[k] = hann[k] * residual[k];
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, wv);
    std::size_t best = 1;
    for (std::size_t k = 1; k <= n / 2; ++k)
      if (std::norm(spec[k]) > std::norm(spec[best])) best = k;
    const double om = refine(residual, bin * static_cast<double>(best));
    freqs.push_back(om);
    residual = fit();
    // Re-refine every frequency against the series with the others removed.
    for (int sweep = 0; sweep < 3; ++sweep) {
      for (std::size_t j = 0; j < freqs.size(); ++j) freqs[j] = refine(without_others(j), freqs[j]);
      residual = fit();
    }
    const std::size_t j = freqs.size() - 1;
    const double amp = std::hypot(coef[j][0], coef[j][1]);
    if (amp < rel_floor * rms0) {
      freqs.pop_back();
      residual = freqs.empty() ? x : fit();
      break;
    }
    peaks.clear();
    const double res_rms = rms(residual);
    for (std::size_t i = 0; i < freqs.size(); ++i)
      peaks.push_back({freqs[i], std::hypot(coef[i][0], coef[i][1]),
                       std::atan2(-coef[i][1], coef[i][0]), res_rms});
    if (res_rms <= rel_floor * rms0) break;
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.amplitude > b.amplitude; });
  return peaks;
}

RegularizedState state_from_elements(const KeplerElements& inner, const KeplerElements& outer,
                                     const MassConfig& m) {
  const CartesianPair c1 = state_from_elements(inner, m.mu1, m.mu1 * m.M1);
  const CartesianPair c2 = state_from_elements(outer, m.mu2, m.mu2 * m.M2);
  JacobiState j;
  j.Q1 = c1.Q;
  j.P1 = c1.P;
  j.Q2 = c2.Q;
  j.P2 = c2.P;
  const double F = eval_F(j, m).total();
  return regularized_from_jacobi(j, -F);
}

namespace {

CartesianPair kepler_state(double a, double e, const Vec3& P, const Vec3& Q, double l, double mu,
                           double k) {
  const double u = solve_kepler(l, e);
  const double b = std::sqrt(std::max(0.0, 1.0 - e * e));
  const double c = std::cos(u), s = std::sin(u);
  const double n = std::sqrt(k / (mu * a * a * a));
  const double ud = n / (1.0 - e * c);
  CartesianPair r;
  r.Q = a * ((c - e) * P + b * s * Q);
  r.P = mu * a * ud * (-s * P + b * c * Q);
  return r;
}

}  // namespace

RegularizedState state_from_secular(const SecularPoint& sp, double l1, double l2, const MassConfig& m) {
  const EllipsePair g = geometry_from_secular(sp);
  const double a1 = sp.L1 * sp.L1 / (m.mu1 * m.mu1 * m.M1);
  const double a2 = sp.L2 * sp.L2 / (m.mu2 * m.mu2 * m.M2);
  const CartesianPair c1 = kepler_state(a1, g.e1, g.P1, g.Q1, l1, m.mu1, m.mu1 * m.M1);
  const CartesianPair c2 = kepler_state(a2, g.e2, g.P2, g.Q2, l2, m.mu2, m.mu2 * m.M2);
  JacobiState j;
  j.Q1 = c1.Q;
  j.P1 = c1.P;
  j.Q2 = c2.Q;
  j.P2 = c2.P;
  const double F = eval_F(j, m).total();
  return regularized_from_jacobi(j, -F);
}

double inner_period_tau(const RegularizedState& s, const MassConfig& m) {
  const double f1 = f1_of_state(s.P2, s.Q2, s.f, m);
  if (!(f1 > 0.0)) fail(Errc::HyperbolicOuter, "f1 <= 0");
  return kTwoPi / std::sqrt(2.0 * f1 / m.mu1);
}

}  // namespace ksreg
