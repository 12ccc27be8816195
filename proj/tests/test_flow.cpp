#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ksreg/dop853.hpp"
#include "ksreg/elements.hpp"
#include "ksreg/errors.hpp"
#include "ksreg/flow.hpp"
#include "oracles.hpp"

using namespace ksreg;
using std::numbers::pi;

namespace {

const MassConfig kMasses = MassConfig::from_masses(1.0, 0.5, 0.8);

RegularizedState lunar_state(double e1, double alpha) {
  KeplerElements in, out;
  in.a = 1.0;
  in.e = e1;
  in.i = 0.4;
  in.node = 0.3;
  in.peri = 1.1;
  in.mean_anomaly = 2.0;
  out.a = 1.0 / alpha;
  out.e = 0.2;
  out.i = 0.1;
  out.node = 1.5;
  out.peri = 0.2;
  out.mean_anomaly = 0.5;
  return state_from_elements(in, out, kMasses);
}

double regularized_value(const FlowVector& y, double f) {
  return eval_regularized(unpack(y, f), kMasses).total();
}

}  // namespace

TEST_CASE("field is the Hamiltonian gradient") {
  oracle::Rng rng(71);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    RegularizedState s;
    s.ks.z = rng.quat(1.0);
    s.ks.w = rng.quat(1.0);
    s.Q2 = rng.vec(1.0).normalized() * rng.uniform(4.0, 8.0);
    s.P2 = rng.vec(0.3);
    s.f = rng.uniform(0.5, 2.0);
    const auto d = hamiltonian_field(s, kMasses);
    const FlowVector y = pack(s);
    std::array<double, 14> grad{};
    for (int i = 0; i < 14; ++i) {
      grad[i] = oracle::derivative(
          [&](double v) {
            FlowVector t = y;
            t[i] = v;
            return regularized_value(t, s.f);
          },
          y[i], 1e-3 * std::max(1.0, std::abs(y[i])));
    }
    std::array<double, 14> field{};
    for (int i = 0; i < 4; ++i) {
      field[i] = d.dw[i] * -1.0;  // -dw = dF/dz
      field[4 + i] = d.dz[i];     //  dz = dF/dw
    }
    for (int i = 0; i < 3; ++i) {
      field[8 + i] = -d.dP2[i];
      field[11 + i] = d.dQ2[i];
    }
    double scale = 0.0;
    for (double g : grad) scale = std::max(scale, std::abs(g));
    for (int i = 0; i < 14; ++i) worst = std::max(worst, std::abs(field[i] - grad[i]) / scale);
    CHECK(d.dt == doctest::Approx(s.ks.z.norm2()));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("field at the collision set") {
  RegularizedState s;
  s.ks.w = Quaternion{0.3, -0.1, 0.2, 0.5};
  s.Q2 = Vec3(5, 1, 0);
  s.P2 = Vec3(0, 0.3, 0);
  const auto d = hamiltonian_field(s, kMasses);
  for (int i = 0; i < 4; ++i) {
    CHECK(d.dz[i] == doctest::Approx(s.ks.w[i] / (4 * kMasses.mu1)));
    CHECK(d.dw[i] == 0.0);
  }
  CHECK(d.dt == 0.0);
  s.Q2 = Vec3::Zero();
  CHECK_THROWS_AS(hamiltonian_field(s, kMasses), Error);
}

TEST_CASE("Keplerian part is four identical oscillators") {
  auto s = lunar_state(0.6, 0.02);
  const double f1 = f1_of_state(s.P2, s.Q2, s.f, kMasses);
  const double om = std::sqrt(2 * f1 / kMasses.mu1) / 2;
  FlowOptions opt;
  opt.perturbation = false;
  opt.record_steps = true;
  const double span = 7.3 * inner_period_tau(s, kMasses);
  const auto tr = integrate(s, kMasses, span, opt);
  const auto end = unpack(tr.final.y, s.f);
  const double c = std::cos(om * span), sn = std::sin(om * span);
  for (int i = 0; i < 4; ++i) {
    const double z = s.ks.z[i] * c + s.ks.w[i] / (4 * kMasses.mu1 * om) * sn;
    const double w = -4 * kMasses.mu1 * om * s.ks.z[i] * sn + s.ks.w[i] * c;
    CHECK(std::abs(end.ks.z[i] - z) <= 1e-10);
    CHECK(std::abs(end.ks.w[i] - w) <= 1e-10);
  }
  const auto I0 = oscillator_amplitudes(s.ks, f1, kMasses);
  const double Itot = I0[0] + I0[1] + I0[2] + I0[3];
  for (const auto& st : tr.steps) {
    const auto u = unpack(st.y, s.f);
    const auto I = oscillator_amplitudes(u.ks, f1_of_state(u.P2, u.Q2, u.f, kMasses), kMasses);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(I[i] - I0[i]) <= 1e-11 * Itot);
  }
}

TEST_CASE("conservation and the energy identity") {
  const auto s = lunar_state(0.5, 0.05);
  FlowOptions opt;
  opt.sample_dtau = inner_period_tau(s, kMasses) / 16;
  const auto tr = integrate(s, kMasses, 100 * inner_period_tau(s, kMasses), opt);
  CHECK(tr.F_drift < 1e-9);
  CHECK(tr.BL_drift < 1e-11);
  CHECK(tr.C_drift < 1e-9);
  for (const auto& smp : tr.samples) {
    const auto u = unpack(smp.y, s.f);
    const double F = eval_F(jacobi_from_regularized(u), kMasses).total();
    CHECK(F == doctest::Approx(-s.f).epsilon(1e-9));
  }
  double prev = -1.0;
  for (const auto& smp : tr.samples) {
    CHECK(smp.t > prev);
    prev = smp.t;
  }
}

TEST_CASE("time change reproduces the physical flow") {
  const auto s = lunar_state(0.5, 0.05);
  FlowOptions opt;
  const auto tr = integrate(s, kMasses, 3 * inner_period_tau(s, kMasses), opt);
  const double t_end = tr.final.t;
  const JacobiState j0 = jacobi_from_regularized(s);
  const auto& m = kMasses;
  const auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    const Vec3 Q1(y[0], y[1], y[2]), P1(y[3], y[4], y[5]), Q2(y[6], y[7], y[8]), P2(y[9], y[10], y[11]);
    const Vec3 a1 = -m.mu1 * m.M1 * Q1 / std::pow(Q1.norm(), 3) - grad_q1_f_pert(Q1, Q2, m);
    const Vec3 a2 = -m.mu2 * m.M2 * Q2 / std::pow(Q2.norm(), 3) - grad_q2_f_pert(Q1, Q2, m);
    for (int i = 0; i < 3; ++i) {
      dy[i] = P1[i] / m.mu1;
      dy[3 + i] = a1[i];
      dy[6 + i] = P2[i] / m.mu2;
      dy[9 + i] = a2[i];
    }
  };
  Dop853::Options o;
  o.rtol = 1e-13;
  o.atol = 1e-15;
  Dop853 phys(rhs, 12, o);
  std::vector<double> y0;
  for (const Vec3* v : {&j0.Q1, &j0.P1, &j0.Q2, &j0.P2})
    for (int i = 0; i < 3; ++i) y0.push_back((*v)[i]);
  phys.reset(0.0, y0);
  while (phys.step(t_end)) {
  }
  const auto jend = jacobi_from_regularized(unpack(tr.final.y, s.f));
  const auto& y = phys.y();
  CHECK((jend.Q1 - Vec3(y[0], y[1], y[2])).norm() <= 1e-8);
  CHECK((jend.P1 - Vec3(y[3], y[4], y[5])).norm() <= 1e-8);
  CHECK((jend.Q2 - Vec3(y[6], y[7], y[8])).norm() <= 1e-8 * jend.Q2.norm());
}

TEST_CASE("collision passages") {
  SUBCASE("rectilinear inner orbit") {
    RegularizedState s;
    s.ks.z = Quaternion{0.6, 0.0, 0.5, -0.2};
    s.Q2 = Vec3(30, 2, 1);
    s.P2 = Vec3(0, 0.2, 0.02);
    s.f = 0.8;
    FlowOptions opt;
    opt.perturbation = false;
    const double T = inner_period_tau(s, kMasses);
    const auto tr = integrate(s, kMasses, 10.2 * T, opt);
    const auto rep = near_collision_events(tr, 1.0);
    CHECK(rep.exact_zero);
    REQUIRE(rep.events.size() == 10);
    for (std::size_t k = 0; k < rep.events.size(); ++k) {
      CHECK(rep.events[k].tau == doctest::Approx((k + 0.5) * T).epsilon(1e-10));
      CHECK(rep.events[k].r <= 1e-20);
    }
  }
  SUBCASE("nearly rectilinear inner orbit") {
    const auto s = lunar_state(1.0 - 1e-4, 0.02);
    FlowOptions opt;
    opt.perturbation = false;
    const auto el = inner_elements_from_ks(s, kMasses);
    const auto tr = integrate(s, kMasses, 3 * inner_period_tau(s, kMasses), opt);
    const auto rep = near_collision_events(tr, el.a1);
    CHECK_FALSE(rep.exact_zero);
    REQUIRE(rep.events.size() >= 2);
    for (const auto& e : rep.events) CHECK(e.r == doctest::Approx(el.a1 * (1 - el.e1)).epsilon(1e-6));
  }
  SUBCASE("invalid starts") {
    auto s = lunar_state(0.5, 0.05);
    CHECK_THROWS_AS(integrate(s, kMasses, 0.0), Error);
    s.ks.w = s.ks.w + Quaternion::i() * s.ks.z;
    CHECK_THROWS_AS(integrate(s, kMasses, 1.0), Error);
  }
}

TEST_CASE("frequency estimation") {
  SUBCASE("two frequencies") {
    const double dt = 0.05;
    std::vector<double> x;
    for (int k = 0; k < 8192; ++k) {
      const double t = k * dt;
      x.push_back(1.0 * std::sin(1.3 * t) + 0.4 * std::cos(2.9 * t + 0.3) + 0.7);
    }
    const auto p = frequency_estimate(x, dt);
    REQUIRE(p.size() >= 2);
    CHECK(p[0].frequency == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(p[1].frequency == doctest::Approx(2.9).epsilon(1e-6));
    CHECK(p[0].amplitude == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(p[1].amplitude == doctest::Approx(0.4).epsilon(1e-4));
  }
  SUBCASE("inner Kepler frequency") {
    const auto s = lunar_state(0.3, 0.02);
    FlowOptions opt;
    opt.perturbation = false;
    const double T = inner_period_tau(s, kMasses);
    opt.sample_dtau = T / 32;
    const auto tr = integrate(s, kMasses, 200 * T, opt);
    std::vector<double> r;
    for (const auto& smp : tr.samples) r.push_back(unpack(smp.y, s.f).ks.z.norm2());
    const auto p = frequency_estimate(r, opt.sample_dtau, 1);
    REQUIRE(p.size() == 1);
    const double f1 = f1_of_state(s.P2, s.Q2, s.f, kMasses);
    CHECK(p[0].frequency == doctest::Approx(std::sqrt(2 * f1 / kMasses.mu1)).epsilon(1e-6));
  }
  SUBCASE("degenerate input") {
    std::vector<double> c(100, 3.0);
    CHECK(frequency_estimate(c, 0.1).empty());
    std::vector<double> s(10, 1.0);
    CHECK_THROWS_AS(frequency_estimate(s, 0.1), Error);
  }
}
