#include "ksreg/threebody.hpp"

#include <cmath>

#include "ksreg/errors.hpp"

namespace ksreg {

MassConfig MassConfig::from_masses(double m0, double m1, double m2) {
  for (double v : {m0, m1, m2}) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(Errc::ConfigInvalid, "masses must be positive and finite");
  }
  MassConfig m;
  m.m0 = m0;
  m.m1 = m1;
  m.m2 = m2;
  m.sigma0 = m0 / (m0 + m1);
  m.sigma1 = m1 / (m0 + m1);
  m.mu1 = m0 * m1 / (m0 + m1);
  m.M1 = m0 + m1;
  m.M2 = m0 + m1 + m2;
  m.mu2 = (m0 + m1) * m2 / m.M2;
  m.mu_quad = m0 * m1 * m2 / (m0 + m1);
  return m;
}

JacobiState jacobi_from_inertial(const InertialState& s, const MassConfig& m) {
  JacobiState j;
  j.Q1 = s.q[1] - s.q[0];
  j.Q2 = s.q[2] - m.sigma0 * s.q[0] - m.sigma1 * s.q[1];
  j.P1 = s.p[1] + m.sigma1 * s.p[2];
  j.P2 = s.p[2];
  return j;
}

InertialState inertial_from_jacobi(const JacobiState& s, const MassConfig& m, const Vec3& P0,
                                   const Vec3& q0) {
  InertialState r;
  r.q[0] = q0;
  r.q[1] = s.Q1 + q0;
  r.q[2] = s.Q2 + m.sigma0 * r.q[0] + m.sigma1 * r.q[1];
  r.p[2] = s.P2;
  r.p[1] = s.P1 - m.sigma1 * s.P2;
  r.p[0] = P0 - r.p[1] - r.p[2];
  return r;
}

double inertial_energy(const InertialState& s, const MassConfig& m) {
  const double mass[3] = {m.m0, m.m1, m.m2};
  double e = 0.0;
  for (int a = 0; a < 3; ++a) e += s.p[a].squaredNorm() / (2.0 * mass[a]);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const double d = (s.q[a] - s.q[b]).norm();
      if (d == 0.0) fail(Errc::CollisionSingular, "coincident bodies");
      e -= mass[a] * mass[b] / d;
    }
  }
  return e;
}

namespace {

struct PertGeometry {
  double x, rho2, r, A, B;
};

PertGeometry pert_geometry(const Vec3& Q1, const Vec3& Q2, const MassConfig& m) {
  PertGeometry g;
  g.x = Q1.dot(Q2);
  g.rho2 = Q1.squaredNorm();
  g.r = Q2.norm();
  g.A = (Q2 - m.sigma0 * Q1).norm();
  g.B = (Q2 + m.sigma1 * Q1).norm();
  if (g.r == 0.0) fail(Errc::OuterCollision, "Q2 = 0");
  if (g.A == 0.0 || g.B == 0.0) fail(Errc::CollisionSingular, "outer body meets an inner body");
  return g;
}

}  // namespace

double f_pert(const Vec3& Q1, const Vec3& Q2, const MassConfig& m) {
  const auto [x, rho2, r, A, B] = pert_geometry(Q1, Q2, m);
  const double s0 = m.sigma0, s1 = m.sigma1;
  const double ra = r * A * (r + A), rb = r * B * (r + B);
  const double b2ma2 = 2.0 * x + (s1 - s0) * rho2;
  // Grouped so that swapping A and B is exact: equal inner masses give an exactly even value.
  const double sum = A + B, prod = A * B;
  const double dipole = 2.0 * x * b2ma2 * (r + sum) / (r * prod * sum * ((r + A) * (r + B)));
  const double s = dipole - rho2 * (s0 / ra + s1 / rb);
  return -m.mu1 * m.m2 * s;
}

double f_pert_naive(const Vec3& Q1, const Vec3& Q2, const MassConfig& m) {
  const auto g = pert_geometry(Q1, Q2, m);
  return -m.mu1 * m.m2 *
         ((1.0 / g.A - 1.0 / g.r) / m.sigma0 + (1.0 / g.B - 1.0 / g.r) / m.sigma1);
}

Vec3 grad_q1_f_pert(const Vec3& Q1, const Vec3& Q2, const MassConfig& m) {
  const auto [x, rho2, r, A, B] = pert_geometry(Q1, Q2, m);
  const double s0 = m.sigma0, s1 = m.sigma1;
  const double A3 = A * A * A, B3 = B * B * B;
  const double bma = (2.0 * x + (s1 - s0) * rho2) / (A + B);
  const double inv_diff = bma * (B * B + A * B + A * A) / (A3 * B3);
  // grad S = Q2 (1/A^3 - 1/B^3) - Q1 (s0/A^3 + s1/B^3)
  const Vec3 gs = Q2 * inv_diff - Q1 * (s0 / A3 + s1 / B3);
  return -m.mu1 * m.m2 * gs;
}

Vec3 grad_q2_f_pert(const Vec3& Q1, const Vec3& Q2, const MassConfig& m) {
  const auto [x, rho2, r, A, B] = pert_geometry(Q1, Q2, m);
  const double s0 = m.sigma0, s1 = m.sigma1;
  const double A3 = A * A * A, B3 = B * B * B, r3 = r * r * r;
  const double bma = (2.0 * x + (s1 - s0) * rho2) / (A + B);
  const double inv_diff = bma * (B * B + A * B + A * A) / (A3 * B3);
  const double ta = (2.0 * x - s0 * rho2) * (r * r + r * A + A * A) / ((r + A) * A3 * r3);
  const double tb = (-2.0 * x - s1 * rho2) * (r * r + r * B + B * B) / ((r + B) * B3 * r3);
  const Vec3 gs = -Q2 * (ta + tb) + Q1 * inv_diff;
  return -m.mu1 * m.m2 * gs;
}

HamiltonianParts eval_F(const JacobiState& s, const MassConfig& m) {
  const double r1 = s.Q1.norm(), r2 = s.Q2.norm();
  if (r1 == 0.0 || r2 == 0.0) fail(Errc::CollisionSingular, "vanishing Jacobi radius");
  HamiltonianParts h;
  h.kepler = s.P1.squaredNorm() / (2.0 * m.mu1) + s.P2.squaredNorm() / (2.0 * m.mu2) -
             m.mu1 * m.M1 / r1 - m.mu2 * m.M2 / r2;
  h.pert = f_pert(s.Q1, s.Q2, m);
  return h;
}

double f1_of_state(const Vec3& P2, const Vec3& Q2, double f, const MassConfig& m) {
  const double r2 = Q2.norm();
  if (r2 == 0.0) fail(Errc::OuterCollision, "Q2 = 0");
  return f + P2.squaredNorm() / (2.0 * m.mu2) - m.mu2 * m.M2 / r2;
}

double f1_of_L2(double L2, double f, const MassConfig& m) {
  const double k = m.mu2 * m.mu2 * m.mu2 * m.M2 * m.M2;
  return f - k / (2.0 * L2 * L2);
}

double f1_prime_of_L2(double L2, const MassConfig& m) {
  const double k = m.mu2 * m.mu2 * m.mu2 * m.M2 * m.M2;
  return k / (L2 * L2 * L2);
}

HamiltonianParts eval_regularized(const RegularizedState& s, const MassConfig& m) {
  const double f1 = f1_of_state(s.P2, s.Q2, s.f, m);
  if (!(f1 > 0.0)) fail(Errc::HyperbolicOuter, "f1 <= 0");
  const double r1 = s.ks.z.norm2();
  HamiltonianParts h;
  h.kepler = s.ks.w.norm2() / (8.0 * m.mu1) + f1 * r1 - m.mu1 * m.M1;
  h.pert = r1 == 0.0 ? 0.0 : r1 * f_pert(hopf(s.ks.z), s.Q2, m);
  return h;
}

JacobiState jacobi_from_regularized(const RegularizedState& s) {
  const CartesianPair c = ks_map(s.ks);
  JacobiState j;
  j.Q1 = c.Q;
  j.P1 = c.P;
  j.Q2 = s.Q2;
  j.P2 = s.P2;
  return j;
}

RegularizedState regularized_from_jacobi(const JacobiState& s, double f) {
  RegularizedState r;
  r.ks = ks_inverse({s.Q1, s.P1});
  r.Q2 = s.Q2;
  r.P2 = s.P2;
  r.f = f;
  return r;
}

Vec3 total_angular_momentum(const RegularizedState& s) {
  return inner_angular_momentum(s.ks) + s.Q2.cross(s.P2);
}

}  // namespace ksreg
