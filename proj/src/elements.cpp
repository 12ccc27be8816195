#include "ksreg/elements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ksreg/errors.hpp"

namespace ksreg {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double wrap_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_pi(double a) {
  double r = wrap_2pi(a + kPi) - kPi;
  return r;
}

double solve_kepler(double l, double e) {
  if (!(e >= 0.0 && e < 1.0)) fail(Errc::EccentricityOutOfRange, "Kepler equation needs 0 <= e < 1");
  const double lr = wrap_pi(l);
  const double shift = l - lr;
  double lo = -kPi, hi = kPi;
  double u = lr + e * std::sin(lr);
  for (int it = 0; it < 100; ++it) {
    const double g = u - e * std::sin(u) - lr;
    if (g == 0.0) break;
    if (g < 0.0) lo = u; else hi = u;
    double next = u - g / (1.0 - e * std::cos(u));
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double du = next - u;
    u = next;
    if (std::abs(du) <= 4e-16 * (1.0 + std::abs(u))) break;
  }
  return u + shift;
}

Eigen::Matrix3d orbit_frame(double node, double incl, double peri) {
  const double cO = std::cos(node), sO = std::sin(node);
  const double ci = std::cos(incl), si = std::sin(incl);
  const double cw = std::cos(peri), sw = std::sin(peri);
  Eigen::Matrix3d R;
  R << cO * cw - sO * ci * sw, -cO * sw - sO * ci * cw, sO * si,
       sO * cw + cO * ci * sw, -sO * sw + cO * ci * cw, -cO * si,
       si * sw, si * cw, ci;
  return R;
}

CartesianPair state_from_elements(const KeplerElements& el, double mu, double k) {
  const double gm = k / mu;
  const double u = solve_kepler(el.mean_anomaly, el.e);
  const double cu = std::cos(u), su = std::sin(u);
  const double b = std::sqrt(1.0 - el.e * el.e);
  const Eigen::Matrix3d R = orbit_frame(el.node, el.i, el.peri);
  const Vec3 Ph = R.col(0), Qh = R.col(1);
  const double n = std::sqrt(gm / (el.a * el.a * el.a));
  const double rdot = n * el.a / (1.0 - el.e * cu);
  CartesianPair c;
  c.Q = el.a * ((cu - el.e) * Ph + b * su * Qh);
  c.P = mu * rdot * (-su * Ph + b * cu * Qh);
  return c;
}

KeplerElements elements_from_state(const Vec3& Q, const Vec3& P, double mu, double k) {
  const double r = Q.norm();
  if (r == 0.0) fail(Errc::ZeroPosition, "elements at Q = 0");
  const double energy = P.squaredNorm() / (2.0 * mu) - k / r;
  if (!(energy < 0.0)) fail(Errc::HyperbolicOuter, "unbound Kepler orbit");
  KeplerElements el;
  el.a = -k / (2.0 * energy);
  const Vec3 h = Q.cross(P);
  const double G = h.norm();
  const Vec3 ev = P.cross(h) / (mu * k) - Q / r;
  el.e = ev.norm();
  if (G == 0.0) fail(Errc::DegenerateElement, "rectilinear orbit");
  el.i = std::acos(std::clamp(h.z() / G, -1.0, 1.0));
  const double sin_i = std::hypot(h.x(), h.y()) / G;
  if (sin_i < 1e-13) fail(Errc::DegenerateElement, "equatorial orbit: node undefined");
  if (el.e < 1e-13) fail(Errc::DegenerateElement, "circular orbit: pericentre undefined");
  el.node = wrap_2pi(std::atan2(h.x(), -h.y()));
  const Vec3 nhat = Vec3(-h.y(), h.x(), 0.0).normalized();
  const Vec3 hhat = h / G;
  el.peri = wrap_2pi(std::atan2(nhat.cross(ev).dot(hhat), nhat.dot(ev)));
  const double ecu = 1.0 - r / el.a;
  const double esu = Q.dot(P) / std::sqrt(mu * k * el.a);
  const double u = std::atan2(esu, ecu);
  el.mean_anomaly = wrap_2pi(u - esu);
  return el;
}

CartesianPair outer_state_from_delaunay(const DelaunayOuter& d, const MassConfig& m) {
  if (!(d.L2 > 0.0 && d.G2 > 0.0 && d.G2 <= d.L2 && std::abs(d.H2) <= d.G2))
    fail(Errc::DegenerateElement, "Delaunay actions outside L2 >= G2 >= |H2| > 0");
  if (d.L2 - d.G2 <= 1e-14 * d.L2) fail(Errc::DegenerateElement, "circular outer orbit");
  if (d.G2 - std::abs(d.H2) <= 1e-14 * d.G2) fail(Errc::DegenerateElement, "equatorial outer orbit");
  KeplerElements el;
  el.a = d.L2 * d.L2 / (m.mu2 * m.mu2 * m.M2);
  el.e = std::sqrt(1.0 - (d.G2 / d.L2) * (d.G2 / d.L2));
  el.i = std::acos(d.H2 / d.G2);
  el.node = d.h2;
  el.peri = d.g2;
  el.mean_anomaly = d.l2;
  return state_from_elements(el, m.mu2, m.mu2 * m.M2);
}

DelaunayOuter delaunay_from_outer_state(const Vec3& Q2, const Vec3& P2, const MassConfig& m) {
  const KeplerElements el = elements_from_state(Q2, P2, m.mu2, m.mu2 * m.M2);
  DelaunayOuter d;
  d.L2 = m.mu2 * std::sqrt(m.M2 * el.a);
  d.G2 = d.L2 * std::sqrt(1.0 - el.e * el.e);
  d.H2 = d.G2 * std::cos(el.i);
  d.l2 = el.mean_anomaly;
  d.g2 = el.peri;
  d.h2 = el.node;
  return d;
}

InnerElements inner_elements_from_ks(const RegularizedState& s, const MassConfig& m) {
  const double f1 = f1_of_state(s.P2, s.Q2, s.f, m);
  if (!(f1 > 0.0)) fail(Errc::HyperbolicOuter, "f1 <= 0");
  const double r1 = s.ks.z.norm2();
  const double fkep = s.ks.w.norm2() / (8.0 * m.mu1) + f1 * r1 - m.mu1 * m.M1;
  InnerElements el;
  el.k = m.mu1 * m.M1 + fkep;
  if (!(el.k > 0.0)) fail(Errc::HyperbolicOuter, "non-attractive modified Kepler problem");
  el.a1 = el.k / (2.0 * f1);
  const double ecu = 1.0 - r1 / el.a1;
  const double esu = dot(s.ks.z, s.ks.w) / (2.0 * std::sqrt(m.mu1 * el.k * el.a1));
  el.e1 = std::min(1.0, std::hypot(ecu, esu));
  el.u1 = wrap_2pi(std::atan2(esu, ecu));
  if (r1 == 0.0) {
    const double wn = s.ks.w.norm2();
    if (wn > 0.0) el.ecc_dir = -hopf(s.ks.w) / wn;
    return el;
  }
  const CartesianPair c = ks_map(s.ks);
  const Vec3 h = inner_angular_momentum(s.ks);
  const Vec3 ev = c.P.cross(h) / (m.mu1 * el.k) - c.Q / r1;
  const double en = ev.norm();
  el.ecc_dir = en > 0.0 ? Vec3(ev / en) : Vec3(c.Q / r1);
  const double G = h.norm();
  const double sin_i = G > 0.0 ? std::hypot(h.x(), h.y()) / G : 0.0;
  if (G > 0.0 && el.e1 < 1.0 && en > 1e-13 && sin_i > 1e-13) {
    const Vec3 nhat = Vec3(-h.y(), h.x(), 0.0).normalized();
    InnerOrientation o;
    o.G1 = G;
    o.H1 = h.z();
    o.h1 = wrap_2pi(std::atan2(h.x(), -h.y()));
    o.g1 = wrap_2pi(std::atan2(nhat.cross(ev).dot(h / G), nhat.dot(ev)));
    el.orientation = o;
  }
  return el;
}

std::array<double, 4> oscillator_amplitudes(const KSPoint& p, double f1, const MassConfig& m) {
  const double om2 = 8.0 * m.mu1 * f1;
  std::array<double, 4> I{};
  for (int i = 0; i < 4; ++i) I[i] = 0.5 * (om2 * p.z[i] * p.z[i] + p.w[i] * p.w[i]);
  return I;
}

double action_p0(const KSPoint& p, double f1, const MassConfig& m) {
  const auto I = oscillator_amplitudes(p, f1, m);
  return (I[0] + I[1] + I[2] + I[3]) / (2.0 * std::sqrt(8.0 * m.mu1 * f1));
}

RegularCoords regular_from_ks(const RegularizedState& s, const MassConfig& m) {
  const double f1 = f1_of_state(s.P2, s.Q2, s.f, m);
  if (!(f1 > 0.0)) fail(Errc::HyperbolicOuter, "f1 <= 0");
  const double om = std::sqrt(8.0 * m.mu1 * f1);
  const auto I = oscillator_amplitudes(s.ks, f1, m);
  const double total = I[0] + I[1] + I[2] + I[3];
  for (double v : I) {
    if (!(v > 1e-14 * total)) fail(Errc::ChartDegenerate, "vanishing oscillator amplitude");
  }
  std::array<double, 4> phi{};
  for (int i = 0; i < 4; ++i) phi[i] = std::atan2(om * s.ks.z[i], s.ks.w[i]);
  RegularCoords rc;
  rc.P[0] = total / (2.0 * om);
  rc.theta[0] = wrap_2pi(2.0 * phi[0]);
  for (int i = 1; i < 4; ++i) {
    rc.P[i] = I[i] / om;
    rc.theta[i] = wrap_2pi(phi[i] - phi[0]);
  }
  const DelaunayOuter d = delaunay_from_outer_state(s.Q2, s.P2, m);
  rc.L2 = d.L2;
  rc.G2 = d.G2;
  rc.g2 = d.g2;
  rc.H2 = d.H2;
  rc.h2 = d.h2;
  const double pq = 0.5 * dot(s.ks.z, s.ks.w);
  rc.l2p = wrap_2pi(d.l2 + f1_prime_of_L2(d.L2, m) / (2.0 * f1) * pq);
  return rc;
}

RegularizedState ks_from_regular(const RegularCoords& rc, double f, const MassConfig& m) {
  const double f1 = f1_of_L2(rc.L2, f, m);
  if (!(f1 > 0.0)) fail(Errc::HyperbolicOuter, "f1 <= 0");
  const double om = std::sqrt(8.0 * m.mu1 * f1);
  std::array<double, 4> I{}, phi{};
  I[0] = om * (2.0 * rc.P[0] - rc.P[1] - rc.P[2] - rc.P[3]);
  phi[0] = 0.5 * rc.theta[0];
  for (int i = 1; i < 4; ++i) {
    I[i] = om * rc.P[i];
    phi[i] = rc.theta[i] + phi[0];
  }
  RegularizedState s;
  s.f = f;
  for (int i = 0; i < 4; ++i) {
    if (!(I[i] > 0.0)) fail(Errc::ChartDegenerate, "non-positive oscillator amplitude");
    const double amp = std::sqrt(2.0 * I[i]);
    s.ks.z[i] = amp * std::sin(phi[i]) / om;
    s.ks.w[i] = amp * std::cos(phi[i]);
  }
  const double pq = 0.5 * dot(s.ks.z, s.ks.w);
  DelaunayOuter d;
  d.L2 = rc.L2;
  d.G2 = rc.G2;
  d.g2 = rc.g2;
  d.H2 = rc.H2;
  d.h2 = rc.h2;
  d.l2 = rc.l2p - f1_prime_of_L2(rc.L2, m) / (2.0 * f1) * pq;
  const CartesianPair outer = outer_state_from_delaunay(d, m);
  s.Q2 = outer.Q;
  s.P2 = outer.P;
  return s;
}

double kepler_energy_regular(double P0, double L2, double f, const MassConfig& m) {
  const double f1 = f1_of_L2(L2, f, m);
  if (!(f1 > 0.0)) fail(Errc::HyperbolicOuter, "f1 <= 0");
  return P0 * std::sqrt(2.0 * f1 / m.mu1) - m.mu1 * m.M1;
}

KeplerFrequencies keplerian_frequencies(double P0, double L2, double f, const MassConfig& m) {
  const double f1 = f1_of_L2(L2, f, m);
  if (!(f1 > 0.0)) fail(Errc::HyperbolicOuter, "f1 <= 0");
  return {std::sqrt(2.0 * f1 / m.mu1), P0 * f1_prime_of_L2(L2, m) / std::sqrt(2.0 * m.mu1 * f1)};
}

}  // namespace ksreg
