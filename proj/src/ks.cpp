#include "ksreg/ks.hpp"

#include <cmath>

#include "ksreg/errors.hpp"

namespace ksreg {

Quaternion hopf_quaternion(const Quaternion& z) {
  return quat_mul(quat_mul(z.conj(), Quaternion::i()), z);
}

Vec3 hopf(const Quaternion& z) {
  if (z.norm2() == 0.0) fail(Errc::ZeroQuaternion, "hopf map at z = 0");
  const auto& [z0, z1, z2, z3] = z;
  return {z0 * z0 + z1 * z1 - z2 * z2 - z3 * z3, 2.0 * (z1 * z2 - z0 * z3),
          2.0 * (z0 * z2 + z1 * z3)};
}

Quaternion ks_momentum(const KSPoint& p) {
  const double r = p.z.norm2();
  if (r == 0.0) fail(Errc::ZeroQuaternion, "KS momentum at z = 0");
  Quaternion q = quat_mul(quat_mul(p.z.conj(), Quaternion::i()), p.w);
  return q * (0.5 / r);
}

CartesianPair ks_map(const KSPoint& p) {
  CartesianPair c;
  c.Q = hopf(p.z);
  c.P = ks_momentum(p).im();
  return c;
}

double bl_form(const KSPoint& p) {
  return 2.0 * quat_mul(quat_mul(p.z.conj(), Quaternion::i()), p.w).re();
}

KSPoint ks_inverse(const CartesianPair& c) {
  const double r = c.Q.norm();
  if (r == 0.0) fail(Errc::ZeroPosition, "KS inverse at Q = 0");
  const double qx = c.Q.x(), qy = c.Q.y(), qz = c.Q.z();
  // With z1 = 0: Q = (z0^2 - z2^2 - z3^2, -2 z0 z3, 2 z0 z2).
  Quaternion z;
  const double t = std::hypot(qy, qz);
  if (qx >= 0.0) {
    z.q0 = std::sqrt(0.5 * (r + qx));
    z.q2 = qz / (2.0 * z.q0);
    z.q3 = -qy / (2.0 * z.q0);
  } else {
    const double rho = std::sqrt(0.5 * (r - qx));
    if (t == 0.0) {
      z.q2 = rho;
    } else {
      z.q0 = t / (2.0 * rho);
      z.q2 = rho * qz / t;
      z.q3 = -rho * qy / t;
    }
  }
  // conj(z) i w = 2|z|^2 P  =>  w = -2 i z P  (|z|^2 = r).
  const Quaternion w = quat_mul(quat_mul(Quaternion::i(), z), Quaternion::imaginary(c.P)) * -2.0;
  return {z, w};
}

KSPoint fiber_rotate(const KSPoint& p, double theta) {
  return {fiber_rotate(p.z, theta), fiber_rotate(p.w, theta)};
}

Vec3 inner_angular_momentum(const KSPoint& p) {
  return quat_mul(p.z.conj(), p.w).im() * -0.5;
}

}  // namespace ksreg
