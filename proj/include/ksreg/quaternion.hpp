#pragma once

#include <Eigen/Dense>

namespace ksreg {

using Vec3 = Eigen::Vector3d;

// z = q0 + q1 i + q2 j + q3 k
struct Quaternion {
  double q0 = 0.0, q1 = 0.0, q2 = 0.0, q3 = 0.0;

  static Quaternion real(double a) { return {a, 0.0, 0.0, 0.0}; }
  static Quaternion imaginary(const Vec3& v) { return {0.0, v.x(), v.y(), v.z()}; }
  static Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  double re() const { return q0; }
  Vec3 im() const { return {q1, q2, q3}; }
  Quaternion conj() const { return {q0, -q1, -q2, -q3}; }
  double norm2() const { return q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3; }
  double norm() const;
  double operator[](int idx) const;
  double& operator[](int idx);

  Quaternion& operator+=(const Quaternion& o);
  Quaternion& operator-=(const Quaternion& o);
  Quaternion& operator*=(double s);
};

Quaternion quat_mul(const Quaternion& a, const Quaternion& b);

inline Quaternion operator*(const Quaternion& a, const Quaternion& b) { return quat_mul(a, b); }
inline Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
inline Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
inline Quaternion operator-(const Quaternion& a) { return {-a.q0, -a.q1, -a.q2, -a.q3}; }
inline Quaternion operator*(double s, Quaternion a) { return a *= s; }
inline Quaternion operator*(Quaternion a, double s) { return a *= s; }

// Euclidean inner product on R^4.
double dot(const Quaternion& a, const Quaternion& b);

// Real part relative to the full norm is below tol (absolute when the norm vanishes).
bool is_pure_imaginary(const Quaternion& a, double tol = 1e-10);

// Left multiplication by exp(i theta).
Quaternion fiber_rotate(const Quaternion& z, double theta);

}  // namespace ksreg
