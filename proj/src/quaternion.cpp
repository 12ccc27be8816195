#include "ksreg/quaternion.hpp"

#include <cmath>

namespace ksreg {

double Quaternion::norm() const { return std::sqrt(norm2()); }

double Quaternion::operator[](int idx) const {
  switch (idx) {
    case 0: return q0;
    case 1: return q1;
    case 2: return q2;
    default: return q3;
  }
}

double& Quaternion::operator[](int idx) {
  switch (idx) {
    case 0: return q0;
    case 1: return q1;
    case 2: return q2;
    default: return q3;
  }
}

Quaternion& Quaternion::operator+=(const Quaternion& o) {
  q0 += o.q0;
  q1 += o.q1;
  q2 += o.q2;
  q3 += o.q3;
  return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& o) {
  q0 -= o.q0;
  q1 -= o.q1;
  q2 -= o.q2;
  q3 -= o.q3;
  return *this;
}

Quaternion& Quaternion::operator*=(double s) {
  q0 *= s;
  q1 *= s;
  q2 *= s;
  q3 *= s;
  return *this;
}

Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
  return {a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
          a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
          a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
          a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0};
}

double dot(const Quaternion& a, const Quaternion& b) {
  return a.q0 * b.q0 + a.q1 * b.q1 + a.q2 * b.q2 + a.q3 * b.q3;
}

bool is_pure_imaginary(const Quaternion& a, double tol) {
  const double n = a.norm();
  return std::abs(a.q0) <= tol * (n > 0.0 ? n : 1.0);
}

Quaternion fiber_rotate(const Quaternion& z, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * z.q0 - s * z.q1, s * z.q0 + c * z.q1, c * z.q2 - s * z.q3, s * z.q2 + c * z.q3};
}

}  // namespace ksreg
