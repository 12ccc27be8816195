#pragma once

#include "ksreg/quaternion.hpp"

namespace ksreg {

struct KSPoint {
  Quaternion z;
  Quaternion w;
};

struct CartesianPair {
  Vec3 Q = Vec3::Zero();
  Vec3 P = Vec3::Zero();
};

// conj(z) i z as a full quaternion (real part vanishes analytically).
Quaternion hopf_quaternion(const Quaternion& z);

// Q = conj(z) i z. Throws ZeroQuaternion for z = 0.
Vec3 hopf(const Quaternion& z);

// conj(z) i w / (2|z|^2), keeping the real part (zero on BL = 0).
Quaternion ks_momentum(const KSPoint& p);

// (Q, P) = (conj(z) i z, conj(z) i w / 2|z|^2). Throws ZeroQuaternion for z = 0.
CartesianPair ks_map(const KSPoint& p);

// conj(z) i w + conj(conj(z) i w), a real scalar.
double bl_form(const KSPoint& p);

// Fiber representative with z1 = 0, z0 >= 0; when z0 = z1 = 0 also z3 = 0, z2 >= 0.
// Throws ZeroPosition for Q = 0.
KSPoint ks_inverse(const CartesianPair& c);

KSPoint fiber_rotate(const KSPoint& p, double theta);

// Inner angular momentum Q1 x P1 = -Im(conj(z) w)/2, regular at z = 0.
Vec3 inner_angular_momentum(const KSPoint& p);

}  // namespace ksreg
