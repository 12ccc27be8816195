#pragma once

#include <array>

#include "ksreg/ks.hpp"

namespace ksreg {

struct MassConfig {
  double m0 = 1.0, m1 = 1.0, m2 = 1.0;
  double sigma0 = 0.5, sigma1 = 0.5;
  double mu1 = 0.5, mu2 = 2.0 / 3.0;
  double M1 = 2.0, M2 = 3.0;
  double mu_quad = 0.5;

  // Throws ConfigInvalid unless all masses are positive and finite.
  static MassConfig from_masses(double m0, double m1, double m2);
  double sigma_hat() const { return sigma0 > sigma1 ? sigma0 : sigma1; }
};

struct InertialState {
  std::array<Vec3, 3> p{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  std::array<Vec3, 3> q{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
};

struct JacobiState {
  Vec3 P1 = Vec3::Zero(), Q1 = Vec3::Zero(), P2 = Vec3::Zero(), Q2 = Vec3::Zero();
};

struct RegularizedState {
  KSPoint ks;
  Vec3 P2 = Vec3::Zero();
  Vec3 Q2 = Vec3::Zero();
  double f = 1.0;
};

struct HamiltonianParts {
  double kepler = 0.0;
  double pert = 0.0;
  double total() const { return kepler + pert; }
};

JacobiState jacobi_from_inertial(const InertialState& s, const MassConfig& m);

// Inverse at given centre-of-mass momentum P0 and body-0 position q0.
InertialState inertial_from_jacobi(const JacobiState& s, const MassConfig& m,
                                   const Vec3& P0 = Vec3::Zero(), const Vec3& q0 = Vec3::Zero());

// Newtonian energy sum |p|^2/2m - sum m_i m_j / |q_i - q_j|.
double inertial_energy(const InertialState& s, const MassConfig& m);

// Perturbing function of the Jacobi positions, evaluated without first-order cancellation.
double f_pert(const Vec3& Q1, const Vec3& Q2, const MassConfig& m);
Vec3 grad_q1_f_pert(const Vec3& Q1, const Vec3& Q2, const MassConfig& m);
Vec3 grad_q2_f_pert(const Vec3& Q1, const Vec3& Q2, const MassConfig& m);

// Same quantity through the bracketed sigma-difference form, as written.
double f_pert_naive(const Vec3& Q1, const Vec3& Q2, const MassConfig& m);

HamiltonianParts eval_F(const JacobiState& s, const MassConfig& m);

// f + |P2|^2/2mu2 - mu2 M2/|Q2|
double f1_of_state(const Vec3& P2, const Vec3& Q2, double f, const MassConfig& m);
double f1_of_L2(double L2, double f, const MassConfig& m);
// d f1 / d L2
double f1_prime_of_L2(double L2, const MassConfig& m);

HamiltonianParts eval_regularized(const RegularizedState& s, const MassConfig& m);

// Jacobi state at the KS image of the regularized state (z != 0).
JacobiState jacobi_from_regularized(const RegularizedState& s);

// Regularized state over a Jacobi state, gauge fixed by ks_inverse.
RegularizedState regularized_from_jacobi(const JacobiState& s, double f);

// Total angular momentum Q1 x P1 + Q2 x P2.
Vec3 total_angular_momentum(const RegularizedState& s);

}  // namespace ksreg
