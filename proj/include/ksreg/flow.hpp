#pragma once

#include <array>
#include <span>
#include <vector>

#include "ksreg/elements.hpp"
#include "ksreg/secular.hpp"
#include "ksreg/threebody.hpp"

namespace ksreg {

// Packed phase point (z, w, Q2, P2).
using FlowVector = std::array<double, 14>;

FlowVector pack(const RegularizedState& s);
RegularizedState unpack(std::span<const double> y, double f);

struct StateDerivative {
  Quaternion dz, dw;
  Vec3 dQ2 = Vec3::Zero(), dP2 = Vec3::Zero();
  double dt = 0.0;  // d t / d tau = |z|^2
};

// Canonical equations of the regularized Hamiltonian in fictitious time.
// Throws OuterCollision at Q2 = 0.
StateDerivative hamiltonian_field(const RegularizedState& s, const MassConfig& m,
                                  bool perturbation = true);

struct FlowOptions {
  double rtol = 1e-13;
  double atol = 1e-15;
  bool perturbation = true;
  double violation_limit = 1e-7;  // abort when F or BL leave the constraint by more
  double collision_threshold = 0.0;  // 0: 1e-2 a1 of the initial state
  double sample_dtau = 0.0;          // > 0: uniform samples in tau
  bool record_steps = false;         // keep every accepted step
  std::size_t max_steps = 50'000'000;
};

struct FlowSample {
  double tau = 0.0, t = 0.0;
  FlowVector y{};
  double F = 0.0, BL = 0.0;
  Vec3 C = Vec3::Zero();
};

struct Minimum {
  double tau = 0.0, t = 0.0;
  double r = 0.0;  // |Q1| = |z|^2 at the minimum
};

struct Trajectory {
  double f = 0.0;
  std::vector<FlowSample> steps;    // accepted steps (if requested)
  std::vector<FlowSample> samples;  // uniform in tau (if requested)
  std::vector<Minimum> minima;      // every local minimum of |z|^2
  FlowSample initial, final;
  double F_scale = 1.0;    // mu1 M1
  double BL_scale = 1.0;   // mu1 M1 sqrt(8 mu1 / f1)
  double C_scale = 1.0;    // |C| at start
  double F_drift = 0.0;    // max |F - F0| / F_scale
  double BL_drift = 0.0;   // max |BL| / BL_scale
  double C_drift = 0.0;    // max_i |C_i - C0_i| / C_scale
  double collision_threshold = 0.0;
  std::size_t accepted = 0, rejected = 0;
};

// Throws OuterCollision, StepFailure, or ConfigInvalid when BL(s0) is not zero.
Trajectory integrate(const RegularizedState& s0, const MassConfig& m, double tau_span,
                     const FlowOptions& opt = {});

struct NearCollisionReport {
  std::vector<Minimum> events;  // minima below the threshold
  Minimum global;               // smallest minimum over the run
  bool exact_zero = false;      // some minimum at |Q1| <= 1e-13 a1
};

NearCollisionReport near_collision_events(const Trajectory& traj, double a1);

struct Peak {
  double frequency = 0.0;  // angular
  double amplitude = 0.0;
  double phase = 0.0;
  double residual = 0.0;  // rms of the series after removing every returned peak
};

// Peaks of a uniformly sampled series (step dt), strongest first. Stops when the next
// peak is below rel_floor times the rms of the series. Throws TooShort under 16 samples.
std::vector<Peak> frequency_estimate(std::span<const double> series, double dt,
                                     std::size_t max_peaks = 4, double rel_floor = 1e-6);

// Regularized state over inner and outer Keplerian elements in Jacobi coordinates,
// energy parameter chosen so that the regularized Hamiltonian vanishes.
RegularizedState state_from_elements(const KeplerElements& inner, const KeplerElements& outer,
                                     const MassConfig& m);

// Regularized state on the ellipses of a secular point (semi-major axes from L1, L2) at
// mean anomalies l1, l2, with zero regularized energy. Throws NonPhysicalPoint.
RegularizedState state_from_secular(const SecularPoint& sp, double l1, double l2, const MassConfig& m);

// Inner Keplerian period 2pi / nu1 in fictitious time at the initial state.
double inner_period_tau(const RegularizedState& s, const MassConfig& m);

}  // namespace ksreg
