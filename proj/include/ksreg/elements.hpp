#pragma once

#include <array>
#include <optional>

#include "ksreg/threebody.hpp"

namespace ksreg {

// Solves u - e sin u = l for 0 <= e < 1. Throws EccentricityOutOfRange.
double solve_kepler(double l, double e);

// Reduces an angle to [0, 2pi).
double wrap_2pi(double a);
// Reduces an angle to [-pi, pi).
double wrap_pi(double a);

// Elliptic elements of H = |P|^2/2mu - k/|Q|.
struct KeplerElements {
  double a = 1.0, e = 0.0, i = 0.0;
  double node = 0.0, peri = 0.0, mean_anomaly = 0.0;
};

// Columns: pericentre direction, in-plane normal to it, orbit normal.
Eigen::Matrix3d orbit_frame(double node, double incl, double peri);

CartesianPair state_from_elements(const KeplerElements& el, double mu, double k);
// Throws HyperbolicOuter for unbound states, DegenerateElement for circular or equatorial orbits.
KeplerElements elements_from_state(const Vec3& Q, const Vec3& P, double mu, double k);

struct DelaunayOuter {
  double L2 = 1.0, l2 = 0.0, G2 = 1.0, g2 = 0.0, H2 = 1.0, h2 = 0.0;
};

CartesianPair outer_state_from_delaunay(const DelaunayOuter& d, const MassConfig& m);
DelaunayOuter delaunay_from_outer_state(const Vec3& Q2, const Vec3& P2, const MassConfig& m);

struct InnerOrientation {
  double G1, g1, H1, h1;
};

struct InnerElements {
  double a1 = 0.0, e1 = 0.0, u1 = 0.0;
  double k = 0.0;          // mu1 * M1', modified attraction constant
  Vec3 ecc_dir = Vec3::UnitX();
  std::optional<InnerOrientation> orientation;
};

InnerElements inner_elements_from_ks(const RegularizedState& s, const MassConfig& m);

struct RegularCoords {
  std::array<double, 4> P{};      // actions
  std::array<double, 4> theta{};  // angles
  double L2 = 1.0, l2p = 0.0, G2 = 1.0, g2 = 0.0, H2 = 1.0, h2 = 0.0;
};

// Oscillator amplitudes (8 mu1 f1 z_i^2 + w_i^2)/2.
std::array<double, 4> oscillator_amplitudes(const KSPoint& p, double f1, const MassConfig& m);

// Throws ChartDegenerate when an amplitude vanishes, DegenerateElement for a degenerate outer orbit.
RegularCoords regular_from_ks(const RegularizedState& s, const MassConfig& m);
RegularizedState ks_from_regular(const RegularCoords& rc, double f, const MassConfig& m);

// P0 of the inner oscillator: sum of amplitudes / (2 sqrt(8 mu1 f1)).
double action_p0(const KSPoint& p, double f1, const MassConfig& m);

struct KeplerFrequencies {
  double nu1, nu2;
};

// Partial derivatives of F_Kep(P0, L2) = P0 sqrt(2 f1(L2)/mu1) - mu1 M1.
KeplerFrequencies keplerian_frequencies(double P0, double L2, double f, const MassConfig& m);
double kepler_energy_regular(double P0, double L2, double f, const MassConfig& m);

}  // namespace ksreg
