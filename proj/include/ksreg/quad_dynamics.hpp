#pragma once

#include <array>
#include <vector>

#include "ksreg/secular.hpp"

namespace ksreg {

// Parameters of the reduced quadrupolar system in (G1, g1). C == G2 selects the double cover.
struct QuadParams {
  double L1 = 1.0, L2 = 1.0, C = 1.0, G2 = 1.0;
  double mu_quad = 1.0;
  bool on_cover() const { return C == G2; }
  // Admissible open interval for G1.
  double G1_min() const;
  double G1_max() const;
};

struct PhasePoint {
  double G1 = 0.0, g1 = 0.0;
};

// s(G1, g1) = (-G1, pi - g1)
PhasePoint cover_symmetry(const PhasePoint& p);

double quad_energy(const PhasePoint& p, const QuadParams& q);

// (dG1/dt, dg1/dt) = (-df/dg1, df/dG1)
std::array<double, 2> quad_vector_field(const PhasePoint& p, const QuadParams& q);

// (45/8) mu^2 L2^6 / (G2^6 L1^2)
double equilibrium_hessian_closed(const QuadParams& q);
// Determinant of the Hessian of f_quad on the cover at (0, 0): central differences of the
// exact gradient at steps h and h/2 (h = rel_step * L1 in G1, rel_step in g1), Richardson-combined.
double equilibrium_hessian(const QuadParams& q, double rel_step = 1e-3);

struct OrbitOptions {
  double rtol = 1e-13;
  double atol = 1e-16;
  double closure_tol = 1e-8;
  double max_time = 0.0;  // 0: a thousand linear periods
  std::size_t max_steps = 2'000'000;
  bool keep_samples = true;
};

struct Crossing {
  double t = 0.0;
  double g1 = 0.0;
  double angle = 0.0;  // angle with the line G1 = 0 in (G1/L1, g1)
};

struct OrbitRecord {
  PhasePoint start;
  std::vector<double> t, G1, g1;  // accepted steps, g1 unwrapped
  double period = 0.0;
  double energy = 0.0;
  double energy_drift = 0.0;  // max |f - f(start)| along the orbit
  double closure_gap = 0.0;   // normalized distance at the return, relative to the amplitude
  double amplitude = 0.0;     // largest normalized distance from the start
  int winding = 0;            // net turns of g1 over one period
  double flow_integral = 0.0; // integral of G1 dg1 along the flow over one period
  double action = 0.0;        // |integral of (G1 - G1ref) dg1| / 2pi
  double mean_dG2 = 0.0;      // time average of df/dG2
  double mean_dL1 = 0.0;      // time average of df/dL1
  std::vector<Crossing> crossings;
};

// Traces one period. Throws NotClosed when the orbit leaves the chart, does not
// return within the time budget, or starts at an equilibrium.
OrbitRecord trace_orbit(const PhasePoint& start, const QuadParams& q, const OrbitOptions& opt = {});

// Flow of the quadrupolar vector field for time t.
PhasePoint quad_flow(const PhasePoint& start, const QuadParams& q, double t, double rtol = 1e-13);

// Reference level for the action: G1_min for orbits winding around the coplanar point, 0 otherwise.
double action_reference(const OrbitRecord& o, const QuadParams& q);

struct SecularFrequencies {
  double action = 0.0;
  double period = 0.0;
  double energy = 0.0;
  double dE_dJ = 0.0;   // signed 2pi/T
  double dE_dG2 = 0.0;  // at fixed action
  double dE_dL1 = 0.0;
  double dE_dL2 = 0.0;
};

SecularFrequencies action_and_frequencies(const OrbitRecord& o, const QuadParams& q);

// Start on the line g1 = g1_start whose orbit has action J; searches G1 above the
// equilibrium (0 on the cover, G1_min otherwise).
PhasePoint start_for_action(double J, const QuadParams& q, double g1_start = 0.0,
                            const OrbitOptions& opt = {});

// Keplerian part plus alpha^3 times the quadrupolar torus energy, as a function of
// (P0, L2, J, G2) at fixed energy parameter f and total angular momentum C.
struct TorusModel {
  MassConfig m;
  double f = 1.0;
  double C = 1.0;
  double g1_start = 0.0;
  OrbitOptions orbit{};
};

struct TorusData {
  double H = 0.0;
  std::array<double, 4> nu{};  // dH/d(P0, L2, J, G2)
  double alpha = 0.0, L1 = 0.0;
  SecularFrequencies secular;
};

TorusData torus_data(const TorusModel& tm, const std::array<double, 4>& x);

// (H, nu2/nu1, nu3/nu1, nu4/nu1)
std::array<double, 4> frequency_map(const TorusModel& tm, const std::array<double, 4>& x);

struct JacobianCheck {
  double det = 0.0;       // at steps h
  double det_half = 0.0;  // at steps h/2
  bool nonzero() const;
};

// Central-difference Jacobian determinant of frequency_map, steps rel_step * |x_i|.
JacobianCheck frequency_jacobian(const TorusModel& tm, const std::array<double, 4>& x,
                                 double rel_step = 1e-4);

// Portrait of the flow: nested orbits about the centre(s), their symmetry images on the
// cover, equilibria and the separatrix amplitude along g1 = 0.
struct PortraitSpec {
  int orbits = 8;               // number of starts along g1 = 0
  double max_fraction = 0.9;    // largest start as a fraction of the separatrix amplitude
  int bisection_steps = 40;
  OrbitOptions orbit{};
};

struct Equilibrium {
  PhasePoint point;
  double energy = 0.0;
  double hessian_det = 0.0;
  bool symmetry_fixed = false;
  const char* kind = "";
};

struct Portrait {
  std::vector<OrbitRecord> orbits;     // starts (G1_k, 0) or (G1_min + d_k, 0)
  std::vector<OrbitRecord> mirrored;   // symmetry images, cover only
  std::vector<Equilibrium> equilibria;
  double separatrix_start = 0.0;       // G1 offset along g1 = 0 where closing orbits end
  double separatrix_energy = 0.0;
};

// Throws ConfigInvalid when no orbits are requested.
Portrait phase_portrait(const QuadParams& q, const PortraitSpec& spec);

// Normalized quadrupolar Hamiltonian in (delta, omega) with parameters alpha, beta.
double normalized_w(double alpha, double beta, double delta, double omega);
double normalized_w_bar(double alpha, double beta, double delta, double omega);
// First Taylor coefficient of w_bar in delta at delta = |alpha - beta|.
// Throws CoincidentMomenta at alpha == beta.
double xi_bar(double alpha, double beta, double omega);

// Closed form -2 sqrt(alpha + beta) sqrt(R) / beta^4, R = 9a^2b - 6ab^2 + b^3 - 4a^3 + 5a.
// Throws DegenerateRadicand when R <= 0.
double frequency_coefficient(double alpha, double beta);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error of the integral, propagated to value
};
// 2pi / (integral of d omega / xi_bar) by double-exponential quadrature over quarter periods.
QuadratureResult frequency_coefficient_quadrature(double alpha, double beta);

struct TorsionResult {
  double frequency_coefficient = 0.0;
  double torsion = 0.0;
};
// Squared beta-derivative of the frequency coefficient; central differences at
// 1e-4 and 5e-5 with Richardson. Throws CoincidentMomenta at alpha == beta.
TorsionResult torsion(double alpha, double beta);
double torsion_limit(double beta);

// Limit of the torsion as alpha -> beta from the symmetric mean of torsion(beta +- eps, beta)
// and of torsion(beta +- eps/2, beta), extrapolated in eps^2.
double torsion_limit_estimate(double beta, double eps = 1e-4);

}  // namespace ksreg
