#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ksreg/threebody.hpp"

namespace ksreg {

// Reduced secular point; C is vertical with h2 = 0 and h1 = h2 + pi.
struct SecularPoint {
  double G1 = 0.0, g1 = 0.0, G2 = 1.0, g2 = 0.0;
  double L1 = 1.0, L2 = 1.0, C = 1.0;
};

// Eccentricities and orbital frames (pericentre direction P, in-plane normal Q) of both ellipses.
struct EllipsePair {
  double e1 = 0.0, e2 = 0.0;
  Vec3 P1 = Vec3::UnitX(), Q1 = Vec3::UnitY();
  Vec3 P2 = Vec3::UnitX(), Q2 = Vec3::UnitY();
};

// True when |C - G2| <= G1 <= min(L1, C + G2) and G2 <= L2 (relative slack tol).
bool is_physical(const SecularPoint& sp, double tol = 1e-12);

// Throws NonPhysicalPoint outside the physical region.
EllipsePair geometry_from_secular(const SecularPoint& sp);

// Both ellipses in the same plane, prograde; valid for e1 = 1.
EllipsePair coplanar_geometry(double e1, double e2, double g1, double g2);

struct ParityAverage {
  double even = 0.0;  // part even under Q1 -> -Q1
  double odd = 0.0;
  double total() const { return even + odd; }
};

// (1/4pi^2) double integral of |Q1| F_pert du1 dl2 with a2 = a1/alpha, split by parity in Q1.
ParityAverage average_pert_parts(const EllipsePair& geom, double a1, double alpha,
                                 const MassConfig& m, int nodes = 128);

// Throws NonPhysicalPoint.
double average_pert(const SecularPoint& sp, double a1, double alpha, const MassConfig& m,
                    int nodes = 128);

struct AlphaExpansion {
  double quadrupole = 0.0;  // coefficient of alpha^3
  double octupole = 0.0;    // coefficient of alpha^4
  double quad_residual = 0.0;
  double oct_residual = 0.0;
};

// Extrapolates even/alpha^3 and odd/alpha^4 to alpha -> 0 as polynomials in alpha^2.
AlphaExpansion alpha_expansion(const EllipsePair& geom, const MassConfig& m,
                               std::span<const double> alphas, int nodes = 128);

// Polynomial fit in alpha^2 of values(alpha) evaluated at alpha = 0; residual is the
// rms misfit when over-determined, else the change from dropping the smallest alpha.
struct Extrapolation {
  double value;
  double residual;
};
Extrapolation extrapolate_alpha_squared(std::span<const double> alphas, std::span<const double> values);

struct QuadPartials {
  double value = 0.0;
  double dG1 = 0.0, dg1 = 0.0, dG2 = 0.0, dL1 = 0.0, dL2 = 0.0, dC = 0.0;
};

// Quadrupolar secular Hamiltonian and its exact partials. At G1 = 0 requires C = G2,
// otherwise throws SingularCoordinates. Negative G1 is allowed (double cover).
QuadPartials f_quad_partials(double G1, double g1, double L1, double L2, double C, double G2,
                             double mu_quad);
double f_quad(const SecularPoint& sp, const MassConfig& m);
double f_quad(const SecularPoint& sp, double mu_quad);
// Literal evaluation with (C^2 - G1^2 - G2^2)^2 / (4 G1^2 G2^2); G1 != 0 only.
double f_quad_literal(const SecularPoint& sp, double mu_quad);

// d f_quad / d G2 at fixed (G1, g1, L1, L2, C).
double nu_quad2(const SecularPoint& sp, const MassConfig& m);
double nu_quad2(const SecularPoint& sp, double mu_quad);

// -(15/64)(4 e1 + 3 e1^3) e2 (1 - e2^2)^(-5/2) cos(dg)
double octupolar_coplanar(double e1, double e2, double dg);

// Two-degree-of-freedom fast model (P0, theta0; L2, l2) with frozen ellipse shapes and frames.
class FastModel {
 public:
  FastModel(const EllipsePair& geom, const MassConfig& m, double a1, double alpha);

  double P0_base() const { return P0_; }
  double L2_base() const { return L2_; }
  double energy_f() const { return f_; }
  double nu1(double L2) const;
  double kepler(double P0, double L2) const;
  double pert(double P0, double theta0, double L2, double l2) const;
  double total(double P0, double theta0, double L2, double l2) const {
    return kepler(P0, L2) + pert(P0, theta0, L2, l2);
  }
  const MassConfig& masses() const { return m_; }

 private:
  EllipsePair geom_;
  MassConfig m_;
  double f_ = 0.0, P0_ = 0.0, L2_ = 0.0;
};

// First-order generator H = (1/nu1) int (F_pert - <F_pert>) dtheta0, tabulated by a
// discrete Fourier transform over theta0.
class FirstOrderGenerator {
 public:
  FirstOrderGenerator(const FastModel& model, int dft_nodes = 64);

  double operator()(double P0, double theta0, double L2, double l2) const;

  struct Gradient {
    double dP0, dtheta0, dL2, dl2;
  };
  Gradient gradient(double P0, double theta0, double L2, double l2) const;

  // Image of (P0, theta0, L2, l2) under the time-one map of the generator flow.
  std::array<double, 4> time_one_map(const std::array<double, 4>& x, int rk_steps = 4) const;

  const FastModel& model() const { return model_; }

 private:
  struct Series {
    std::vector<double> a, b;  // cosine/sine coefficients, k = 1..K
  };
  Series series(double P0, double L2, double l2) const;
  double eval_series(const Series& s, double theta0, double nu1) const;
  double eval_series_dtheta(const Series& s, double theta0, double nu1) const;

  const FastModel& model_;
  int nodes_;
};

struct EliminationSample {
  double alpha = 0.0;
  double generator_amplitude = 0.0;
  double generator_mean = 0.0;      // largest |theta0-mean of H| over the base points
  double pert_oscillation = 0.0;    // theta0-oscillation of F before the transformation
  double residual_amplitude = 0.0;  // theta0-oscillation after the transformation
};

struct EliminationReport {
  std::vector<EliminationSample> samples;
  double residual_exponent = 0.0;
  double generator_exponent = 0.0;
};

struct EliminationOptions {
  double a1 = 1.0;
  std::vector<double> alphas{0.02, 0.01, 0.005};
  int theta_nodes = 32;
  int l2_nodes = 8;
  int dft_nodes = 64;
  int rk_steps = 4;
};

EliminationReport elimination_generator(const EllipsePair& geom, const MassConfig& m,
                                        const EliminationOptions& opt = {});

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// det [[0, grad], [grad^T, hess]]
double bordered_determinant(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess);

// Bordered Hessian determinant with derivatives by central differences of K
// (steps rel_step * max(|x_i|, 1), Richardson-refined).
double bordered_hessian(const std::function<double(std::span<const double>)>& K,
                        std::span<const double> point, double rel_step = 1e-3);

}  // namespace ksreg
