#pragma once

#include <vector>

#include "ksreg/threebody.hpp"

namespace ksreg {

// P_n(x) by Bonnet's recursion; x is not restricted to [-1, 1].
double legendre_eval(int n, double x);

// sigma0^(n-1) + (-1)^n sigma1^(n-1), n >= 2.
double sigma_n(int n, const MassConfig& m);

struct SeriesResult {
  double value = 0.0;       // partial sum n = 2..N of |Q1| F_pert
  double tail_bound = 0.0;  // bound on the omitted terms n > N
  double rounding = 0.0;    // floating-point allowance for comparing against a direct evaluation
  std::vector<double> terms;  // terms[n] for n = 0..N (entries 0, 1 are zero)
  double bound() const { return tail_bound + rounding; }
};

// Legendre series of |Q1| F_pert = -mu1 m2 sum sigma_n P_n(cos zeta) |Q1|^(n+1)/|Q2|^(n+1).
// Throws RatioTooLarge unless sigma_hat |Q1|/|Q2| < 1.
SeriesResult pert_series(const JacobiState& s, const MassConfig& m, int N = 12);

// (mu1 m2 / 5) 20^3 alpha^3 / ((1 - e2max)^2 (1 - e2max - 20 alpha)); throws AlphaTooLarge.
double pert_bound(double alpha, double e2max, const MassConfig& m);

}  // namespace ksreg
