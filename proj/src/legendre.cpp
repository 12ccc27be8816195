#include "ksreg/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ksreg/errors.hpp"

namespace ksreg {

double legendre_eval(int n, double x) {
  if (n <= 0) return 1.0;
  double pm = 1.0, p = x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * p - k * pm) / (k + 1.0);
    pm = p;
    p = next;
  }
  return p;
}

double sigma_n(int n, const MassConfig& m) {
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return std::pow(m.sigma0, n - 1) + sign * std::pow(m.sigma1, n - 1);
}

SeriesResult pert_series(const JacobiState& s, const MassConfig& m, int N) {
  const double r1 = s.Q1.norm(), r2 = s.Q2.norm();
  if (r2 == 0.0) fail(Errc::OuterCollision, "Q2 = 0");
  const double rho = r1 / r2;
  const double q = m.sigma_hat() * rho;
  if (!(q < 1.0)) fail(Errc::RatioTooLarge, "sigma_hat |Q1|/|Q2| >= 1");
  SeriesResult res;
  res.terms.assign(static_cast<std::size_t>(std::max(N, 1)) + 1, 0.0);
  if (r1 == 0.0) return res;
  const double c = std::clamp(s.Q1.dot(s.Q2) / (r1 * r2), -1.0, 1.0);
  const double scale = m.mu1 * m.m2;
  double abs_sum = 0.0;
  double pw = rho * rho;  // rho^(n+1) at n = 1
  for (int n = 2; n <= N; ++n) {
    pw *= rho;
    const double t = -scale * sigma_n(n, m) * legendre_eval(n, c) * pw;
    res.terms[n] = t;
    res.value += t;
    abs_sum += scale * std::abs(sigma_n(n, m)) * pw;
  }
  // |P_n| <= 1 on [-1,1] and |sigma_n| <= 2 sigma_hat^(n-1).
  res.tail_bound = 2.0 * scale * rho * rho * std::pow(q, N) / (1.0 - q);
  // A direct evaluation loses digits to cancellation between its parts; their size is
  // that of the terms with |P_n| replaced by 1.
  res.rounding = 64.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  return res;
}

double pert_bound(double alpha, double e2max, const MassConfig& m) {
  const double d = 1.0 - e2max - 20.0 * alpha;
  if (!(d > 0.0)) fail(Errc::AlphaTooLarge, "1 - e2max - 20 alpha <= 0");
  const double om = 1.0 - e2max;
  return m.mu1 * m.m2 / 5.0 * 8000.0 * alpha * alpha * alpha / (om * om * d);
}

}  // namespace ksreg
