#include "ksreg/secular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "ksreg/elements.hpp"
#include "ksreg/errors.hpp"

namespace ksreg {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

bool is_physical(const SecularPoint& sp, double tol) {
  if (!(sp.L1 > 0.0 && sp.L2 > 0.0 && sp.C > 0.0 && sp.G2 > 0.0 && sp.G1 >= 0.0)) return false;
  const double scale = std::max({sp.L1, sp.L2, sp.C, sp.G2});
  const double slack = tol * scale;
  if (sp.G2 > sp.L2 + slack) return false;
  if (std::abs(sp.C - sp.G2) > sp.G1 + slack) return false;
  if (sp.G1 > std::min(sp.L1, sp.C + sp.G2) + slack) return false;
  return true;
}

EllipsePair geometry_from_secular(const SecularPoint& sp) {
  if (!is_physical(sp)) fail(Errc::NonPhysicalPoint, "secular point violates the triangle inequality");
  const double x1 = std::min(1.0, sp.G1 / sp.L1), x2 = std::min(1.0, sp.G2 / sp.L2);
  EllipsePair g;
  g.e1 = std::sqrt(std::max(0.0, 1.0 - x1 * x1));
  g.e2 = std::sqrt(std::max(0.0, 1.0 - x2 * x2));
  const double C = sp.C, G1 = sp.G1, G2 = sp.G2;
  const double ci1 = G1 > 0.0 ? std::clamp((C * C + G1 * G1 - G2 * G2) / (2.0 * C * G1), -1.0, 1.0) : 0.0;
  const double ci2 = std::clamp((C * C + G2 * G2 - G1 * G1) / (2.0 * C * G2), -1.0, 1.0);
  const Eigen::Matrix3d R1 = orbit_frame(kPi, std::acos(ci1), sp.g1);
  const Eigen::Matrix3d R2 = orbit_frame(0.0, std::acos(ci2), sp.g2);
  g.P1 = R1.col(0);
  g.Q1 = R1.col(1);
  g.P2 = R2.col(0);
  g.Q2 = R2.col(1);
  return g;
}

EllipsePair coplanar_geometry(double e1, double e2, double g1, double g2) {
  EllipsePair g;
  g.e1 = e1;
  g.e2 = e2;
  g.P1 = Vec3(std::cos(g1), std::sin(g1), 0.0);
  g.Q1 = Vec3(-std::sin(g1), std::cos(g1), 0.0);
  g.P2 = Vec3(std::cos(g2), std::sin(g2), 0.0);
  g.Q2 = Vec3(-std::sin(g2), std::cos(g2), 0.0);
  return g;
}

ParityAverage average_pert_parts(const EllipsePair& geom, double a1, double alpha,
                                 const MassConfig& m, int nodes) {
  const int n = std::max(nodes, 1);
  const double a2 = a1 / alpha;
  const double b1 = std::sqrt(std::max(0.0, 1.0 - geom.e1 * geom.e1));
  const double b2 = std::sqrt(std::max(0.0, 1.0 - geom.e2 * geom.e2));
  std::vector<Vec3> q1(n), q2(n);
  std::vector<double> w1(n), w2(n);
  for (int j = 0; j < n; ++j) {
    const double u = kTwoPi * j / n;
    const double c = std::cos(u), s = std::sin(u);
    q1[j] = a1 * ((c - geom.e1) * geom.P1 + b1 * s * geom.Q1);
    w1[j] = a1 * (1.0 - geom.e1 * c);
    q2[j] = a2 * ((c - geom.e2) * geom.P2 + b2 * s * geom.Q2);
    w2[j] = 1.0 - geom.e2 * c;
  }
  double even = 0.0, odd = 0.0;
  for (int k = 0; k < n; ++k) {
    double ek = 0.0, ok = 0.0;
    for (int j = 0; j < n; ++j) {
      if (w1[j] == 0.0) continue;
      const double fp = f_pert(q1[j], q2[k], m);
      const double fm = f_pert(-q1[j], q2[k], m);
      ek += w1[j] * (fp + fm);
      ok += w1[j] * (fp - fm);
    }
    even += w2[k] * ek;
    odd += w2[k] * ok;
  }
  const double norm = 0.5 / (static_cast<double>(n) * n);
  return {even * norm, odd * norm};
}

double average_pert(const SecularPoint& sp, double a1, double alpha, const MassConfig& m, int nodes) {
  return average_pert_parts(geometry_from_secular(sp), a1, alpha, m, nodes).total();
}

namespace {

Eigen::VectorXd fit_alpha_squared(std::span<const double> alphas, std::span<const double> values,
                                  int p, double* rms) {
  const int n = static_cast<int>(alphas.size());
  Eigen::MatrixXd A(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double a2 = alphas[i] * alphas[i];
    double pw = 1.0;
    for (int j = 0; j < p; ++j) {
      A(i, j) = pw;
      pw *= a2;
    }
    y(i) = values[i];
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  if (rms) *rms = n > p ? std::sqrt((A * c - y).squaredNorm() / n) : 0.0;
  return c;
}

}  // namespace

Extrapolation extrapolate_alpha_squared(std::span<const double> alphas, std::span<const double> values) {
  const int n = static_cast<int>(alphas.size());
  if (n == 0) return {0.0, 0.0};
  const int p = std::min(n, 3);
  double rms = 0.0;
  const double v = fit_alpha_squared(alphas, values, p, &rms)(0);
  if (n > p) return {v, rms};
  if (p == 1) return {v, 0.0};
  const double lower = fit_alpha_squared(alphas, values, p - 1, nullptr)(0);
  return {v, std::abs(v - lower)};
}

AlphaExpansion alpha_expansion(const EllipsePair& geom, const MassConfig& m,
                               std::span<const double> alphas, int nodes) {
  std::vector<double> ev, ov;
  for (double a : alphas) {
    const ParityAverage pa = average_pert_parts(geom, 1.0, a, m, nodes);
    ev.push_back(pa.even / (a * a * a));
    ov.push_back(pa.odd / (a * a * a * a));
  }
  const Extrapolation q = extrapolate_alpha_squared(alphas, ev);
  const Extrapolation o = extrapolate_alpha_squared(alphas, ov);
  return {q.value, o.value, q.residual, o.residual};
}

QuadPartials f_quad_partials(double G1, double g1, double L1, double L2, double C, double G2,
                             double mu_quad) {
  const double delta = C - G2;
  double rho = -1.0;
  if (G1 == 0.0) {
    if (delta != 0.0) fail(Errc::SingularCoordinates, "G1 = 0 with C != G2");
  } else {
    rho = delta * (C + G2) / (G1 * G1) - 1.0;
  }
  const double G2s = G2 * G2;
  const double X = rho * rho * G1 * G1 / (4.0 * G2s);
  const double X_G1 = -rho * G1 / G2s - rho * rho * G1 / (2.0 * G2s);
  const double X_G2 = -rho / G2 - rho * rho * G1 * G1 / (2.0 * G2s * G2);
  const double X_C = C * rho / G2s;
  const double u = G1 * G1 / (L1 * L1);
  const double u_G1 = 2.0 * G1 / (L1 * L1);
  const double u_L1 = -2.0 * u / L1;
  const double cg = std::cos(g1), sg = std::sin(g1);
  const double c2 = cg * cg, s2 = sg * sg;
  const double B = 3.0 * u * (1.0 + X) + 15.0 * (1.0 - u) * (c2 + s2 * X) - 6.0 * (1.0 - u) - 4.0;
  const double B_u = 3.0 * (1.0 + X) - 15.0 * (c2 + s2 * X) + 6.0;
  const double B_X = 3.0 * u + 15.0 * (1.0 - u) * s2;
  const double p = mu_quad * L2 * L2 * L2 / (8.0 * G2s * G2);
  QuadPartials r;
  r.value = -p * B;
  r.dG1 = -p * (B_u * u_G1 + B_X * X_G1);
  r.dg1 = -p * 30.0 * (1.0 - u) * sg * cg * (X - 1.0);
  r.dG2 = 3.0 * p * B / G2 - p * B_X * X_G2;
  r.dL1 = -p * B_u * u_L1;
  r.dL2 = 3.0 * r.value / L2;
  r.dC = -p * B_X * X_C;
  return r;
}

double f_quad(const SecularPoint& sp, double mu_quad) {
  return f_quad_partials(sp.G1, sp.g1, sp.L1, sp.L2, sp.C, sp.G2, mu_quad).value;
}

double f_quad(const SecularPoint& sp, const MassConfig& m) { return f_quad(sp, m.mu_quad); }

double f_quad_literal(const SecularPoint& sp, double mu_quad) {
  const double G1 = sp.G1, G2 = sp.G2, C = sp.C, L1 = sp.L1, L2 = sp.L2;
  if (G1 == 0.0) fail(Errc::SingularCoordinates, "literal form needs G1 != 0");
  const double D = C * C - G1 * G1 - G2 * G2;
  const double X = D * D / (4.0 * G1 * G1 * G2 * G2);
  const double u = G1 * G1 / (L1 * L1);
  const double c = std::cos(sp.g1), s = std::sin(sp.g1);
  const double braces = 3.0 * u * (1.0 + X) + 15.0 * (1.0 - u) * (c * c + s * s * X) -
                        6.0 * (1.0 - u) - 4.0;
  return -mu_quad * L2 * L2 * L2 / (8.0 * G2 * G2 * G2) * braces;
}

double nu_quad2(const SecularPoint& sp, double mu_quad) {
  return f_quad_partials(sp.G1, sp.g1, sp.L1, sp.L2, sp.C, sp.G2, mu_quad).dG2;
}

double nu_quad2(const SecularPoint& sp, const MassConfig& m) { return nu_quad2(sp, m.mu_quad); }

double octupolar_coplanar(double e1, double e2, double dg) {
  return -15.0 / 64.0 * (4.0 * e1 + 3.0 * e1 * e1 * e1) * e2 * std::pow(1.0 - e2 * e2, -2.5) *
         std::cos(dg);
}

FastModel::FastModel(const EllipsePair& geom, const MassConfig& m, double a1, double alpha)
    : geom_(geom), m_(m) {
  const double a2 = a1 / alpha;
  f_ = m.mu1 * m.M1 / (2.0 * a1) + m.mu2 * m.M2 / (2.0 * a2);
  L2_ = m.mu2 * std::sqrt(m.M2 * a2);
  P0_ = a1 * std::sqrt(2.0 * m.mu1 * f1_of_L2(L2_, f_, m));
}

double FastModel::nu1(double L2) const { return std::sqrt(2.0 * f1_of_L2(L2, f_, m_) / m_.mu1); }

double FastModel::kepler(double P0, double L2) const {
  return P0 * nu1(L2) - m_.mu1 * m_.M1;
}

double FastModel::pert(double P0, double theta0, double L2, double l2) const {
  const double f1 = f1_of_L2(L2, f_, m_);
  if (!(f1 > 0.0)) fail(Errc::ChartDegenerate, "f1 <= 0 in the fast model");
  const double a1 = P0 / std::sqrt(2.0 * m_.mu1 * f1);
  const double a2 = L2 * L2 / (m_.mu2 * m_.mu2 * m_.M2);
  const double b1 = std::sqrt(std::max(0.0, 1.0 - geom_.e1 * geom_.e1));
  const double b2 = std::sqrt(1.0 - geom_.e2 * geom_.e2);
  const double c1 = std::cos(theta0), s1 = std::sin(theta0);
  const double u2 = solve_kepler(l2, geom_.e2);
  const double c2 = std::cos(u2), s2 = std::sin(u2);
  const Vec3 q1 = a1 * ((c1 - geom_.e1) * geom_.P1 + b1 * s1 * geom_.Q1);
  const Vec3 q2 = a2 * ((c2 - geom_.e2) * geom_.P2 + b2 * s2 * geom_.Q2);
  const double r1 = a1 * (1.0 - geom_.e1 * c1);
  return r1 == 0.0 ? 0.0 : r1 * f_pert(q1, q2, m_);
}

FirstOrderGenerator::FirstOrderGenerator(const FastModel& model, int dft_nodes)
    : model_(model), nodes_(std::max(dft_nodes, 8)) {}

FirstOrderGenerator::Series FirstOrderGenerator::series(double P0, double L2, double l2) const {
  const int n = nodes_;
  const int K = n / 2 - 1;
  std::vector<double> F(n);
  for (int j = 0; j < n; ++j) F[j] = model_.pert(P0, kTwoPi * j / n, L2, l2);
  Series s;
  s.a.assign(K, 0.0);
  s.b.assign(K, 0.0);
  for (int k = 1; k <= K; ++k) {
    double ca = 0.0, sb = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = kTwoPi * ((static_cast<long>(k) * j) % n) / n;
      ca += F[j] * std::cos(t);
      sb += F[j] * std::sin(t);
    }
    s.a[k - 1] = 2.0 * ca / n;
    s.b[k - 1] = 2.0 * sb / n;
  }
  return s;
}

double FirstOrderGenerator::eval_series(const Series& s, double theta0, double nu1) const {
  double h = 0.0;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    h += (s.a[i] * std::sin(k * theta0) - s.b[i] * std::cos(k * theta0)) / k;
  }
  return h / nu1;
}

double FirstOrderGenerator::eval_series_dtheta(const Series& s, double theta0, double nu1) const {
  double h = 0.0;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    h += s.a[i] * std::cos(k * theta0) + s.b[i] * std::sin(k * theta0);
  }
  return h / nu1;
}

double FirstOrderGenerator::operator()(double P0, double theta0, double L2, double l2) const {
  return eval_series(series(P0, L2, l2), theta0, model_.nu1(L2));
}

FirstOrderGenerator::Gradient FirstOrderGenerator::gradient(double P0, double theta0, double L2,
                                                            double l2) const {
  const auto value = [&](double p, double L, double l) {
    return eval_series(series(p, L, l), theta0, model_.nu1(L));
  };
  // Fourth-order central differences.
  const auto d4 = [](auto&& fn, double h) {
    return (8.0 * (fn(h) - fn(-h)) - (fn(2.0 * h) - fn(-2.0 * h))) / (12.0 * h);
  };
  Gradient g;
  const double hP = 1e-4 * P0, hL = 1e-4 * L2, hl = 1e-3;
  g.dP0 = d4([&](double h) { return value(P0 + h, L2, l2); }, hP);
  g.dL2 = d4([&](double h) { return value(P0, L2 + h, l2); }, hL);
  g.dl2 = d4([&](double h) { return value(P0, L2, l2 + h); }, hl);
  g.dtheta0 = eval_series_dtheta(series(P0, L2, l2), theta0, model_.nu1(L2));
  return g;
}

std::array<double, 4> FirstOrderGenerator::time_one_map(const std::array<double, 4>& x,
                                                        int rk_steps) const {
  using V = std::array<double, 4>;
  const auto field = [&](const V& y) {
    const Gradient g = gradient(y[0], y[1], y[2], y[3]);
    return V{-g.dtheta0, g.dP0, -g.dl2, g.dL2};
  };
  const auto axpy = [](const V& y, double h, const V& k) {
    return V{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
  };
  V y = x;
  const double h = 1.0 / std::max(rk_steps, 1);
  for (int s = 0; s < std::max(rk_steps, 1); ++s) {
    const V k1 = field(y);
    const V k2 = field(axpy(y, 0.5 * h, k1));
    const V k3 = field(axpy(y, 0.5 * h, k2));
    const V k4 = field(axpy(y, h, k3));
    for (int i = 0; i < 4; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

EliminationReport elimination_generator(const EllipsePair& geom, const MassConfig& m,
                                        const EliminationOptions& opt) {
  EliminationReport rep;
  for (double alpha : opt.alphas) {
    const FastModel model(geom, m, opt.a1, alpha);
    const FirstOrderGenerator gen(model, opt.dft_nodes);
    EliminationSample smp;
    smp.alpha = alpha;
    const double P0 = model.P0_base(), L2 = model.L2_base();
    for (int jl = 0; jl < opt.l2_nodes; ++jl) {
      const double l2 = kTwoPi * jl / opt.l2_nodes;
      std::vector<double> K(opt.theta_nodes), F(opt.theta_nodes), H(opt.theta_nodes);
      for (int it = 0; it < opt.theta_nodes; ++it) {
        const double th = kTwoPi * it / opt.theta_nodes;
        H[it] = gen(P0, th, L2, l2);
        F[it] = model.total(P0, th, L2, l2);
        const auto y = gen.time_one_map({P0, th, L2, l2}, opt.rk_steps);
        K[it] = model.total(y[0], y[1], y[2], y[3]);
      }
      const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
      };
      const double mk = mean(K), mf = mean(F), mh = mean(H);
      smp.generator_mean = std::max(smp.generator_mean, std::abs(mh));
      for (int it = 0; it < opt.theta_nodes; ++it) {
        smp.generator_amplitude = std::max(smp.generator_amplitude, std::abs(H[it]));
        smp.residual_amplitude = std::max(smp.residual_amplitude, std::abs(K[it] - mk));
        smp.pert_oscillation = std::max(smp.pert_oscillation, std::abs(F[it] - mf));
      }
    }
    rep.samples.push_back(smp);
  }
  std::vector<double> al, res, gam;
  for (const auto& s : rep.samples) {
    al.push_back(s.alpha);
    res.push_back(s.residual_amplitude);
    gam.push_back(s.generator_amplitude);
  }
  if (al.size() >= 2) {
    rep.residual_exponent = loglog_slope(al, res);
    rep.generator_exponent = loglog_slope(al, gam);
  }
  return rep;
}

double bordered_determinant(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess) {
  const Eigen::Index p = grad.size();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(p + 1, p + 1);
  B.block(0, 1, 1, p) = grad.transpose();
  B.block(1, 0, p, 1) = grad;
  B.block(1, 1, p, p) = hess;
  return B.determinant();
}

double bordered_hessian(const std::function<double(std::span<const double>)>& K,
                        std::span<const double> point, double rel_step) {
  const int p = static_cast<int>(point.size());
  std::vector<double> h(p);
  for (int i = 0; i < p; ++i) h[i] = rel_step * std::max(std::abs(point[i]), 1.0);
  std::vector<double> x(point.begin(), point.end());
  const auto eval = [&](int i, double di, int j, double dj) {
    std::vector<double> y = x;
    if (i >= 0) y[i] += di;
    if (j >= 0) y[j] += dj;
    return K(y);
  };
  const double k0 = K(x);
  const auto estimate = [&](double scale, Eigen::VectorXd& g, Eigen::MatrixXd& H) {
    g.resize(p);
    H.resize(p, p);
    for (int i = 0; i < p; ++i) {
      const double hi = h[i] * scale;
      const double kp = eval(i, hi, -1, 0.0), km = eval(i, -hi, -1, 0.0);
      g(i) = (kp - km) / (2.0 * hi);
      H(i, i) = (kp - 2.0 * k0 + km) / (hi * hi);
      for (int j = 0; j < i; ++j) {
        const double hj = h[j] * scale;
        const double v = (eval(i, hi, j, hj) - eval(i, hi, j, -hj) - eval(i, -hi, j, hj) +
                          eval(i, -hi, j, -hj)) / (4.0 * hi * hj);
        H(i, j) = H(j, i) = v;
      }
    }
  };
  Eigen::VectorXd g1, g2;
  Eigen::MatrixXd H1, H2;
  estimate(1.0, g1, H1);
  estimate(0.5, g2, H2);
  const Eigen::VectorXd g = (4.0 * g2 - g1) / 3.0;
  const Eigen::MatrixXd H = (4.0 * H2 - H1) / 3.0;
  return bordered_determinant(g, H);
}

}  // namespace ksreg
