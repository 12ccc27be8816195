#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ksreg/elements.hpp"
#include "ksreg/errors.hpp"
#include "ksreg/quad_dynamics.hpp"
#include "oracles.hpp"

using namespace ksreg;
using std::numbers::pi;

namespace {

QuadParams unit_cover() { return {1.0, 1.0, 1.0, 1.0, 1.0}; }

// Hessian determinant by plain second differences, no extrapolation.
double fd_hessian_det(const QuadParams& q, double G1, double g1, double h) {
  const auto f = [&](double x, double y) { return quad_energy({x, y}, q); };
  const double fxx = (f(G1 + h, g1) - 2 * f(G1, g1) + f(G1 - h, g1)) / (h * h);
  const double fyy = (f(G1, g1 + h) - 2 * f(G1, g1) + f(G1, g1 - h)) / (h * h);
  const double fxy = (f(G1 + h, g1 + h) - f(G1 + h, g1 - h) - f(G1 - h, g1 + h) + f(G1 - h, g1 - h)) / (4 * h * h);
  return fxx * fyy - fxy * fxy;
}

}  // namespace

TEST_CASE("vector field and equilibria") {
  const auto q = unit_cover();
  for (double g : {0.0, pi, pi / 2, -pi / 2}) {
    const auto v = quad_vector_field({0.0, g}, q);
    CHECK(std::abs(v[0]) <= 1e-15);
    CHECK(std::abs(v[1]) <= 1e-15);
  }
  oracle::Rng rng(61);
  const QuadParams p{1.3, 1.7, 1.1, 0.9, 0.6};
  for (int n = 0; n < 100; ++n) {
    const double G1 = rng.uniform(0.25, 1.2), g1 = rng.uniform(0, 2 * pi);
    const auto v = quad_vector_field({G1, g1}, p);
    const double dG = oracle::derivative([&](double x) { return quad_energy({x, g1}, p); }, G1, 1e-4);
    const double dg = oracle::derivative([&](double x) { return quad_energy({G1, x}, p); }, g1, 1e-4);
    CHECK(std::abs(v[0] + dg) <= 1e-9);
    CHECK(std::abs(v[1] - dG) <= 1e-9);
  }
}

TEST_CASE("Morse Hessian at the centre") {
  CHECK(equilibrium_hessian_closed(unit_cover()) == doctest::Approx(5.625).epsilon(1e-15));
  QuadParams q = unit_cover();
  q.L1 = 2.0;
  CHECK(equilibrium_hessian_closed(q) == doctest::Approx(45.0 / 32.0).epsilon(1e-15));
  CHECK(equilibrium_hessian(unit_cover()) == doctest::Approx(5.625).epsilon(1e-8));
  oracle::Rng rng(62);
  for (int n = 0; n < 20; ++n) {
    QuadParams r{rng.uniform(0.5, 2), rng.uniform(0.5, 2), 0.0, rng.uniform(0.5, 2), rng.uniform(0.1, 2)};
    r.C = r.G2;
    const double oracle_det = fd_hessian_det(r, 0.0, 0.0, 1e-4 * std::min(r.L1, r.G2));
    CHECK(oracle_det == doctest::Approx(equilibrium_hessian_closed(r)).epsilon(1e-5));
    CHECK(equilibrium_hessian(r) == doctest::Approx(equilibrium_hessian_closed(r)).epsilon(1e-8));
  }
}

TEST_CASE("orbits on the double cover") {
  const auto q = unit_cover();
  CHECK_THROWS_AS(trace_orbit({0.0, 0.0}, q), Error);

  SUBCASE("small orbits have the linear period") {
    const double omega = std::sqrt(equilibrium_hessian_closed(q));
    double prev = 1.0;
    for (double amp : {1e-2, 5e-3, 2.5e-3}) {
      const auto o = trace_orbit({amp, 0.0}, q);
      const double err = std::abs(o.period - 2 * pi / omega) / (2 * pi / omega);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-4);
  }
  SUBCASE("energy, closure and crossings") {
    for (double amp : {0.1, 0.3, 0.6, 0.9}) {
      const auto o = trace_orbit({amp, 0.0}, q);
      CHECK(o.energy_drift < 1e-10);
      CHECK(o.closure_gap < 1e-8);
      CHECK(o.winding == 0);
      CHECK(o.crossings.size() == 2);
      for (const auto& c : o.crossings) CHECK(c.angle == doctest::Approx(pi / 2).epsilon(1e-6));
    }
  }
  SUBCASE("flow commutes with the symmetry") {
    const PhasePoint p{0.3, 0.4};
    const double t = 2.7;
    const auto a = cover_symmetry(quad_flow(p, q, t));
    const auto b = quad_flow(cover_symmetry(p), q, t);
    CHECK(a.G1 == doctest::Approx(b.G1).epsilon(1e-10));
    CHECK(std::abs(wrap_pi(a.g1 - b.g1)) <= 1e-10);
  }
  SUBCASE("action grows with the amplitude") {
    double prev = 0.0;
    for (double amp : {1e-3, 0.05, 0.2, 0.4, 0.7}) {
      const auto o = trace_orbit({amp, 0.0}, q);
      CHECK(o.action > prev);
      prev = o.action;
    }
    const auto tiny = trace_orbit({1e-4, 0.0}, q);
    CHECK(tiny.action < 1e-7);
  }
}

TEST_CASE("action by the shoelace formula") {
  const auto q = unit_cover();
  const auto o = trace_orbit({0.4, 0.0}, q);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < o.G1.size(); ++i)
    area += 0.5 * (o.g1[i] * o.G1[i + 1] - o.g1[i + 1] * o.G1[i]);
  // Polygon from accepted steps only: loose agreement.
  CHECK(std::abs(area) / (2 * pi) == doctest::Approx(o.action).epsilon(1e-2));
  const auto f = action_and_frequencies(o, q);
  CHECK(std::abs(f.dE_dJ) == doctest::Approx(2 * pi / o.period));
}

TEST_CASE("frequencies from actions") {
  const QuadParams q{1.0, 1.2, 1.0, 0.9, 0.8};
  const double J = 0.02;
  const auto start = start_for_action(J, q);
  const auto o = trace_orbit(start, q);
  CHECK(o.action == doctest::Approx(J).epsilon(1e-10));
  const auto f = action_and_frequencies(o, q);
  // dE/dJ from two neighbouring orbits.
  const double h = 1e-4;
  const auto ep = action_and_frequencies(trace_orbit(start_for_action(J + h, q), q), q).energy;
  const auto em = action_and_frequencies(trace_orbit(start_for_action(J - h, q), q), q).energy;
  CHECK(f.dE_dJ == doctest::Approx((ep - em) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("portraits") {
  SUBCASE("cover") {
    const auto p = phase_portrait(unit_cover(), {});
    CHECK(p.orbits.size() == 8);
    REQUIRE(p.mirrored.size() == 8);
    for (std::size_t k = 0; k < p.orbits.size(); ++k) {
      CHECK(p.orbits[k].energy == doctest::Approx(p.mirrored[k].energy).epsilon(1e-12));
      CHECK(p.orbits[k].period == doctest::Approx(p.mirrored[k].period).epsilon(1e-8));
      if (k > 0) CHECK(p.orbits[k].energy > p.orbits[k - 1].energy);
    }
    int centres = 0, fixed = 0;
    for (const auto& e : p.equilibria) {
      if (e.symmetry_fixed) {
        ++fixed;
        CHECK(std::abs(std::cos(e.point.g1)) <= 1e-15);
      } else {
        ++centres;
        CHECK(e.hessian_det > 0.0);
      }
    }
    CHECK(centres == 2);
    CHECK(fixed == 2);
  }
  SUBCASE("near coplanar") {
    const QuadParams q{1.0, 1.0, 1.05, 1.0, 1.0};
    const auto p = phase_portrait(q, {});
    CHECK(p.mirrored.empty());
    REQUIRE(p.equilibria.size() == 1);
    CHECK(p.equilibria[0].point.G1 == doctest::Approx(0.05));
    for (const auto& o : p.orbits) {
      CHECK(o.winding != 0);
      CHECK(o.closure_gap < 1e-8);
    }
  }
  SUBCASE("empty specification") {
    PortraitSpec s;
    s.orbits = 0;
    CHECK_THROWS_AS(phase_portrait(unit_cover(), s), Error);
  }
}

TEST_CASE("normalized quadrupolar function") {
  SUBCASE("xi is the delta derivative of w_bar") {
    oracle::Rng rng(63);
    for (int n = 0; n < 50; ++n) {
      const double a = rng.uniform(0.3, 1.5), b = rng.uniform(0.3, 1.5), w = rng.uniform(0, 2 * pi);
      if (std::abs(a - b) < 0.05) continue;
      const double d0 = std::abs(a - b);
      const double fd = oracle::derivative([&](double d) { return normalized_w_bar(a, b, d, w); }, d0, 1e-4 * d0);
      CHECK(xi_bar(a, b, w) == doctest::Approx(fd).epsilon(1e-7));
    }
    CHECK_THROWS_AS(xi_bar(1.0, 1.0, 0.3), Error);
  }
  SUBCASE("closed form against quadrature") {
    for (double a : {0.4, 0.7, 1.0, 1.3})
      for (double b : {0.5, 0.8, 1.1, 1.4}) {
        const auto r = frequency_coefficient_quadrature(a, b);
        CHECK(r.value == doctest::Approx(frequency_coefficient(a, b)).epsilon(1e-10));
      }
    const auto near = frequency_coefficient_quadrature(1.0 + 1e-4, 1.0);
    CHECK(near.value == doctest::Approx(frequency_coefficient(1.0 + 1e-4, 1.0)).epsilon(1e-10));
    CHECK(frequency_coefficient(1.0, 1.0) == doctest::Approx(-2 * std::sqrt(10.0)).epsilon(1e-15));
    CHECK_THROWS_AS(frequency_coefficient(3.0, 0.1), Error);
  }
  SUBCASE("torsion") {
    CHECK(torsion_limit(1.0) == 562.5);
    CHECK(torsion_limit(2.0) == doctest::Approx(1125.0 / 512.0).epsilon(1e-15));
    CHECK_THROWS_AS(torsion(1.0, 1.0), Error);
    const double a = 0.9, b = 1.2;
    const double d = oracle::derivative([&](double x) { return frequency_coefficient(a, x); }, b, 1e-3);
    CHECK(torsion(a, b).torsion == doctest::Approx(d * d).epsilon(1e-8));
    for (double beta : {0.5, 1.0, 2.0})
      CHECK(torsion_limit_estimate(beta) == doctest::Approx(torsion_limit(beta)).epsilon(1e-6));
  }
}

TEST_CASE("frequency map of the quadrupolar tori") {
  TorusModel tm;
  tm.m = MassConfig::from_masses(1.0, 0.3, 1.0);
  const auto& m = tm.m;
  const double a1 = 1.0, alpha = 0.05, a2 = a1 / alpha, e2 = 0.3;
  const double L2 = m.mu2 * std::sqrt(m.M2 * a2), G2 = L2 * std::sqrt(1 - e2 * e2);
  const double L1 = m.mu1 * std::sqrt(m.M1 * a1);
  tm.f = m.mu1 * m.M1 / (2 * a1) + m.mu2 * m.M2 / (2 * a2);
  tm.C = G2 + 0.1 * L1;
  const double P0 = a1 * std::sqrt(2 * m.mu1 * f1_of_L2(L2, tm.f, m));
  const std::array<double, 4> x{P0, L2, 0.01 * L1, G2};
  const auto d = torus_data(tm, x);
  for (int j = 0; j < 4; ++j) {
    const double h = 1e-4 * std::abs(x[j]);
    const double fd = oracle::derivative(
        [&](double v) {
          auto y = x;
          y[j] = v;
          return torus_data(tm, y).H;
        },
        x[j], h);
    CHECK(d.nu[j] == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK(frequency_jacobian(tm, x).nonzero());
}
