#include <cmath>
#include <vector>

#include "doctest.h"
#include "ksreg/dop853.hpp"
#include "ksreg/errors.hpp"

using namespace ksreg;

TEST_CASE("harmonic oscillator") {
  const auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  Dop853::Options o;
  o.rtol = 1e-13;
  o.atol = 1e-15;
  Dop853 s(rhs, 2, o);
  const std::vector<double> y0{1.0, 0.0};
  s.reset(0.0, y0);
  std::vector<double> y(2);
  double worst_dense = 0.0;
  while (s.step(100.0)) {
    const double tm = 0.5 * (s.t_prev() + s.t());
    s.dense(tm, y);
    worst_dense = std::max(worst_dense, std::abs(y[0] - std::cos(tm)));
  }
  CHECK(s.t() == 100.0);
  CHECK(std::abs(s.y()[0] - std::cos(100.0)) <= 1e-10);
  CHECK(std::abs(s.y()[1] + std::sin(100.0)) <= 1e-10);
  CHECK(worst_dense <= 1e-10);
}

TEST_CASE("eighth order convergence") {
  const auto rhs = [](double t, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * std::cos(t); };
  const auto err = [&](double tol) {
    Dop853::Options o;
    o.rtol = tol;
    o.atol = tol;
    Dop853 s(rhs, 1, o);
    const std::vector<double> y0{1.0};
    s.reset(0.0, y0);
    while (s.step(10.0)) {
    }
    return std::abs(s.y()[0] - std::exp(std::sin(10.0)));
  };
  CHECK(err(1e-12) < 1e-9);
  CHECK(err(1e-12) < err(1e-6));
}

TEST_CASE("root location on the dense output") {
  const auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  Dop853::Options o;
  Dop853 s(rhs, 2, o);
  const std::vector<double> y0{1.0, 0.0};
  s.reset(0.0, y0);
  const auto g = [](double, std::span<const double> y) { return y[0]; };
  std::vector<double> roots;
  double prev = 1.0;
  while (s.step(20.0)) {
    const double cur = s.y()[0];
    if ((prev < 0.0) != (cur < 0.0)) roots.push_back(locate_root(s, g, s.t_prev(), s.t(), prev, cur));
    prev = cur;
  }
  REQUIRE(roots.size() == 6);
  for (std::size_t k = 0; k < roots.size(); ++k)
    CHECK(roots[k] == doctest::Approx((k + 0.5) * M_PI).epsilon(1e-11));
}

TEST_CASE("step budget") {
  const auto rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
  Dop853::Options o;
  o.max_steps = 3;
  Dop853 s(rhs, 1, o);
  const std::vector<double> y0{1.0};
  s.reset(0.0, y0);
  CHECK_THROWS_AS(
      [&] {
        while (s.step(1000.0)) {
        }
      }(),
      Error);
}
