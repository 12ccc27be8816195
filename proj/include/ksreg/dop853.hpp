#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace ksreg {

// Dormand-Prince 8(5,3) with seventh-order dense output.
class Dop853 {
 public:
  using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

  struct Options {
    double rtol = 1e-12;
    double atol = 1e-14;
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 50'000'000;
  };

  Dop853(Rhs rhs, std::size_t n, Options opt);

  void reset(double t0, std::span<const double> y0);

  // One accepted step towards t_end (never past it). Returns false once t_end is reached.
  // Throws StepFailure when the step size underflows or the step budget is exhausted.
  bool step(double t_end);

  double t() const { return t_; }
  double t_prev() const { return t_old_; }
  double h_last() const { return h_last_; }
  const std::vector<double>& y() const { return y_; }
  std::size_t size() const { return n_; }

  // Interpolated state on [t_prev, t] of the last accepted step.
  void dense(double t, std::span<double> out) const;
  double dense_component(double t, std::size_t i) const;

  std::size_t accepted_steps() const { return n_accept_; }
  std::size_t rejected_steps() const { return n_reject_; }
  std::size_t evaluations() const { return n_eval_; }

 private:
  void eval(double t, const std::vector<double>& y, std::vector<double>& dy);
  double initial_step(double h_max, double dir);
  void stages(double h);
  double error_norm(double h) const;
  void prepare_dense(double h);

  Rhs rhs_;
  std::size_t n_;
  Options opt_;
  double t_ = 0.0, t_old_ = 0.0, h_ = 0.0, h_last_ = 0.0, facold_ = 1e-4;
  bool started_ = false, reject_ = false;
  std::vector<double> y_, ynew_, tmp_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, k8_, k9_, k10_;
  std::vector<double> rc_[8];
  std::size_t n_accept_ = 0, n_reject_ = 0, n_eval_ = 0, n_steps_ = 0;
};

// Root of g on [ta, tb] along the dense interpolant of the last step, given a sign change.
double locate_root(const Dop853& s, const std::function<double(double, std::span<const double>)>& g,
                   double ta, double tb, double ga, double gb);

}  // namespace ksreg
