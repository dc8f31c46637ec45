#pragma once

// Adaptive Dormand-Prince RK45 for vector ODEs, with error-per-unit-step
// control so the accumulated error scales linearly with the tolerance.

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

namespace sk {

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OdeOptions {
  double tol = 1e-10;
  double h_init = 1e-2;
  double h_min = 1e-12;
  int max_steps = 2000000;
};

// Integrates y' = f(s, y) from s0 to s1.
Eigen::VectorXd integrate_rk45(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f, double s0,
    double s1, Eigen::VectorXd y, const OdeOptions& opt = {});

// Closed curve on [0,1] with velocity.
struct Loop {
  std::function<Eigen::VectorXd(double)> pos;
  std::function<Eigen::VectorXd(double)> vel;
};

// Periodic cubic spline through waypoints (rows of W), parametrized on [0,1].
Loop spline_loop(const Eigen::MatrixXd& waypoints);

// Planar circle s -> c + r(cos(2 pi s) u + sin(2 pi s) v).
Loop circle_loop(const Eigen::VectorXd& center, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v, double r);

// Straight segment from x0 to x0 + delta (closed only through a coordinate
// identification; used for torus translations).
Loop segment_loop(const Eigen::VectorXd& x0, const Eigen::VectorXd& delta);

}  // namespace sk
