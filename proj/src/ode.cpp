#include "sk/ode.hpp"

#include <cmath>
#include <numbers>

namespace sk {

Eigen::VectorXd integrate_rk45(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f, double s0,
    double s1, Eigen::VectorXd y, const OdeOptions& opt) {
  // Dormand-Prince 5(4) coefficients.
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double s = s0;
  double dir = (s1 >= s0) ? 1.0 : -1.0;
  double h = std::min(opt.h_init, std::abs(s1 - s0)) * dir;
  Eigen::VectorXd k1 = f(s, y);
  int steps = 0;
  while (dir * (s1 - s) > 1e-15) {
    if (++steps > opt.max_steps) throw StepFailure("integrate_rk45: step limit");
    if (dir * (s + h - s1) > 0) h = s1 - s;
    Eigen::VectorXd k2 = f(s + c2 * h, y + h * (a21 * k1));
    Eigen::VectorXd k3 = f(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
    Eigen::VectorXd k4 = f(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Eigen::VectorXd k5 = f(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Eigen::VectorXd k6 =
        f(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Eigen::VectorXd ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Eigen::VectorXd k7 = f(s + h, ynew);
    Eigen::VectorXd err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    // error per unit step against the tolerance
    double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    double errnorm = err.cwiseAbs().maxCoeff() / (opt.tol * std::abs(h) * scale);
    if (errnorm <= 1.0) {
      s += h;
      y = ynew;
      k1 = k7;
    }
    double factor = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
    factor = std::min(5.0, std::max(0.2, factor));
    h *= factor;
    if (std::abs(h) < opt.h_min) throw StepFailure("integrate_rk45: step underflow");
  }
  return y;
}

Loop spline_loop(const Eigen::MatrixXd& waypoints) {
  const int n = static_cast<int>(waypoints.rows());
  const int d = static_cast<int>(waypoints.cols());
  if (n < 3) throw std::invalid_argument("spline_loop: need >= 3 waypoints");
  // Periodic cubic spline with uniform parameter spacing 1/n: solve the
  // cyclic system for second derivatives M_i per component.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  double hseg = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    A(i, (i + n - 1) % n) += hseg / 6.0;
    A(i, i) += 2.0 * hseg / 3.0;
    A(i, (i + 1) % n) += hseg / 6.0;
  }
  Eigen::MatrixXd rhs(n, d);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd prev = waypoints.row((i + n - 1) % n);
    Eigen::VectorXd cur = waypoints.row(i);
    Eigen::VectorXd next = waypoints.row((i + 1) % n);
    rhs.row(i) = ((next - cur) / hseg - (cur - prev) / hseg).transpose();
  }
  Eigen::MatrixXd M = A.partialPivLu().solve(rhs);
  auto W = std::make_shared<Eigen::MatrixXd>(waypoints);
  auto Mm = std::make_shared<Eigen::MatrixXd>(M);
  auto eval = [W, Mm, n, hseg](double s, bool deriv) {
    s -= std::floor(s);
    int i = std::min(static_cast<int>(s * n), n - 1);
    double t = s - i * hseg;
    int j = (i + 1) % n;
    Eigen::VectorXd yi = W->row(i), yj = W->row(j);
    Eigen::VectorXd mi = Mm->row(i), mj = Mm->row(j);
    if (!deriv) {
      return (yi * (hseg - t) / hseg + yj * t / hseg +
              ((hseg - t) * (hseg - t) * (hseg - t) / hseg - hseg * (hseg - t)) / 6.0 * mi +
              (t * t * t / hseg - hseg * t) / 6.0 * mj)
          .eval();
    }
    return ((yj - yi) / hseg +
            (-3.0 * (hseg - t) * (hseg - t) / hseg + hseg) / 6.0 * mi +
            (3.0 * t * t / hseg - hseg) / 6.0 * mj)
        .eval();
  };
  Loop loop;
  loop.pos = [eval](double s) { return eval(s, false); };
  loop.vel = [eval](double s) { return eval(s, true); };
  return loop;
}

Loop circle_loop(const Eigen::VectorXd& center, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v, double r) {
  constexpr double tau = 2.0 * std::numbers::pi;
  Loop loop;
  loop.pos = [=](double s) { return (center + r * (std::cos(tau * s) * u + std::sin(tau * s) * v)).eval(); };
  loop.vel = [=](double s) {
    return (r * tau * (-std::sin(tau * s) * u + std::cos(tau * s) * v)).eval();
  };
  return loop;
}

Loop segment_loop(const Eigen::VectorXd& x0, const Eigen::VectorXd& delta) {
  Loop loop;
  loop.pos = [=](double s) { return (x0 + s * delta).eval(); };
  loop.vel = [=](double) { return delta; };
  return loop;
}

}  // namespace sk
