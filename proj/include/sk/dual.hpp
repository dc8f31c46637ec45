#pragma once

// Second-order forward-mode scalars: carry value, gradient and Hessian with
// respect to N independent variables. Enough for curvature (two derivatives
// of the metric) without any finite-difference noise.

#include <Eigen/Dense>
#include <cmath>

namespace sk {

template <int N>
struct Dual2 {
  using Grad = Eigen::Matrix<double, N, 1>;
  using Hess = Eigen::Matrix<double, N, N>;

  double v = 0.0;
  Grad g = Grad::Zero();
  Hess h = Hess::Zero();

  Dual2() = default;
  Dual2(double value) : v(value) {}  // implicit: constants promote

  static Dual2 variable(double value, int slot) {
    Dual2 d(value);
    d.g[slot] = 1.0;
    return d;
  }

  Dual2 operator-() const {
    Dual2 r;
    r.v = -v; r.g = -g; r.h = -h;
    return r;
  }

  Dual2& operator+=(const Dual2& o) { v += o.v; g += o.g; h += o.h; return *this; }
  Dual2& operator-=(const Dual2& o) { v -= o.v; g -= o.g; h -= o.h; return *this; }

  friend Dual2 operator+(Dual2 a, const Dual2& b) { a += b; return a; }
  friend Dual2 operator-(Dual2 a, const Dual2& b) { a -= b; return a; }

  friend Dual2 operator*(const Dual2& a, const Dual2& b) {
    Dual2 r;
    r.v = a.v * b.v;
    r.g = a.g * b.v + b.g * a.v;
    r.h = a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
    return r;
  }

  friend Dual2 operator/(const Dual2& a, const Dual2& b) { return a * inverse(b); }

  friend bool operator<(const Dual2& a, const Dual2& b) { return a.v < b.v; }
  friend bool operator>(const Dual2& a, const Dual2& b) { return a.v > b.v; }

  // Univariate chain rule: f(x), f'(x), f''(x) at x = this->v.
  Dual2 chain(double f, double fp, double fpp) const {
    Dual2 r;
    r.v = f;
    r.g = fp * g;
    r.h = fp * h + fpp * (g * g.transpose());
    return r;
  }

  friend Dual2 inverse(const Dual2& x) {
    double iv = 1.0 / x.v;
    return x.chain(iv, -iv * iv, 2.0 * iv * iv * iv);
  }
  friend Dual2 sqrt(const Dual2& x) {
    double s = std::sqrt(x.v);
    return x.chain(s, 0.5 / s, -0.25 / (s * x.v));
  }
  friend Dual2 exp(const Dual2& x) {
    double e = std::exp(x.v);
    return x.chain(e, e, e);
  }
  friend Dual2 log(const Dual2& x) {
    return x.chain(std::log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v));
  }
  friend Dual2 sin(const Dual2& x) {
    double s = std::sin(x.v), c = std::cos(x.v);
    return x.chain(s, c, -s);
  }
  friend Dual2 cos(const Dual2& x) {
    double s = std::sin(x.v), c = std::cos(x.v);
    return x.chain(c, -s, -c);
  }
  friend Dual2 sinh(const Dual2& x) {
    double s = std::sinh(x.v), c = std::cosh(x.v);
    return x.chain(s, c, s);
  }
  friend Dual2 cosh(const Dual2& x) {
    double s = std::sinh(x.v), c = std::cosh(x.v);
    return x.chain(c, s, c);
  }
  // x^p for real exponent p, x > 0.
  friend Dual2 pow(const Dual2& x, double p) {
    double f = std::pow(x.v, p);
    return x.chain(f, p * f / x.v, p * (p - 1.0) * f / (x.v * x.v));
  }
};

// Overloads so the same templated formulas compile with plain doubles.
inline double inverse(double x) { return 1.0 / x; }

template <int N>
inline double value_of(const Dual2<N>& x) { return x.v; }
inline double value_of(double x) { return x; }

}  // namespace sk
