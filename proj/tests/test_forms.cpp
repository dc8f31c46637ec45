#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "sk/forms.hpp"

using namespace sk;

TEST_CASE("wedge basics") {
  FormValue dx(4, 1), dy(4, 1);
  dx.coeff({0}) = 1.0;
  dy.coeff({1}) = 1.0;
  FormValue w = wedge(dx, dy);
  CHECK(w.coeff({0, 1}) == doctest::Approx(1.0));
  FormValue w2 = wedge(dy, dx);
  CHECK(w2.coeff({0, 1}) == doctest::Approx(-1.0));
  // associativity on a random triple
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1, 1);
  FormValue a(5, 1), b(5, 2), c(5, 1);
  for (int i = 0; i < a.c.size(); ++i) a.c[i] = uni(rng);
  for (int i = 0; i < b.c.size(); ++i) b.c[i] = uni(rng);
  for (int i = 0; i < c.c.size(); ++i) c.c[i] = uni(rng);
  FormValue left = wedge(wedge(a, b), c);
  FormValue right = wedge(a, wedge(b, c));
  CHECK((left.c - right.c).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hodge star euclidean R4") {
  FormValue f(4, 2);
  f.coeff({0, 1}) = 1.0;  // dx1^dx2
  FormValue h = hodge(f, Eigen::Matrix4d::Identity());
  CHECK(h.coeff({2, 3}) == doctest::Approx(1.0));
  CHECK(h.c.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("hodge involution sign law dims 4 and 7") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (int n : {4, 7}) {
    // random SPD metric
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = uni(rng);
    Eigen::MatrixXd g = A * A.transpose() + 0.5 * n * Eigen::MatrixXd::Identity(n, n);
    for (int p = 0; p <= n; ++p) {
      FormValue f(n, p);
      for (int i = 0; i < f.c.size(); ++i) f.c[i] = uni(rng);
      FormValue hh = hodge(hodge(f, g), g);
      double sign = ((p * (n - p)) % 2 == 0) ? 1.0 : -1.0;
      CHECK((hh.c - sign * f.c).cwiseAbs().maxCoeff() < 1e-10 * (1 + f.c.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("inner product vs f ^ *f") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1, 1);
  int n = 4, p = 2;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = uni(rng);
  Eigen::MatrixXd g = A * A.transpose() + 2.0 * Eigen::MatrixXd::Identity(n, n);
  FormValue f(n, p);
  for (int i = 0; i < f.c.size(); ++i) f.c[i] = uni(rng);
  FormValue fs = wedge(f, hodge(f, g));
  double vol = std::sqrt(g.determinant());
  CHECK(fs.c[0] == doctest::Approx(form_inner(f, f, g) * vol).epsilon(1e-10));
}

TEST_CASE("exterior derivative basics and d^2 = 0") {
  // d(x dy) = dx ^ dy in R^2-embedded-in-R^3
  FormField f;
  f.n = 3;
  f.p = 1;
  f.eval = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
    c[1] = x[0];  // x * dy
    return c;
  };
  Eigen::VectorXd x(3);
  x << 0.3, -0.2, 0.7;
  FormValue df = exterior_derivative(f, x);
  CHECK(df.coeff({0, 1}) == doctest::Approx(1.0).epsilon(1e-10));

  // constant form -> 0
  FormField c0;
  c0.n = 3; c0.p = 1;
  c0.eval = [](const Eigen::VectorXd&) {
    Eigen::VectorXd c(3);
    c << 1.0, 2.0, -0.5;
    return c;
  };
  CHECK(exterior_derivative(c0, x).sup() < 1e-12);

  // d^2 = 0 on random polynomial 1-forms in R^4
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1, 1);
  Eigen::MatrixXd coef(4, 10);
  for (int i = 0; i < coef.size(); ++i) coef.data()[i] = uni(rng);
  FormField poly;
  poly.n = 4; poly.p = 1;
  poly.eval = [coef](const Eigen::VectorXd& x) {
    Eigen::VectorXd mono(10);
    mono << 1, x[0], x[1], x[2], x[3], x[0] * x[1], x[1] * x[2], x[2] * x[3], x[0] * x[0],
        x[3] * x[1];
    return (coef * mono).eval();
  };
  FormField dpoly;
  dpoly.n = 4; dpoly.p = 2;
  dpoly.eval = [poly](const Eigen::VectorXd& y) { return exterior_derivative(poly, y).c; };
  Eigen::VectorXd y(4);
  y << 0.2, -0.4, 0.1, 0.5;
  FormValue dd = exterior_derivative(dpoly, y);
  CHECK(dd.sup() < 1e-7);  // 10x the scheme error bound
}

TEST_CASE("leibniz rule") {
  FormField f, g;
  f.n = g.n = 3;
  f.p = 1;
  g.p = 1;
  f.eval = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd c(3);
    c << std::sin(x[1]), x[0] * x[2], 0.0;
    return c;
  };
  g.eval = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd c(3);
    c << x[2], 0.0, std::cos(x[0]);
    return c;
  };
  FormField fg;
  fg.n = 3; fg.p = 2;
  fg.eval = [&](const Eigen::VectorXd& x) {
    FormValue a(3, 1), b(3, 1);
    a.c = f.eval(x);
    b.c = g.eval(x);
    return wedge(a, b).c;
  };
  Eigen::VectorXd x(3);
  x << 0.4, 0.9, -0.3;
  FormValue lhs = exterior_derivative(fg, x);
  FormValue fa(3, 1), gb(3, 1);
  fa.c = f.eval(x);
  gb.c = g.eval(x);
  FormValue rhs = wedge(exterior_derivative(f, x), gb) - wedge(fa, exterior_derivative(g, x));
  // (-1)^p with p=1 gives the minus sign
  CHECK((lhs.c - rhs.c).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("pullback through linear map") {
  // pullback of dx^dy under A equals det of the 2x2 minor pattern
  Eigen::MatrixXd A(3, 2);
  A << 1, 2, 0, 1, 3, -1;
  FormValue f(3, 2);
  f.coeff({0, 1}) = 1.0;
  FormValue pb = pullback(f, A);
  CHECK(pb.coeff({0, 1}) == doctest::Approx(A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0)));
}
