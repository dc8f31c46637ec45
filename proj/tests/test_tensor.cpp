#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "sk/dual.hpp"
#include "sk/tensor.hpp"

using namespace sk;

namespace {

MetricField euclidean(int n) {
  MetricField f;
  f.dim = n;
  f.eval = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(n, n); };
  return f;
}

// Round unit 2-sphere in (theta, phi).
MetricField sphere2() {
  MetricField f;
  f.dim = 2;
  f.eval = [](const Eigen::VectorXd& x) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
    return Eigen::MatrixXd(g);
  };
  f.jet = [](const Eigen::VectorXd& x) {
    using D = Dual2<2>;
    D th = D::variable(x[0], 0);
    D s = sin(th);
    D g11 = s * s;
    MetricJet jet;
    jet.g = Eigen::Matrix2d::Identity();
    jet.g(1, 1) = g11.v;
    jet.dg.assign(2, Eigen::MatrixXd::Zero(2, 2));
    jet.d2g.assign(2, std::vector<Eigen::MatrixXd>(2, Eigen::MatrixXd::Zero(2, 2)));
    for (int k = 0; k < 2; ++k) {
      jet.dg[k](1, 1) = g11.g[k];
      for (int l = 0; l < 2; ++l) jet.d2g[k][l](1, 1) = g11.h(k, l);
    }
    return jet;
  };
  return f;
}

}  // namespace

TEST_CASE("dual2 chain rules") {
  using D = Dual2<2>;
  D x = D::variable(0.7, 0);
  D y = D::variable(-0.3, 1);
  D f = sinh(x) * cos(y) + pow(x, 1.5) / cosh(y);
  // check against small closed-form derivatives
  double c = std::cos(-0.3), s = std::sin(-0.3);
  double ch = std::cosh(-0.3), sh = std::sinh(-0.3);
  double fx = std::cosh(0.7) * c + 1.5 * std::pow(0.7, 0.5) / ch;
  double fy = -std::sinh(0.7) * s - std::pow(0.7, 1.5) * sh / (ch * ch);
  CHECK(f.g[0] == doctest::Approx(fx).epsilon(1e-12));
  CHECK(f.g[1] == doctest::Approx(fy).epsilon(1e-12));
  double fxy = -std::cosh(0.7) * s - 1.5 * std::pow(0.7, 0.5) * sh / (ch * ch);
  CHECK(f.h(0, 1) == doctest::Approx(fxy).epsilon(1e-12));
}

TEST_CASE("christoffel: euclidean vanishes, sphere matches closed form") {
  Eigen::VectorXd x(3);
  x << 0.2, 0.4, -0.1;
  auto gam = christoffel(euclidean(3), x, DerivativeScheme::fd());
  for (const auto& m : gam) CHECK(m.cwiseAbs().maxCoeff() < 1e-10);

  Eigen::VectorXd p(2);
  p << 1.1, 0.3;
  auto gs = christoffel(sphere2(), p, DerivativeScheme::ad());
  CHECK(gs[0](1, 1) == doctest::Approx(-std::sin(1.1) * std::cos(1.1)).epsilon(1e-12));
  CHECK(gs[1](0, 1) == doctest::Approx(std::cos(1.1) / std::sin(1.1)).epsilon(1e-12));
  // fd vs ad agreement
  auto gf = christoffel(sphere2(), p, DerivativeScheme::fd(1e-4));
  for (int i = 0; i < 2; ++i)
    CHECK((gs[i] - gf[i]).cwiseAbs().maxCoeff() < 1e-6);
  // symmetry in the lower indices
  for (int i = 0; i < 2; ++i)
    CHECK((gs[i] - gs[i].transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("riemann/ricci: flat zero, sphere Einstein") {
  Eigen::VectorXd x(3);
  x << 0.2, 0.4, -0.1;
  auto flat = riemann_ricci(euclidean(3), x, DerivativeScheme::fd());
  CHECK(flat.ricci.cwiseAbs().maxCoeff() < 1e-9);

  Eigen::VectorXd p(2);
  p << 1.1, 0.3;
  auto res = riemann_ricci(sphere2(), p, DerivativeScheme::ad());
  Eigen::MatrixXd g = sphere2().eval(p);
  CHECK((res.ricci - g).cwiseAbs().maxCoeff() < 1e-12);  // Ric = g on the unit sphere
  CHECK(res.scalar == doctest::Approx(2.0).epsilon(1e-12));
  // first Bianchi identity R^i_{[jkl]} = 0
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          double b = res.riemann[i][j](k, l) + res.riemann[i][k](l, j) + res.riemann[i][l](j, k);
          CHECK(std::abs(b) < 1e-12);
        }
  // antisymmetry in the last two indices
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK((res.riemann[i][j] + res.riemann[i][j].transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grid_sup_norm analytic") {
  auto field = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd v(1);
    v[0] = x[0] * x[0];
    return v;
  };
  std::vector<Eigen::VectorXd> grid;
  for (double a : {0.1, 0.5, 0.9})
    for (double b : {0.2, 0.8}) {
      Eigen::VectorXd p(3);
      p << a, b, 0.5;
      grid.push_back(p);
    }
  CHECK(grid_sup_norm(field, grid, 0) == doctest::Approx(0.81));
  CHECK(grid_sup_norm(field, grid, 1) == doctest::Approx(1.8).epsilon(1e-9));
  CHECK(grid_sup_norm(field, grid, 2) == doctest::Approx(2.0).epsilon(1e-6));
  auto zero = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2).eval(); };
  CHECK(grid_sup_norm(zero, grid, 1) == 0.0);
}

TEST_CASE("loglog fit") {
  std::vector<double> ts{0.1, 0.05, 0.025};
  std::vector<double> vs;
  for (double t : ts) vs.push_back(3.7 * std::pow(t, 4.0));
  SlopeFit fit = fit_loglog(ts, vs);
  CHECK(fit.slope == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
}

TEST_CASE("weyl split orientation sanity on flat space") {
  Eigen::VectorXd x(4);
  x << 0.1, 0.2, 0.3, 0.4;
  WeylSplit w = weyl_split(euclidean(4), x, DerivativeScheme::fd());
  CHECK(w.w_plus < 1e-9);
  CHECK(w.w_minus < 1e-9);
}
