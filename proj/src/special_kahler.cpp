#include "sk/special_kahler.hpp"

#include <cmath>
#include <numbers>

namespace sk {

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::Matrix4d entries_to_matrix(const std::array<std::array<double, 4>, 4>& e) {
  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = e[i][j];
  return g;
}
}  // namespace

Eigen::Matrix4d MklMetric::eval(const SpecialCoords& sc) const {
  return entries_to_matrix(mkl_metric_entries<double>(sc.rho, sc.theta, kp.a(), t * t, perturb));
}

MetricField MklMetric::field() const {
  MetricField f;
  f.dim = 4;
  const double a = kp.a();
  const double t2 = t * t;
  const double pert = perturb;
  const double rmin = rho_min;
  f.eval = [a, t2, pert](const Eigen::VectorXd& x) {
    return entries_to_matrix(mkl_metric_entries<double>(x[0], x[1], a, t2, pert));
  };
  f.domain = [rmin](const Eigen::VectorXd& x) {
    return x[0] >= rmin && x[1] > 0.0 && x[1] < kPi;
  };
  f.jet = [a, t2, pert](const Eigen::VectorXd& x) {
    using D = Dual2<4>;
    D rho = D::variable(x[0], 0);
    D theta = D::variable(x[1], 1);
    auto e = mkl_metric_entries<D>(rho, theta, a, t2, pert);
    MetricJet jet;
    jet.g = Eigen::MatrixXd::Zero(4, 4);
    jet.dg.assign(4, Eigen::MatrixXd::Zero(4, 4));
    jet.d2g.assign(4, std::vector<Eigen::MatrixXd>(4, Eigen::MatrixXd::Zero(4, 4)));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        jet.g(i, j) = e[i][j].v;
        for (int k = 0; k < 4; ++k) {
          jet.dg[k](i, j) = e[i][j].g[k];
          for (int l = 0; l < 4; ++l) jet.d2g[k][l](i, j) = e[i][j].h(k, l);
        }
      }
    return jet;
  };
  return f;
}

FormField mkl_kahler_form(const WeightPair& kp, double t) {
  const double a = kp.a();
  const double t2 = t * t;
  FormField f;
  f.n = 4;
  f.p = 2;
  // pair order (01,02,03,12,13,23) on (rho,theta,psi,phi)
  f.eval = [a, t2](const Eigen::VectorXd& x) {
    double rho = x[0], th = x[1];
    Eigen::VectorXd c = Eigen::VectorXd::Zero(6);
    c[1] = t2 * std::sinh(rho);                  // drho ^ dpsi
    c[2] = t2 * std::sinh(rho) * std::cos(th);   // drho ^ dphi
    c[3] = -t2 * a * std::sin(th);               // dth ^ dpsi
    c[4] = -t2 * std::cosh(rho) * std::sin(th);  // dth ^ dphi
    return c;
  };
  f.partials = [a, t2](const Eigen::VectorXd& x) {
    double rho = x[0], th = x[1];
    std::vector<Eigen::VectorXd> d(4, Eigen::VectorXd::Zero(6));
    d[0][1] = t2 * std::cosh(rho);
    d[0][2] = t2 * std::cosh(rho) * std::cos(th);
    d[0][4] = -t2 * std::sinh(rho) * std::sin(th);
    d[1][2] = -t2 * std::sinh(rho) * std::sin(th);
    d[1][3] = -t2 * a * std::cos(th);
    d[1][4] = -t2 * std::cosh(rho) * std::cos(th);
    return d;
  };
  return f;
}

Eigen::Matrix4d mkl_complex_structure(const WeightPair& kp, const SpecialCoords& sc) {
  MklMetric m(kp);
  Eigen::Matrix4d g = m.eval(sc);
  FormField om = mkl_kahler_form(kp);
  Eigen::VectorXd x(4);
  x << sc.rho, sc.theta, sc.psi, sc.phi;
  FormValue w = om.at(x);
  Eigen::Matrix4d W = Eigen::Matrix4d::Zero();
  const auto& pairs = ComboTable::get(4, 2);
  for (int s = 0; s < 6; ++s) {
    int i = pairs.sets[s][0], j = pairs.sets[s][1];
    W(i, j) = w.c[s];
    W(j, i) = -w.c[s];
  }
  return -g.inverse() * W;
}

std::vector<Eigen::VectorXd> GridSpec::points() const {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<size_t>(n_rho) * n_theta);
  for (int i = 0; i < n_rho; ++i)
    for (int j = 0; j < n_theta; ++j) {
      double r = rho_lo + (rho_hi - rho_lo) * (n_rho == 1 ? 0.5 : double(i) / (n_rho - 1));
      double th =
          theta_lo + (theta_hi - theta_lo) * (n_theta == 1 ? 0.5 : double(j) / (n_theta - 1));
      Eigen::VectorXd x(4);
      x << r, th, psi, phi;
      pts.push_back(x);
    }
  return pts;
}

RicciReport ricci_flat_check(const WeightPair& kp, const GridSpec& grid, double tol,
                             const DerivativeScheme& scheme, double perturb) {
  MklMetric m(kp, 1.0, perturb);
  MetricField f = m.field();
  RicciReport rep;
  rep.tol = tol;
  for (const auto& x : grid.points()) {
    Eigen::Matrix4d ric = ricci_orthonormal(f, x, scheme);
    rep.max_ricci = std::max(rep.max_ricci, ric.cwiseAbs().maxCoeff());
  }
  rep.pass = rep.max_ricci <= tol;
  return rep;
}

KahlerReport kahler_check(const WeightPair& kp, const GridSpec& grid, double tol) {
  MklMetric m(kp);
  MetricField mf = m.field();
  FormField om = mkl_kahler_form(kp);
  FormField om_fd = om;
  om_fd.partials = nullptr;  // closedness measured by finite differences
  KahlerReport rep;
  rep.tol = tol;
  double vol_min = 0.0, vol_max = 0.0;
  bool first = true;
  for (const auto& x : grid.points()) {
    FormValue dw = exterior_derivative(om_fd, x, FdScheme{1e-4, true});
    rep.sup_domega = std::max(rep.sup_domega, dw.sup());

    Eigen::Matrix4d g = mf.eval(x);
    FormValue w = om.at(x);
    Eigen::Matrix4d W = Eigen::Matrix4d::Zero();
    const auto& pairs = ComboTable::get(4, 2);
    for (int s = 0; s < 6; ++s) {
      int i = pairs.sets[s][0], j = pairs.sets[s][1];
      W(i, j) = w.c[s];
      W(j, i) = -w.c[s];
    }
    Eigen::Matrix4d J = -g.inverse() * W;
    rep.sup_j_squared =
        std::max(rep.sup_j_squared, (J * J + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff());
    rep.sup_compat = std::max(rep.sup_compat, (g * J + (g * J).transpose()).cwiseAbs().maxCoeff());

    // covariant derivative of J: needs dJ = d(-g^-1 W) from the metric jet
    // and the analytic partials of omega.
    MetricJet jet = metric_jet(mf, x, DerivativeScheme::ad());
    auto gamma = christoffel(jet);
    Eigen::Matrix4d gi = g.inverse();
    auto dWs = om.partials(x);
    for (int k = 0; k < 4; ++k) {
      Eigen::Matrix4d dW = Eigen::Matrix4d::Zero();
      for (int s = 0; s < 6; ++s) {
        int i = pairs.sets[s][0], j = pairs.sets[s][1];
        dW(i, j) = dWs[k][s];
        dW(j, i) = -dWs[k][s];
      }
      Eigen::Matrix4d dJ = gi * jet.dg[k] * gi * W - gi * dW;  // d(-g^-1 W)
      Eigen::Matrix4d nabla = dJ;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double s = 0.0;
          for (int mm = 0; mm < 4; ++mm)
            s += gamma[i](k, mm) * J(mm, j) - gamma[mm](k, j) * J(i, mm);
          nabla(i, j) += s;
        }
      rep.sup_nabla_j = std::max(rep.sup_nabla_j, nabla.cwiseAbs().maxCoeff());
    }

    // omega ^ omega against 2 vol_g
    FormValue w2 = wedge(w, w);
    double ratio = w2.c[0] / (2.0 * std::sqrt(g.determinant()));
    if (first) { vol_min = vol_max = ratio; first = false; }
    vol_min = std::min(vol_min, ratio);
    vol_max = std::max(vol_max, ratio);
  }
  rep.volume_sign_constant = (vol_min > 0.0) == (vol_max > 0.0) && vol_min * vol_max > 0.0;
  rep.min_volume = std::min(std::abs(vol_min), std::abs(vol_max));
  rep.pass = rep.sup_domega <= tol && rep.sup_j_squared <= tol && rep.volume_sign_constant;
  return rep;
}

HolonomyElement parallel_transport(const Loop& loop, const WeightPair& kp, double ode_tol) {
  MklMetric m(kp);
  MetricField mf = m.field();
  auto rhs = [&](double s, const Eigen::VectorXd& y) {
    Eigen::VectorXd x = loop.pos(s);
    Eigen::VectorXd v = loop.vel(s);
    auto gamma = christoffel(mf, x, DerivativeScheme::ad());
    Eigen::Matrix4d T = Eigen::Map<const Eigen::Matrix4d>(y.data());
    Eigen::Matrix4d G = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i)
      for (int n = 0; n < 4; ++n) {
        double s2 = 0.0;
        for (int mm = 0; mm < 4; ++mm) s2 += gamma[i](mm, n) * v[mm];
        G(i, n) = s2;
      }
    Eigen::Matrix4d dT = -G * T;
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(dT.data(), 16));
  };
  Eigen::Matrix4d T0 = Eigen::Matrix4d::Identity();
  OdeOptions opt;
  opt.tol = ode_tol;
  Eigen::VectorXd yend =
      integrate_rk45(rhs, 0.0, 1.0, Eigen::Map<Eigen::VectorXd>(T0.data(), 16), opt);
  Eigen::Matrix4d T = Eigen::Map<const Eigen::Matrix4d>(yend.data());

  Eigen::VectorXd x0 = loop.pos(0.0);
  SpecialCoords sc{x0[0], x0[1], x0[3], x0[2]};
  Eigen::Matrix4d g = m.eval(sc);
  Eigen::Matrix4d J = mkl_complex_structure(kp, sc);

  HolonomyElement h;
  h.transport = T;
  h.isometry_defect = (T.transpose() * g * T - g).cwiseAbs().maxCoeff();
  Eigen::Matrix4d E = orthonormal_frame(g);
  h.frame_transport = E.inverse() * T * E;
  h.identity_defect = (h.frame_transport - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();

  // J-adapted unitary frame at the base point: f1, Jf1, f3, Jf3.
  Eigen::Matrix4d Jf = E.inverse() * J * E;
  Eigen::Vector4d f1 = Eigen::Vector4d::Unit(0);
  Eigen::Vector4d f2 = Jf * f1;
  Eigen::Vector4d f3 = Eigen::Vector4d::Unit(1);
  f3 -= f3.dot(f1) * f1 + f3.dot(f2) * f2;
  if (f3.norm() < 0.5) {
    f3 = Eigen::Vector4d::Unit(2);
    f3 -= f3.dot(f1) * f1 + f3.dot(f2) * f2;
  }
  f3.normalize();
  Eigen::Vector4d f4 = Jf * f3;
  Eigen::Matrix4d F;
  F << f1, f2, f3, f4;
  Eigen::Matrix4d Tf = F.inverse() * h.frame_transport * F;
  h.complex_rep(0, 0) = cplx(Tf(0, 0), Tf(1, 0));
  h.complex_rep(0, 1) = cplx(Tf(0, 2), Tf(1, 2));
  h.complex_rep(1, 0) = cplx(Tf(2, 0), Tf(3, 0));
  h.complex_rep(1, 1) = cplx(Tf(2, 2), Tf(3, 2));
  Eigen::Matrix4d J0 = Eigen::Matrix4d::Zero();
  J0(1, 0) = 1; J0(0, 1) = -1; J0(3, 2) = 1; J0(2, 3) = -1;
  h.omega_defect = (Tf.transpose() * J0 * Tf - J0).cwiseAbs().maxCoeff();
  h.det_defect = std::abs(h.complex_rep.determinant() - cplx(1.0));
  double unitary = (h.complex_rep * h.complex_rep.adjoint() - Eigen::Matrix2cd::Identity())
                       .cwiseAbs()
                       .maxCoeff();
  h.su2_defect = std::max({h.omega_defect, h.det_defect, unitary});
  return h;
}

AxisLoopReport axis_loop_check(const WeightPair& kp, double rad, double ode_tol) {
  Eigen::VectorXd x0(4);
  x0 << rad, rad, 0.2, 0.3;
  Eigen::VectorXd delta(4);
  delta << 0, 0, 0, 4.0 * kPi / (kp.k + kp.l);
  Loop loop = segment_loop(x0, delta);
  AxisLoopReport rep;
  rep.hol = parallel_transport(loop, kp, ode_tol);
  rep.group_order = kp.k;
  if (kp.k == 2) {
    rep.generator_defect =
        (rep.hol.frame_transport + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
  } else {
    double expected = 4.0 * std::cos(2.0 * kPi / kp.k);
    rep.generator_defect = std::abs(rep.hol.frame_transport.trace() - expected);
  }
  return rep;
}

EguchiHansonReport eguchi_hanson_compare(const GridSpec& grid, double tol) {
  WeightPair kp(1, 1);
  MklMetric m(kp);
  MetricField mf = m.field();
  EguchiHansonReport rep;
  // Sample rho only: for a=0 the coframe components depend on rho alone.
  std::vector<double> rhos;
  for (int i = 0; i < grid.n_rho; ++i)
    rhos.push_back(grid.rho_lo + (grid.rho_hi - grid.rho_lo) * double(i) /
                                     std::max(1, grid.n_rho - 1));
  const double th = 0.5 * kPi;  // equator: g_psi_phi = 0 there
  std::vector<double> rs, drs, a4s;
  rep.monotone = true;
  double prev = 0.0;
  for (size_t i = 0; i < rhos.size(); ++i) {
    Eigen::VectorXd x(4);
    x << rhos[i], th, 0.0, 0.0;
    MetricJet jet = metric_jet(mf, x, DerivativeScheme::ad());
    double gtt = jet.g(1, 1);
    double r = 2.0 * std::sqrt(gtt);
    double dr = jet.dg[0](1, 1) / std::sqrt(gtt);
    rs.push_back(r);
    drs.push_back(dr);
    if (i > 0 && r <= prev) rep.monotone = false;
    prev = r;
    // a^4 from the fiber coefficient g_psi_psi = (r^2/4)(1 - a^4/r^4)
    double a4 = std::pow(r, 4) * (1.0 - 4.0 * jet.g(2, 2) / (r * r));
    a4s.push_back(a4);
  }
  if (!rep.monotone) throw FitFailure("eguchi_hanson_compare: r(rho) not monotone");
  double a4 = 0.0;
  for (double v : a4s) a4 += v;
  a4 /= a4s.size();
  rep.eh_parameter = std::pow(a4, 0.25);
  // Compare every component against the EH line element across the grid.
  for (int i = 0; i < grid.n_rho; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      double rho = rhos[i];
      double theta = grid.theta_lo + (grid.theta_hi - grid.theta_lo) * double(j) /
                                         std::max(1, grid.n_theta - 1);
      Eigen::VectorXd x(4);
      x << rho, theta, 0.0, 0.0;
      Eigen::Matrix4d g = mf.eval(x);
      double r = rs[i], dr = drs[i];
      double fac = 1.0 - a4 / std::pow(r, 4);
      Eigen::Matrix4d eh = Eigen::Matrix4d::Zero();
      eh(0, 0) = dr * dr / fac;
      eh(1, 1) = r * r / 4.0;
      eh(2, 2) = (r * r / 4.0) * fac;
      eh(2, 3) = eh(3, 2) = eh(2, 2) * std::cos(theta);
      eh(3, 3) = (r * r / 4.0) * (std::sin(theta) * std::sin(theta) +
                                  fac * std::cos(theta) * std::cos(theta));
      double dev = (g - eh).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff();
      rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
    }
  rep.pass = rep.max_rel_dev <= tol;
  return rep;
}

double cohomogeneity_symmetry_defect(const WeightPair& kp) {
  MklMetric m(kp);
  // coframe rows: drho, dth, dpsi + cos th dphi, sin th dphi
  auto coframe_metric = [&](double rho, double th) {
    Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
    M(2, 3) = std::cos(th);
    M(2, 2) = 1.0;
    M(3, 3) = std::sin(th);
    M(3, 2) = 0.0;
    SpecialCoords sc{rho, th, 0.0, 0.0};
    Eigen::Matrix4d g = m.eval(sc);
    Eigen::Matrix4d Mi = M.inverse();
    return (Mi.transpose() * g * Mi).eval();
  };
  double defect = 0.0;
  for (double rho : {0.7, 1.2, 1.8}) {
    Eigen::Matrix4d ref = coframe_metric(rho, 0.9);
    for (double th : {1.4, 2.1, 2.6}) {
      defect = std::max(defect, (coframe_metric(rho, th) - ref).cwiseAbs().maxCoeff());
    }
  }
  return defect;
}

}  // namespace sk
