#include "sk/gibbons_hawking.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>

#include "sk/special_kahler.hpp"

namespace sk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSourceTol = 1e-9;

// Orthonormal triad (u, v, n) with n = -string (the regular pole) and
// u x v = n.
struct Triad {
  Eigen::Vector3d u, v, n;
};

Triad triad_for(const GHSource& s) {
  Triad t;
  t.n = -s.string.normalized();
  Eigen::Vector3d seed =
      (std::abs(t.n.x()) < 0.9) ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  t.u = t.n.cross(seed).normalized();
  t.v = t.n.cross(t.u);  // (u, v, n) right-handed: u x v = n
  return t;
}

template <typename T>
T norm3(const Eigen::Matrix<T, 3, 1>& d) {
  return sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
}

template <typename T>
T potential_t(const GHConfig& cfg, const Eigen::Matrix<T, 3, 1>& x) {
  T u = 0.0;
  for (const auto& s : cfg.sources) {
    Eigen::Matrix<T, 3, 1> d = x - s.x.template cast<T>();
    u += double(s.m) * inverse(norm3<T>(d));
  }
  return u;
}

template <typename T>
Eigen::Matrix<T, 3, 1> monopole_t(const GHConfig& cfg, const Eigen::Matrix<T, 3, 1>& x) {
  Eigen::Matrix<T, 3, 1> w;
  w[0] = T(0.0); w[1] = T(0.0); w[2] = T(0.0);
  for (const auto& s : cfg.sources) {
    Triad tr = triad_for(s);
    Eigen::Matrix<T, 3, 1> d = x - s.x.template cast<T>();
    T r = norm3<T>(d);
    T xi = d[0] * tr.u[0] + d[1] * tr.u[1] + d[2] * tr.u[2];
    T up = d[0] * tr.v[0] + d[1] * tr.v[1] + d[2] * tr.v[2];
    T ze = d[0] * tr.n[0] + d[1] * tr.n[1] + d[2] * tr.n[2];
    T rho2 = xi * xi + up * up;
    T coef = double(s.m) * (ze / r - 1.0) * inverse(rho2);
    for (int j = 0; j < 3; ++j) w[j] += coef * (xi * tr.v[j] - up * tr.u[j]);
  }
  return w;
}
}  // namespace

double gh_potential(const GHConfig& cfg, const Eigen::Vector3d& x) {
  gh_check_point(cfg, x);
  return potential_t<double>(cfg, x);
}

Eigen::Vector3d gh_grad_potential(const GHConfig& cfg, const Eigen::Vector3d& x) {
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (const auto& s : cfg.sources) {
    Eigen::Vector3d d = x - s.x;
    g -= s.m * d / std::pow(d.norm(), 3);
  }
  return g;
}

void gh_check_point(const GHConfig& cfg, const Eigen::Vector3d& x) {
  for (const auto& s : cfg.sources) {
    Eigen::Vector3d d = x - s.x;
    double r = d.norm();
    if (r < kSourceTol) throw AtSource("evaluation at a source point");
    double cosang = d.dot(s.string.normalized()) / r;
    if (cosang > std::cos(kStringAngleTol)) throw OnString("evaluation on a Dirac string");
  }
}

bool gh_point_safe(const GHConfig& cfg, const Eigen::Vector3d& x, double source_margin,
                   double string_angle) {
  for (const auto& s : cfg.sources) {
    Eigen::Vector3d d = x - s.x;
    double r = d.norm();
    if (r < source_margin) return false;
    if (d.dot(s.string.normalized()) / r > std::cos(string_angle)) return false;
  }
  return true;
}

Eigen::Vector3d gh_monopole_form(const GHConfig& cfg, const Eigen::Vector3d& x) {
  gh_check_point(cfg, x);
  return monopole_t<double>(cfg, x);
}

Eigen::Matrix4d gh_metric_eval(const GHConfig& cfg, const Eigen::Vector3d& x) {
  gh_check_point(cfg, x);
  double U = potential_t<double>(cfg, x);
  Eigen::Vector3d w = monopole_t<double>(cfg, x);
  Eigen::Matrix4d g;
  g(0, 0) = 1.0 / U;
  for (int i = 0; i < 3; ++i) {
    g(0, i + 1) = g(i + 1, 0) = w[i] / U;
    for (int j = 0; j < 3; ++j) g(i + 1, j + 1) = U * (i == j ? 1.0 : 0.0) + w[i] * w[j] / U;
  }
  return g;
}

MetricField gh_metric_field(const GHConfig& cfg) {
  MetricField f;
  f.dim = 4;
  f.eval = [cfg](const Eigen::VectorXd& y) {
    return gh_metric_eval(cfg, Eigen::Vector3d(y[1], y[2], y[3]));
  };
  f.domain = [cfg](const Eigen::VectorXd& y) {
    return gh_point_safe(cfg, Eigen::Vector3d(y[1], y[2], y[3]), 1e-6);
  };
  f.jet = [cfg](const Eigen::VectorXd& y) {
    using D = Dual2<4>;
    Eigen::Matrix<D, 3, 1> x;
    for (int i = 0; i < 3; ++i) x[i] = D::variable(y[i + 1], i + 1);
    D U = potential_t<D>(cfg, x);
    Eigen::Matrix<D, 3, 1> w = monopole_t<D>(cfg, x);
    std::array<std::array<D, 4>, 4> e{};
    D Ui = inverse(U);
    e[0][0] = Ui;
    for (int i = 0; i < 3; ++i) {
      e[0][i + 1] = w[i] * Ui;
      e[i + 1][0] = e[0][i + 1];
      for (int j = 0; j < 3; ++j) {
        e[i + 1][j + 1] = w[i] * w[j] * Ui;
        if (i == j) e[i + 1][j + 1] += U;
      }
    }
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

namespace {
// Coefficients of K_alpha at (tau,x) as a 6-vector in pair order
// (01,02,03,12,13,23) of the coordinates (tau,x1,x2,x3).
Eigen::VectorXd triple_coeffs(const GHConfig& cfg, int alpha, const Eigen::Vector3d& x) {
  double U = potential_t<double>(cfg, x);
  Eigen::Vector3d w = monopole_t<double>(cfg, x);
  FormValue K(4, 2);
  // dtau ^ dx_alpha
  K.coeff({0, alpha + 1}) += 1.0;
  // omega_i dx_i ^ dx_alpha
  for (int i = 0; i < 3; ++i) {
    if (i == alpha) continue;
    int a = i + 1, b = alpha + 1;
    if (a < b) K.coeff({a, b}) += w[i];
    else K.coeff({b, a}) -= w[i];
  }
  // -U dx_beta ^ dx_gamma (cyclic)
  int beta = (alpha + 1) % 3, gamma = (alpha + 2) % 3;
  int a = beta + 1, b = gamma + 1;
  if (a < b) K.coeff({a, b}) -= U;
  else K.coeff({b, a}) += U;
  return K.c;
}
}  // namespace

FormField gh_triple_form(const GHConfig& cfg, int alpha) {
  FormField f;
  f.n = 4;
  f.p = 2;
  f.eval = [cfg, alpha](const Eigen::VectorXd& y) {
    return triple_coeffs(cfg, alpha, Eigen::Vector3d(y[1], y[2], y[3]));
  };
  return f;
}

FormField gh_kahler_form_field(const GHConfig& cfg, const Eigen::Vector3d& anchor) {
  Eigen::Vector3d grad = gh_grad_potential(cfg, anchor);
  if (grad.norm() < 1e-10)
    throw CriticalPoint("gh_kahler_form: grad U vanishes at the anchor");
  Eigen::Vector3d c = -grad.normalized();
  FormField f;
  f.n = 4;
  f.p = 2;
  f.eval = [cfg, c](const Eigen::VectorXd& y) {
    Eigen::Vector3d x(y[1], y[2], y[3]);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(6);
    for (int a = 0; a < 3; ++a) acc += c[a] * triple_coeffs(cfg, a, x);
    return acc;
  };
  return f;
}

FormValue gh_kahler_form(const GHConfig& cfg, const Eigen::Vector3d& x) {
  FormField f = gh_kahler_form_field(cfg, x);
  Eigen::VectorXd y(4);
  y << 0.0, x[0], x[1], x[2];
  FormValue v(4, 2);
  v.c = f.eval(y);
  return v;
}

Eigen::Vector4d gh_chart_to_tau_x(const Eigen::Vector4d& y) {
  return Eigen::Vector4d(y[1], y[0], y[2], y[3]);
}

std::array<FormField, 3> gh_g2_triple(const GHConfig& cfg) {
  // Triple (K2, -K3, -K1) expressed on the chart with coordinate order
  // (x1, tau, x2, x3). Coordinate permutation old->new: tau:0->1, x1:1->0,
  // x2:2->2, x3:3->3.
  static const int perm[4] = {1, 0, 2, 3};
  auto remap = [](const Eigen::VectorXd& c_old) {
    FormValue out(4, 2);
    const auto& pairs = ComboTable::get(4, 2);
    for (int s = 0; s < 6; ++s) {
      int i = perm[pairs.sets[s][0]], j = perm[pairs.sets[s][1]];
      double v = c_old[s];
      if (i < j) out.coeff({i, j}) += v;
      else out.coeff({j, i}) -= v;
    }
    return out.c;
  };
  std::array<std::pair<int, double>, 3> sel = {{{1, 1.0}, {2, -1.0}, {0, -1.0}}};
  std::array<FormField, 3> out;
  for (int i = 0; i < 3; ++i) {
    int alpha = sel[i].first;
    double sgn = sel[i].second;
    out[i].n = 4;
    out[i].p = 2;
    out[i].eval = [cfg, alpha, sgn, remap](const Eigen::VectorXd& y) {
      Eigen::Vector3d x(y[0], y[2], y[3]);  // chart order (x1, tau, x2, x3)
      return (sgn * remap(triple_coeffs(cfg, alpha, x))).eval();
    };
  }
  return out;
}

Eigen::Vector3d special_to_gh_x(const SpecialCoords& sc) {
  return Eigen::Vector3d(std::cosh(sc.rho) * std::cos(sc.theta),
                         std::sinh(sc.rho) * std::sin(sc.theta) * std::cos(sc.psi),
                         std::sinh(sc.rho) * std::sin(sc.theta) * std::sin(sc.psi));
}

double special_to_gh_tau(const SpecialCoords& sc, const WeightPair& kp) {
  return (kp.k + kp.l) * sc.phi;
}

GHConfig axis_pair_config(const WeightPair& kp, int strength) {
  GHConfig cfg;
  GHSource left;
  left.x = Eigen::Vector3d(-1, 0, 0);
  left.m = kp.l * strength;
  left.string = Eigen::Vector3d(-1, 0, 0);
  GHSource right;
  right.x = Eigen::Vector3d(1, 0, 0);
  right.m = kp.k * strength;
  right.string = Eigen::Vector3d(-1, 0, 0);
  cfg.sources = {left, right};
  return cfg;
}

Eigen::Vector3d gh_axis_gauge_form(const GHConfig& cfg, const Eigen::Vector3d& x) {
  // omega = sum m_i cosTheta_i dPhi, angles about the +e1 axis through each
  // source; dPhi = (x2 dx3 - x3 dx2)/(x2^2+x3^2).
  double R2 = x[1] * x[1] + x[2] * x[2];
  double coef = 0.0;
  for (const auto& s : cfg.sources) {
    Eigen::Vector3d d = x - s.x;
    coef += s.m * d[0] / d.norm();
  }
  return Eigen::Vector3d(0.0, -coef * x[2] / R2, coef * x[1] / R2);
}

Eigen::Matrix4d gh_metric_axis_gauge(const GHConfig& cfg, const Eigen::Vector3d& x) {
  double U = potential_t<double>(cfg, x);
  Eigen::Vector3d w = gh_axis_gauge_form(cfg, x);
  Eigen::Matrix4d g;
  g(0, 0) = 1.0 / U;
  for (int i = 0; i < 3; ++i) {
    g(0, i + 1) = g(i + 1, 0) = w[i] / U;
    for (int j = 0; j < 3; ++j) g(i + 1, j + 1) = U * (i == j ? 1.0 : 0.0) + w[i] * w[j] / U;
  }
  return g;
}

LimitReport limit_coincidence_check(const WeightPair& kp, int n_rho, int n_theta, double tol,
                                    unsigned seed, int strength) {
  GHConfig cfg = axis_pair_config(kp, strength);
  MklMetric mkl(kp);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  double num = 0.0, den = 0.0;
  std::vector<std::pair<Eigen::Matrix4d, Eigen::Matrix4d>> samples;
  for (int i = 0; i < n_rho; ++i)
    for (int j = 0; j < n_theta; ++j) {
      SpecialCoords sc;
      sc.rho = 0.5 + 1.5 * double(i) / std::max(1, n_rho - 1);
      sc.theta = 0.5 + 2.1 * double(j) / std::max(1, n_theta - 1);
      sc.psi = ang(rng);
      sc.phi = ang(rng);
      Eigen::Vector3d x = special_to_gh_x(sc);
      // analytic Jacobian of (tau, x1, x2, x3) in (rho, theta, psi, phi)
      double ch = std::cosh(sc.rho), sh = std::sinh(sc.rho);
      double ct = std::cos(sc.theta), st = std::sin(sc.theta);
      double cp = std::cos(sc.psi), sp = std::sin(sc.psi);
      Eigen::Matrix4d Jc = Eigen::Matrix4d::Zero();
      Jc(0, 3) = double(strength) * (kp.k + kp.l);
      Jc(1, 0) = sh * ct;
      Jc(1, 1) = -ch * st;
      Jc(2, 0) = ch * st * cp;
      Jc(2, 1) = sh * ct * cp;
      Jc(2, 2) = -sh * st * sp;
      Jc(3, 0) = ch * st * sp;
      Jc(3, 1) = sh * ct * sp;
      Jc(3, 2) = sh * st * cp;
      Eigen::Matrix4d G = gh_metric_axis_gauge(cfg, x);
      Eigen::Matrix4d P = Jc.transpose() * G * Jc;
      Eigen::Matrix4d M = mkl.eval(sc);
      num += (P.array() * M.array()).sum();
      den += (M.array() * M.array()).sum();
      samples.emplace_back(P, M);
    }
  LimitReport rep;
  rep.c = num / den;
  rep.tol = tol;
  for (const auto& [P, M] : samples) {
    double dev = (P - rep.c * M).cwiseAbs().maxCoeff() / (rep.c * M).cwiseAbs().maxCoeff();
    rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
  }
  rep.pass = rep.max_rel_dev <= tol && rep.c > 0.0;
  return rep;
}

GHConfig eq5_config(double t, double eps_split) {
  GHConfig cfg;
  double t2 = t * t;
  GHSource a, b, c;
  a.x = Eigen::Vector3d(-4.0 * t2 / 3.0, 0, 0);
  b.x = Eigen::Vector3d(2.0 * t2 / 3.0, t2 * eps_split, 0);
  c.x = Eigen::Vector3d(2.0 * t2 / 3.0, -t2 * eps_split, 0);
  cfg.sources = {a, b, c};
  return cfg;
}

GHConfig center_config() {
  GHConfig cfg;
  GHSource s;
  s.x = Eigen::Vector3d::Zero();
  s.m = 3;
  cfg.sources = {s};
  return cfg;
}

std::vector<Eigen::VectorXd> annulus_points(double zeta, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  double lo = zeta * zeta / 16.0, hi = zeta * zeta;
  while (static_cast<int>(pts.size()) < count) {
    Eigen::Vector3d x(uni(rng), uni(rng), uni(rng));
    x *= hi;
    double r = x.norm();
    if (r < lo * 1.05 || r > hi * 0.95) continue;
    // keep clear of the -e3 string cone through the cluster
    if (-x[2] / r > std::cos(0.25)) continue;
    Eigen::VectorXd p(3);
    p << x[0], x[1], x[2];
    pts.push_back(p);
  }
  return pts;
}

SlopeReport potential_difference_norms(const std::vector<double>& ts, double zeta, int order,
                                       int count, unsigned seed, double eps_split) {
  auto pts = annulus_points(zeta, count, seed);
  SlopeReport rep;
  rep.ts = ts;
  for (double t : ts) {
    GHConfig cfg = eq5_config(t, eps_split);
    auto diff = [&cfg](const Eigen::VectorXd& p) {
      Eigen::Vector3d x(p[0], p[1], p[2]);
      Eigen::VectorXd out(1);
      out[0] = potential_t<double>(cfg, x) - 3.0 / x.norm();
      return out;
    };
    rep.norms.push_back(grid_sup_norm(diff, pts, order, FdScheme{1e-3, true}));
  }
  SlopeFit fit = fit_loglog(rep.ts, rep.norms);
  rep.slope = fit.slope;
  rep.residual = fit.residual;
  return rep;
}

SlopeReport metric_difference_norms(const std::vector<double>& ts, double zeta, int order,
                                    int count, unsigned seed, double eps_split) {
  auto pts = annulus_points(zeta, count, seed);
  GHConfig cbar = center_config();
  SlopeReport rep;
  rep.ts = ts;
  for (double t : ts) {
    GHConfig cfg = eq5_config(t, eps_split);
    auto diff = [&cfg, &cbar](const Eigen::VectorXd& p) {
      Eigen::Vector3d x(p[0], p[1], p[2]);
      double Ut = potential_t<double>(cfg, x);
      double Ub = potential_t<double>(cbar, x);
      Eigen::Vector3d wt = monopole_t<double>(cfg, x);
      Eigen::Vector3d wb = monopole_t<double>(cbar, x);
      // upper triangle of the 4x4 coefficient difference
      Eigen::VectorXd out(10);
      int idx = 0;
      auto g = [&](double U, const Eigen::Vector3d& w, int i, int j) {
        if (i == 0 && j == 0) return 1.0 / U;
        if (i == 0) return w[j - 1] / U;
        return U * (i == j ? 1.0 : 0.0) + w[i - 1] * w[j - 1] / U;
      };
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) out[idx++] = g(Ut, wt, i, j) - g(Ub, wb, i, j);
      return out;
    };
    rep.norms.push_back(grid_sup_norm(diff, pts, order, FdScheme{1e-3, true}));
  }
  SlopeFit fit = fit_loglog(rep.ts, rep.norms);
  rep.slope = fit.slope;
  rep.residual = fit.residual;
  return rep;
}

std::string GHConfig::to_json() const {
  nlohmann::ordered_json j;
  j["sources"] = nlohmann::ordered_json::array();
  for (const auto& s : sources) {
    nlohmann::ordered_json e;
    e["x"] = {s.x[0], s.x[1], s.x[2]};
    e["m"] = s.m;
    j["sources"].push_back(e);
  }
  j["gauge"] = nlohmann::ordered_json::array();
  for (const auto& s : sources) j["gauge"].push_back({s.string[0], s.string[1], s.string[2]});
  j["period"] = period;
  return j.dump();
}

GHConfig GHConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GHConfig cfg;
  for (const auto& e : j.at("sources")) {
    GHSource s;
    auto xs = e.at("x");
    s.x = Eigen::Vector3d(xs[0], xs[1], xs[2]);
    s.m = e.at("m");
    cfg.sources.push_back(s);
  }
  if (j.contains("gauge")) {
    auto g = j["gauge"];
    for (size_t i = 0; i < cfg.sources.size() && i < g.size(); ++i)
      cfg.sources[i].string = Eigen::Vector3d(g[i][0], g[i][1], g[i][2]);
  }
  if (j.contains("period")) cfg.period = j["period"];
  return cfg;
}

}  // namespace sk
