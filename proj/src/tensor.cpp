#include "sk/tensor.hpp"

#include <cmath>

namespace sk {

namespace {

Eigen::MatrixXd fd_matrix_partial(const MetricField& m, const Eigen::VectorXd& x, int k,
                                  double h, bool richardson) {
  auto central = [&](double hh) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += hh; xm[k] -= hh;
    return ((m.eval(xp) - m.eval(xm)) / (2.0 * hh)).eval();
  };
  Eigen::MatrixXd d1 = central(h);
  if (!richardson) return d1;
  Eigen::MatrixXd d2 = central(2.0 * h);
  return (4.0 * d1 - d2) / 3.0;
}

Eigen::MatrixXd fd_matrix_second(const MetricField& m, const Eigen::VectorXd& x, int k, int l,
                                 double h, bool richardson) {
  auto second = [&](double hh) -> Eigen::MatrixXd {
    if (k == l) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += hh; xm[k] -= hh;
      return (m.eval(xp) - 2.0 * m.eval(x) + m.eval(xm)) / (hh * hh);
    }
    Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
    xpp[k] += hh; xpp[l] += hh;
    xpm[k] += hh; xpm[l] -= hh;
    xmp[k] -= hh; xmp[l] += hh;
    xmm[k] -= hh; xmm[l] -= hh;
    return (m.eval(xpp) - m.eval(xpm) - m.eval(xmp) + m.eval(xmm)) / (4.0 * hh * hh);
  };
  Eigen::MatrixXd d1 = second(h);
  if (!richardson) return d1;
  Eigen::MatrixXd d2 = second(2.0 * h);
  return (4.0 * d1 - d2) / 3.0;
}

}  // namespace

MetricJet metric_jet(const MetricField& m, const Eigen::VectorXd& x,
                     const DerivativeScheme& scheme) {
  if (scheme.kind == DerivKind::ForwardAd) {
    if (!m.jet) throw std::invalid_argument("metric has no forward-mode evaluator");
    return m.jet(x);
  }
  int n = m.dim;
  MetricJet jet;
  jet.g = m.eval(x);
  jet.dg.resize(n);
  jet.d2g.assign(n, std::vector<Eigen::MatrixXd>(n));
  for (int k = 0; k < n; ++k) jet.dg[k] = fd_matrix_partial(m, x, k, scheme.h, scheme.richardson);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      jet.d2g[k][l] = fd_matrix_second(m, x, k, l, scheme.h, scheme.richardson);
      if (l != k) jet.d2g[l][k] = jet.d2g[k][l];
    }
  return jet;
}

std::vector<Eigen::MatrixXd> christoffel(const MetricJet& jet) {
  int n = static_cast<int>(jet.g.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(jet.g);
  if (llt.info() != Eigen::Success) throw SingularMetric("christoffel: Cholesky failed");
  Eigen::MatrixXd gi = jet.g.inverse();
  std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += gi(i, l) * (jet.dg[j](l, k) + jet.dg[k](l, j) - jet.dg[l](j, k));
        gamma[i](j, k) = 0.5 * s;
        gamma[i](k, j) = gamma[i](j, k);
      }
  return gamma;
}

std::vector<Eigen::MatrixXd> christoffel(const MetricField& m, const Eigen::VectorXd& x,
                                         const DerivativeScheme& scheme) {
  return christoffel(metric_jet(m, x, scheme));
}

CurvatureResult riemann_ricci(const MetricField& m, const Eigen::VectorXd& x,
                              const DerivativeScheme& scheme) {
  MetricJet jet = metric_jet(m, x, scheme);
  int n = m.dim;
  Eigen::LLT<Eigen::MatrixXd> llt(jet.g);
  if (llt.info() != Eigen::Success) throw SingularMetric("riemann_ricci: Cholesky failed");
  Eigen::MatrixXd gi = jet.g.inverse();

  // dgi[k] = -gi dg[k] gi
  std::vector<Eigen::MatrixXd> dgi(n);
  for (int k = 0; k < n; ++k) dgi[k] = -gi * jet.dg[k] * gi;

  std::vector<Eigen::MatrixXd> gamma = christoffel(jet);

  // dGamma[k][i](j,l) = d_k Gamma^i_{jl}
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(n,
      std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = j; l < n; ++l) {
          double s = 0.0;
          for (int p = 0; p < n; ++p) {
            s += dgi[k](i, p) * (jet.dg[j](p, l) + jet.dg[l](p, j) - jet.dg[p](j, l));
            s += gi(i, p) * (jet.d2g[k][j](p, l) + jet.d2g[k][l](p, j) - jet.d2g[k][p](j, l));
          }
          dgamma[k][i](j, l) = 0.5 * s;
          dgamma[k][i](l, j) = dgamma[k][i](j, l);
        }

  CurvatureResult res;
  res.riemann.assign(n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double r = dgamma[k][i](l, j) - dgamma[l][i](k, j);
          for (int mm = 0; mm < n; ++mm)
            r += gamma[i](k, mm) * gamma[mm](l, j) - gamma[i](l, mm) * gamma[mm](k, j);
          res.riemann[i][j](k, l) = r;
        }
  res.ricci = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += res.riemann[i][j](i, l);
      res.ricci(j, l) = s;
    }
  res.scalar = (gi * res.ricci).trace();
  return res;
}

Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw SingularMetric("orthonormal_frame: not SPD");
  Eigen::MatrixXd L = llt.matrixL();
  return L.transpose().inverse();  // E with E^T g E = I, upper triangular
}

Eigen::MatrixXd ricci_orthonormal(const MetricField& m, const Eigen::VectorXd& x,
                                  const DerivativeScheme& scheme) {
  CurvatureResult res = riemann_ricci(m, x, scheme);
  Eigen::MatrixXd E = orthonormal_frame(m.eval(x));
  return E.transpose() * res.ricci * E;
}

namespace {
// Riemann with all indices lowered and frame-transformed; returns the
// symmetric operator on Lambda^2 in the pair basis (a<b) lexicographic.
Eigen::MatrixXd frame_curvature_operator(const MetricField& m, const Eigen::VectorXd& x,
                                         const DerivativeScheme& scheme) {
  CurvatureResult res = riemann_ricci(m, x, scheme);
  int n = m.dim;
  Eigen::MatrixXd g = m.eval(x);
  Eigen::MatrixXd E = orthonormal_frame(g);
  // lower first index: R_{ijkl} = g_{im} R^m_{jkl}
  std::vector<std::vector<Eigen::MatrixXd>> Rl(n,
      std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int mn = 0; mn < n; ++mn)
        Rl[i][j] += g(i, mn) * res.riemann[mn][j];
  // frame transform all four indices
  std::vector<std::vector<Eigen::MatrixXd>> Rf(n,
      std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          acc += E(i, a) * E(j, b) * Rl[i][j];
      Rf[a][b] = E.transpose() * acc * E;
    }
  const auto& pairs = ComboTable::get(n, 2);
  int np = pairs.size();
  Eigen::MatrixXd op(np, np);
  for (int r = 0; r < np; ++r)
    for (int c = 0; c < np; ++c) {
      int a = pairs.sets[r][0], b = pairs.sets[r][1];
      int cc = pairs.sets[c][0], d = pairs.sets[c][1];
      op(r, c) = Rf[a][b](cc, d);
    }
  return op;
}
}  // namespace

Eigen::MatrixXd riemann_frame_operator(const MetricField& m, const Eigen::VectorXd& x,
                                       const DerivativeScheme& scheme) {
  return frame_curvature_operator(m, x, scheme);
}

double riemann_frame_sup(const MetricField& m, const Eigen::VectorXd& x,
                         const DerivativeScheme& scheme) {
  return frame_curvature_operator(m, x, scheme).cwiseAbs().maxCoeff();
}

WeylSplit weyl_split(const MetricField& m, const Eigen::VectorXd& x,
                     const DerivativeScheme& scheme, double orientation) {
  if (m.dim != 4) throw std::invalid_argument("weyl_split: dimension must be 4");
  CurvatureResult res = riemann_ricci(m, x, scheme);
  int n = 4;
  Eigen::MatrixXd g = m.eval(x);
  Eigen::MatrixXd E = orthonormal_frame(g);
  Eigen::MatrixXd ricf = E.transpose() * res.ricci * E;
  double scal = res.scalar;

  // frame Riemann, all lowered
  std::vector<std::vector<Eigen::MatrixXd>> Rl(n,
      std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int mn = 0; mn < n; ++mn)
        Rl[i][j] += g(i, mn) * res.riemann[mn][j];
  auto Rf = [&](int a, int b, int c, int d) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            acc += E(i, a) * E(j, b) * E(k, c) * E(l, d) * Rl[i][j](k, l);
    return acc;
  };
  auto kron = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  auto W = [&](int a, int b, int c, int d) {
    double r = Rf(a, b, c, d);
    r -= 0.5 * (kron(a, c) * ricf(b, d) - kron(a, d) * ricf(b, c) +
                kron(b, d) * ricf(a, c) - kron(b, c) * ricf(a, d));
    r += (scal / 6.0) * (kron(a, c) * kron(b, d) - kron(a, d) * kron(b, c));
    return r;
  };
  // operator on Lambda^2, pair basis (01,02,03,12,13,23)
  const auto& pairs = ComboTable::get(4, 2);
  Eigen::MatrixXd Wop(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c)
      Wop(r, c) = W(pairs.sets[r][0], pairs.sets[r][1], pairs.sets[c][0], pairs.sets[c][1]);
  // Hodge star on Lambda^2 in the orthonormal frame: *e^{ab} = eps(ab,cd) e^{cd}
  Eigen::MatrixXd star = Eigen::MatrixXd::Zero(6, 6);
  for (int r = 0; r < 6; ++r) {
    uint32_t mk = mask_of(pairs.sets[r]);
    for (int c = 0; c < 6; ++c) {
      uint32_t merged;
      int s = merge_sign(mk, mask_of(pairs.sets[c]), merged);
      if (s != 0 && merged == 0xFu) star(c, r) = s * orientation;
    }
  }
  Eigen::MatrixXd Pp = 0.5 * (Eigen::MatrixXd::Identity(6, 6) + star);
  Eigen::MatrixXd Pm = 0.5 * (Eigen::MatrixXd::Identity(6, 6) - star);
  WeylSplit out;
  out.w_plus = (Pp * Wop * Pp).norm();
  out.w_minus = (Pm * Wop * Pm).norm();
  return out;
}

namespace {
void sup_partials(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field,
                  const Eigen::VectorXd& x, int order, const FdScheme& scheme, int dim,
                  double& acc) {
  if (order == 0) {
    Eigen::VectorXd v = field(x);
    if (v.size()) acc = std::max(acc, v.cwiseAbs().maxCoeff());
    return;
  }
  for (int k = 0; k < dim; ++k) {
    auto dfield = [&field, k, &scheme](const Eigen::VectorXd& y) {
      return fd_partial(field, y, k, scheme);
    };
    sup_partials(dfield, x, order - 1, scheme, dim, acc);
  }
}
}  // namespace

double grid_sup_norm(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field,
                     const std::vector<Eigen::VectorXd>& grid, int order,
                     const FdScheme& scheme) {
  double acc = 0.0;
  for (const auto& x : grid)
    sup_partials(field, x, order, scheme, static_cast<int>(x.size()), acc);
  return acc;
}

SlopeFit fit_loglog(const std::vector<double>& ts, const std::vector<double>& values) {
  if (ts.size() != values.size() || ts.size() < 2)
    throw std::invalid_argument("fit_loglog: need >= 2 samples");
  int n = static_cast<int>(ts.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = std::log(ts[i]);
    A(i, 1) = 1.0;
    y[i] = std::log(values[i]);
  }
  Eigen::Vector2d sol = (A.transpose() * A).ldlt().solve(A.transpose() * y);
  SlopeFit fit;
  fit.slope = sol[0];
  fit.intercept = sol[1];
  fit.residual = std::sqrt((A * sol - y).squaredNorm() / n);
  return fit;
}

}  // namespace sk
