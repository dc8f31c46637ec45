#pragma once

// Curvature engine for metrics given as coefficient-matrix evaluators.
// Two derivative routes: finite differences (with one Richardson level)
// and forward-mode jets supplied by the metric itself.

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sk/forms.hpp"

namespace sk {

struct SingularMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DerivKind { CentralFd, ForwardAd };

struct DerivativeScheme {
  DerivKind kind = DerivKind::ForwardAd;
  double h = 1e-4;
  bool richardson = true;
  static DerivativeScheme fd(double h = 1e-4) { return {DerivKind::CentralFd, h, true}; }
  static DerivativeScheme ad() { return {DerivKind::ForwardAd, 0.0, false}; }
};

// Metric with first and second coordinate derivatives at a point.
struct MetricJet {
  Eigen::MatrixXd g;
  std::vector<Eigen::MatrixXd> dg;                // dg[k] = d g / dx_k
  std::vector<std::vector<Eigen::MatrixXd>> d2g;  // d2g[k][l], symmetric in (k,l)
};

struct MetricField {
  int dim = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> eval;
  std::function<MetricJet(const Eigen::VectorXd&)> jet;  // optional AD route
  std::function<bool(const Eigen::VectorXd&)> domain;    // optional
};

MetricJet metric_jet(const MetricField& m, const Eigen::VectorXd& x,
                     const DerivativeScheme& scheme);

// Christoffel symbols Gamma[i](j,k) of the Levi-Civita connection.
std::vector<Eigen::MatrixXd> christoffel(const MetricJet& jet);
std::vector<Eigen::MatrixXd> christoffel(const MetricField& m, const Eigen::VectorXd& x,
                                         const DerivativeScheme& scheme);

struct CurvatureResult {
  // riemann[i][j](k,l) = R^i_{jkl}
  std::vector<std::vector<Eigen::MatrixXd>> riemann;
  Eigen::MatrixXd ricci;   // Ric_{jl}
  double scalar = 0.0;
};

CurvatureResult riemann_ricci(const MetricField& m, const Eigen::VectorXd& x,
                              const DerivativeScheme& scheme);

// Orthonormal frame by Gram-Schmidt on the coordinate frame in its given
// order: E = L^{-T} with g = L L^T; columns are the frame vectors.
Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g);

// Ricci in that frame: E^T Ric E.
Eigen::MatrixXd ricci_orthonormal(const MetricField& m, const Eigen::VectorXd& x,
                                  const DerivativeScheme& scheme);

// Frame components of the full Riemann tensor, all indices lowered,
// flattened to R_{ab,cd} on pairs (a<b),(c<d) in lexicographic pair order.
Eigen::MatrixXd riemann_frame_operator(const MetricField& m, const Eigen::VectorXd& x,
                                       const DerivativeScheme& scheme);

// Max absolute frame component of Riemann.
double riemann_frame_sup(const MetricField& m, const Eigen::VectorXd& x,
                         const DerivativeScheme& scheme);

// Self-dual and anti-self-dual Weyl norms in dimension 4 for the given
// coordinate-order orientation.
struct WeylSplit {
  double w_plus = 0.0;
  double w_minus = 0.0;
};
WeylSplit weyl_split(const MetricField& m, const Eigen::VectorXd& x,
                     const DerivativeScheme& scheme, double orientation = 1.0);

// sup over grid points, components and order-i multi-indices of the
// iterated coordinate partials of a vector-valued field.
double grid_sup_norm(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field,
                     const std::vector<Eigen::VectorXd>& grid, int order,
                     const FdScheme& scheme = {});

// Least-squares slope of log(values) against log(ts), with fit residual
// (RMS of log-residuals).
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};
SlopeFit fit_loglog(const std::vector<double>& ts, const std::vector<double>& values);

}  // namespace sk
