#pragma once

// The special Kahler metric on M_{k,l} in the coordinates (rho, theta, psi,
// phi): evaluators, the Kahler form, curvature and compatibility checks,
// holonomy via parallel transport, and the Eguchi-Hanson reduction at a=0.

#include <Eigen/Dense>

#include "sk/chart_atlas.hpp"
#include "sk/dual.hpp"
#include "sk/forms.hpp"
#include "sk/ode.hpp"
#include "sk/tensor.hpp"

namespace sk {

struct FitFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Entries of the line element
//   ds^2 = (ch rho - a cos th)(drho^2 + dth^2)
//        + sh^2 rho / (ch rho - a cos th) (dpsi + cos th dphi)^2
//        + sin^2 th / (ch rho - a cos th) (a dpsi + ch rho dphi)^2
// scaled by t^2, in coordinate order (rho, theta, psi, phi). The rho-rho
// entry is multiplied by (1 + perturb) to provide a negative control.
template <typename T>
std::array<std::array<T, 4>, 4> mkl_metric_entries(T rho, T theta, double a, double t2,
                                                   double perturb = 0.0) {
  T A = cosh(rho) - a * cos(theta);
  T B = sinh(rho) * sinh(rho) / A;
  T C = sin(theta) * sin(theta) / A;
  T cth = cos(theta), chr = cosh(rho);
  std::array<std::array<T, 4>, 4> g{};
  g[0][0] = A * (1.0 + perturb);
  g[1][1] = A;
  g[2][2] = B + C * (a * a);
  g[2][3] = B * cth + C * (a * chr);
  g[3][2] = g[2][3];
  g[3][3] = B * (cth * cth) + C * (chr * chr);
  for (auto& row : g)
    for (auto& e : row) e = t2 * e;
  return g;
}

struct MklMetric {
  WeightPair kp;
  double t = 1.0;        // homothety: ds^2(t) = t^2 ds^2(1)
  double perturb = 0.0;  // negative-control knob on g_rho_rho
  double rho_min = 1e-6;

  explicit MklMetric(WeightPair kp_, double t_ = 1.0, double perturb_ = 0.0)
      : kp(kp_), t(t_), perturb(perturb_) {}

  Eigen::Matrix4d eval(const SpecialCoords& sc) const;
  MetricField field() const;  // with forward-mode jet
};

// The closed Kahler form of Theorem 1 (scaled by t^2), plus its analytic
// coordinate partials.
FormField mkl_kahler_form(const WeightPair& kp, double t = 1.0);

// Pointwise complex structure J = -g^{-1} omega (sign chosen so the chart
// coordinates are holomorphic).
Eigen::Matrix4d mkl_complex_structure(const WeightPair& kp, const SpecialCoords& sc);

struct GridSpec {
  int n_rho = 20, n_theta = 20;
  double rho_lo = 0.5, rho_hi = 2.0;
  double theta_lo = 0.5, theta_hi = 2.6;
  double psi = 0.3, phi = 0.7;
  std::vector<Eigen::VectorXd> points() const;
};

struct RicciReport {
  double max_ricci = 0.0;
  double tol = 0.0;
  bool pass = false;
};
RicciReport ricci_flat_check(const WeightPair& kp, const GridSpec& grid, double tol,
                             const DerivativeScheme& scheme = DerivativeScheme::ad(),
                             double perturb = 0.0);

struct KahlerReport {
  double sup_domega = 0.0;     // closedness
  double sup_j_squared = 0.0;  // ||J^2 + I||
  double sup_nabla_j = 0.0;    // covariant-derivative components of J
  double sup_compat = 0.0;     // ||gJ + (gJ)^T||
  double min_volume = 0.0;     // min |omega^2 / 2 vol_g|, sign-consistent
  bool volume_sign_constant = false;
  double tol = 0.0;
  bool pass = false;
};
KahlerReport kahler_check(const WeightPair& kp, const GridSpec& grid, double tol);

struct HolonomyElement {
  Eigen::Matrix4d transport;        // coordinate frame
  Eigen::Matrix4d frame_transport;  // orthonormal frame at the base point
  Eigen::Matrix2cd complex_rep;     // in a J-adapted unitary frame
  double isometry_defect = 0.0;     // ||T^T g T - g|| (coordinate frame)
  double omega_defect = 0.0;        // ||T*omega - omega||
  double det_defect = 0.0;          // |det_C - 1|
  double su2_defect = 0.0;          // max of the three above
  double identity_defect = 0.0;     // ||T_frame - I||
};

HolonomyElement parallel_transport(const Loop& loop, const WeightPair& kp, double ode_tol);

// Translation loop (0,0,0, 4 pi/(k+l)) at base (rad, rad, psi0, phi0): the
// deck generator around the z=0 singular point. Returns the transport and
// its deviation from the uniformizing generator action.
struct AxisLoopReport {
  HolonomyElement hol;
  int group_order = 0;
  double generator_defect = 0.0;  // ||T_frame - (-I)|| for k=2; trace defect otherwise
};
AxisLoopReport axis_loop_check(const WeightPair& kp, double rad, double ode_tol);

struct EguchiHansonReport {
  double max_rel_dev = 0.0;
  double eh_parameter = 0.0;  // fitted a_EH
  bool monotone = false;
  bool pass = false;
};
EguchiHansonReport eguchi_hanson_compare(const GridSpec& grid, double tol);

// theta-independence of the metric in the coframe {drho, dth, dpsi + cos th
// dphi, sin th dphi}; zero for a=0 (cohomogeneity one), nonzero otherwise.
double cohomogeneity_symmetry_defect(const WeightPair& kp);

}  // namespace sk
