#pragma once

// Multi-instanton metrics: harmonic potential with integer multiplicities,
// Dirac monopole form with per-source strings, the 4-metric on coordinates
// (tau, x1, x2, x3), the closed hyperkahler triple, and the two-center
// limit identification with the M_{k,l} metric.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sk/chart_atlas.hpp"
#include "sk/dual.hpp"
#include "sk/forms.hpp"
#include "sk/tensor.hpp"

namespace sk {

struct AtSource : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OnString : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CriticalPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GHSource {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  int m = 1;
  Eigen::Vector3d string = Eigen::Vector3d(0, 0, -1);  // Dirac string direction
};

struct GHConfig {
  std::vector<GHSource> sources;
  double period = 4.0 * 3.14159265358979323846;  // tau period; checks do not depend on it

  std::string to_json() const;
  static GHConfig from_json(const std::string& text);
};

inline constexpr double kStringAngleTol = 1e-6;

double gh_potential(const GHConfig& cfg, const Eigen::Vector3d& x);
Eigen::Vector3d gh_grad_potential(const GHConfig& cfg, const Eigen::Vector3d& x);

// Monopole 1-form solving rot omega = grad U: per source
// m (cos Theta - 1) dPhi about the regular pole opposite the string.
Eigen::Vector3d gh_monopole_form(const GHConfig& cfg, const Eigen::Vector3d& x);

// Distance guards.
void gh_check_point(const GHConfig& cfg, const Eigen::Vector3d& x);
bool gh_point_safe(const GHConfig& cfg, const Eigen::Vector3d& x, double source_margin,
                   double string_angle = 0.05);

// Metric field on coordinates (tau, x1, x2, x3), with forward-mode jet.
MetricField gh_metric_field(const GHConfig& cfg);
Eigen::Matrix4d gh_metric_eval(const GHConfig& cfg, const Eigen::Vector3d& x);

// Closed hyperkahler triple K_alpha = (dtau + omega.dx)^dx_alpha
// - U dx_beta^dx_gamma (cyclic), as form fields on (tau,x).
FormField gh_triple_form(const GHConfig& cfg, int alpha);

// The level-set Kahler form of Eq.-(4) type: the parallel combination
// sum_a c_a K_a with c = -grad U/|grad U| frozen at the anchor point. At
// the anchor it agrees with dU/|grad U| ^ (dtau + omega.dx) + U dsigma
// (outward-oriented area form); as a field it is closed. Throws
// CriticalPoint when |grad U|(anchor) is below 1e-10.
FormField gh_kahler_form_field(const GHConfig& cfg, const Eigen::Vector3d& anchor);
FormValue gh_kahler_form(const GHConfig& cfg, const Eigen::Vector3d& x);

// Triple re-ordered and re-signed so that build_phi_t applied to it gives a
// torsion-free G2 structure. The returned fields live on the 4-chart with
// coordinate order (x1, tau, x2, x3), matching the positive orientation the
// G2 model form expects; lift_gh_chart maps (x1,tau,x2,x3) -> (tau,x).
std::array<FormField, 3> gh_g2_triple(const GHConfig& cfg);
Eigen::Vector4d gh_chart_to_tau_x(const Eigen::Vector4d& y);

// Section-4 coordinate identification and the axis-gauge two-center family.
Eigen::Vector3d special_to_gh_x(const SpecialCoords& sc);
double special_to_gh_tau(const SpecialCoords& sc, const WeightPair& kp);

// Two sources on the x1-axis: multiplicity l at (-1,0,0), k at (1,0,0),
// scaled by an overall strength factor.
GHConfig axis_pair_config(const WeightPair& kp, int strength = 1);

// Axis gauge omega = sum_i m_i cos Theta_i dpsi used by the identification.
Eigen::Vector3d gh_axis_gauge_form(const GHConfig& cfg, const Eigen::Vector3d& x);
Eigen::Matrix4d gh_metric_axis_gauge(const GHConfig& cfg, const Eigen::Vector3d& x);

struct LimitReport {
  double c = 0.0;
  double max_rel_dev = 0.0;
  double tol = 0.0;
  bool pass = false;
};
LimitReport limit_coincidence_check(const WeightPair& kp, int n_rho, int n_theta, double tol,
                                    unsigned seed = 1, int strength = 1);

// Eq. (5) three-point configuration at scale t with splitting eps.
GHConfig eq5_config(double t, double eps_split = 1.0);
GHConfig center_config();  // multiplicity-3 source at the origin

// Sample points in the annulus zeta^2/16 < |x| < zeta^2 avoiding strings.
std::vector<Eigen::VectorXd> annulus_points(double zeta, int count, unsigned seed);

struct SlopeReport {
  std::vector<double> ts;
  std::vector<double> norms;
  double slope = 0.0;
  double residual = 0.0;
};

// |nabla^i (U_t - Ubar)| sup over the annulus, fitted against t.
SlopeReport potential_difference_norms(const std::vector<double>& ts, double zeta, int order,
                                       int count, unsigned seed, double eps_split = 1.0);
// Same for the metric coefficient difference ds^2(t) - dsbar^2.
SlopeReport metric_difference_norms(const std::vector<double>& ts, double zeta, int order,
                                    int count, unsigned seed, double eps_split = 1.0);

}  // namespace sk
