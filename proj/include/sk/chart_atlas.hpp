#pragma once

// The orbifold M_{k,l} = T*CP^1(k,l): weight data, the two uniformizing
// charts (z,alpha) / (w,beta), transitions, the special-coordinate chart
// maps, the blow-down to C^2/Z_{k+l}, and uniformizing groups.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace sk {

struct DegeneratePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OnExceptionalSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSingular : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using cplx = std::complex<double>;

struct WeightPair {
  int k = 1, l = 1;
  WeightPair(int k_, int l_);
  double a() const { return double(l - k) / double(l + k); }
};

enum class ChartId { ZChart, WChart };

// coords = (z, alpha) in ZChart, (w, beta) in WChart.
struct ChartPoint {
  ChartId chart = ChartId::ZChart;
  cplx c0, c1;
};

struct SpecialCoords {
  double rho = 0, theta = 0, phi = 0, psi = 0;
};

struct UniformizingGroup {
  int order = 1;
  Eigen::Matrix2cd generator;
};

// Overlap threshold from the atlas design: below this the transition
// through z^k w^l = 1 is ill-conditioned.
inline constexpr double kOverlapTol = 1e-9;

// Transition between the two charts. The result is canonicalized: the
// argument of the first coordinate is rotated into [0, 2pi/n) by the deck
// action of the target chart's uniformizing group, so the map is an exact
// involution on canonical representatives.
ChartPoint transition(const ChartPoint& p, const WeightPair& kp, ChartId target);

ChartPoint canonicalize(const ChartPoint& p, const WeightPair& kp);

// True when p and q are the same orbifold point (equal up to the deck
// action of their common chart), to relative tolerance.
bool chart_equivalent(const ChartPoint& p, const ChartPoint& q, const WeightPair& kp,
                      double tol = 1e-9);

// Chart maps from special coordinates. The angular periods consistent with
// these maps are returned by period_lattice below.
ChartPoint special_to_chart(const SpecialCoords& sc, const WeightPair& kp, ChartId target);

// A Z_{k+l} orbit in C^2 \ {0}, canonicalized: the argument of the first
// nonzero coordinate lies in [0, 2pi/(k+l)).
struct OrbitPoint {
  cplx u1, u2;
};

OrbitPoint blow_down(const ChartPoint& p, const WeightPair& kp);
ChartPoint blow_up(const OrbitPoint& u, const WeightPair& kp);
OrbitPoint canonicalize_orbit(cplx u1, cplx u2, const WeightPair& kp);

// Uniformizing group of the singular point covered by the given chart
// (order k at the z=0 point, order l at w=0). Throws NotSingular when the
// order is 1.
UniformizingGroup uniformizing_group_at(ChartId chart, const WeightPair& kp);

// Generators of the (psi, phi) identification lattice: translations under
// which every chart map changes by a deck transformation. Columns are the
// generators (2pi, 2pi) and (0, 4pi/(k+l)).
Eigen::Matrix2d period_lattice(const WeightPair& kp);

// Deck exponents (j mod k on the Z chart, m mod l on the W chart) picked up
// by a lattice translation; verifies single-valuedness numerically and
// throws DomainError if the translation is not a deck action.
struct DeckAction {
  int j = 0;  // (z,alpha) -> (zeta_k^j z, zeta_k^-j alpha)
  int m = 0;
};
DeckAction deck_action_of_translation(const WeightPair& kp, double dpsi, double dphi,
                                      double tol = 1e-9);

}  // namespace sk
