#include "sk/chart_atlas.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace sk {

namespace {
constexpr double kPi = std::numbers::pi;

// Rotate c0 by the n-th root of unity taking arg(c0) into [0, 2pi/n);
// c1 gets the inverse phase. Identity when n == 1 or c0 == 0.
void deck_canonicalize(cplx& c0, cplx& c1, int n) {
  if (n <= 1 || c0 == cplx(0.0)) return;
  double sector = 2.0 * kPi / n;
  double arg = std::arg(c0);
  int j = static_cast<int>(std::floor(arg / sector));
  // floor can be off by one at sector boundaries; fix up.
  double newarg = arg - j * sector;
  while (newarg < 0) { newarg += sector; --j; }
  while (newarg >= sector) { newarg -= sector; ++j; }
  if (j == 0) return;
  cplx rot = std::polar(1.0, -j * sector);
  c0 *= rot;
  c1 *= std::conj(rot);
}
}  // namespace

WeightPair::WeightPair(int k_, int l_) : k(k_), l(l_) {
  if (k <= 0 || l <= 0) throw DomainError("weights must be positive");
  if (std::gcd(k, l) != 1) throw DomainError("weights must be coprime");
}

ChartPoint canonicalize(const ChartPoint& p, const WeightPair& kp) {
  ChartPoint q = p;
  deck_canonicalize(q.c0, q.c1, p.chart == ChartId::ZChart ? kp.k : kp.l);
  return q;
}

bool chart_equivalent(const ChartPoint& p, const ChartPoint& q, const WeightPair& kp,
                      double tol) {
  if (p.chart != q.chart) return false;
  int n = (p.chart == ChartId::ZChart) ? kp.k : kp.l;
  double scale = std::abs(p.c0) + std::abs(p.c1) + 1.0;
  for (int j = 0; j < n; ++j) {
    cplx rot = std::polar(1.0, 2.0 * kPi * j / n);
    if (std::abs(p.c0 * rot - q.c0) + std::abs(p.c1 * std::conj(rot) - q.c1) < tol * scale)
      return true;
  }
  return false;
}

ChartPoint transition(const ChartPoint& p, const WeightPair& kp, ChartId target) {
  if (p.chart == target) return canonicalize(p, kp);
  const double k = kp.k, l = kp.l;
  double r = std::abs(p.c0);
  if (p.chart == ChartId::ZChart) {
    if (r < kOverlapTol || std::pow(r, -k / l) < kOverlapTol)
      throw DegeneratePoint("transition: point not on the chart overlap");
    cplx w = std::pow(p.c0, -k / l);  // principal branch of z^{-k/l}
    cplx beta = p.c1 * p.c0 / w;
    ChartPoint q{ChartId::WChart, w, beta};
    return canonicalize(q, kp);
  }
  if (r < kOverlapTol || std::pow(r, -l / k) < kOverlapTol)
    throw DegeneratePoint("transition: point not on the chart overlap");
  cplx z = std::pow(p.c0, -l / k);
  cplx alpha = p.c1 * p.c0 / z;
  ChartPoint q{ChartId::ZChart, z, alpha};
  return canonicalize(q, kp);
}

ChartPoint special_to_chart(const SpecialCoords& sc, const WeightPair& kp, ChartId target) {
  const double k = kp.k, l = kp.l;
  const double a = kp.a();
  const double mu = (k + l) / (2.0 * k * l);
  const double sT = std::sin(0.5 * sc.theta), cT = std::cos(0.5 * sc.theta);
  const double sR = std::sinh(0.5 * sc.rho), cR = std::cosh(0.5 * sc.rho);
  if (target == ChartId::ZChart) {
    if (!(sc.theta < kPi)) throw DomainError("special_to_chart: theta = pi not in Z chart");
    cplx z = (sT * cR) * std::pow(cT * cR, -l / k) *
             std::polar(1.0, -l * mu * (a * sc.psi + sc.phi));
    cplx alpha = (k * l) * (sR * cT) * std::pow(cT * cR, l / k) *
                 std::polar(1.0, l * mu * (sc.psi + sc.phi));
    return ChartPoint{ChartId::ZChart, z, alpha};
  }
  if (!(sc.theta > 0.0)) throw DomainError("special_to_chart: theta = 0 not in W chart");
  cplx w = (cT * cR) * std::pow(sT * cR, -k / l) *
           std::polar(1.0, k * mu * (a * sc.psi + sc.phi));
  cplx beta = (k * l) * (sR * sT) * std::pow(sT * cR, k / l) *
              std::polar(1.0, k * mu * (sc.psi - sc.phi));
  return ChartPoint{ChartId::WChart, w, beta};
}

OrbitPoint canonicalize_orbit(cplx u1, cplx u2, const WeightPair& kp) {
  int n = kp.k + kp.l;
  double sector = 2.0 * kPi / n;
  cplx lead = (u1 != cplx(0.0)) ? u1 : u2;
  if (lead == cplx(0.0)) return {u1, u2};
  double arg = std::arg(lead);
  int j = static_cast<int>(std::floor(arg / sector));
  double newarg = arg - j * sector;
  while (newarg < 0) { newarg += sector; --j; }
  while (newarg >= sector) { newarg -= sector; ++j; }
  double s = (u1 != cplx(0.0)) ? 1.0 : -1.0;  // u2 rotates by the inverse root
  cplx rot = std::polar(1.0, -j * s * sector);
  return {u1 * rot, u2 * std::conj(rot)};
}

OrbitPoint blow_down(const ChartPoint& p, const WeightPair& kp) {
  const double k = kp.k, l = kp.l, n = k + l;
  if (p.c1 == cplx(0.0))
    throw OnExceptionalSet("blow_down: point lies on the zero section");
  cplx u1, u2;
  if (p.chart == ChartId::ZChart) {
    u1 = std::pow(p.c1, k / n);
    u2 = p.c0 * std::pow(p.c1, l / n);
  } else {
    u1 = p.c0 * std::pow(p.c1, k / n);
    u2 = std::pow(p.c1, l / n);
  }
  return canonicalize_orbit(u1, u2, kp);
}

ChartPoint blow_up(const OrbitPoint& u, const WeightPair& kp) {
  const double k = kp.k, l = kp.l, n = k + l;
  if (u.u1 == cplx(0.0) && u.u2 == cplx(0.0))
    throw DomainError("blow_up: origin has no chart image");
  if (std::abs(u.u1) >= std::abs(u.u2)) {
    cplx alpha = std::pow(u.u1, n / k);
    cplx z = u.u2 * std::pow(u.u1, -l / k);
    return canonicalize(ChartPoint{ChartId::ZChart, z, alpha}, kp);
  }
  cplx beta = std::pow(u.u2, n / l);
  cplx w = u.u1 * std::pow(u.u2, -k / l);
  return canonicalize(ChartPoint{ChartId::WChart, w, beta}, kp);
}

UniformizingGroup uniformizing_group_at(ChartId chart, const WeightPair& kp) {
  int n = (chart == ChartId::ZChart) ? kp.k : kp.l;
  if (n == 1) throw NotSingular("uniformizing_group_at: point is regular");
  UniformizingGroup g;
  g.order = n;
  cplx om = std::polar(1.0, 2.0 * kPi / n);
  g.generator = Eigen::Matrix2cd::Zero();
  g.generator(0, 0) = om;
  g.generator(1, 1) = std::conj(om);
  return g;
}

Eigen::Matrix2d period_lattice(const WeightPair& kp) {
  Eigen::Matrix2d gens;
  gens.col(0) << 2.0 * kPi, 2.0 * kPi;
  gens.col(1) << 0.0, 4.0 * kPi / (kp.k + kp.l);
  return gens;
}

DeckAction deck_action_of_translation(const WeightPair& kp, double dpsi, double dphi,
                                      double tol) {
  // Compare chart values at a generic interior point under the translation.
  SpecialCoords sc{0.83, 1.21, 0.41, 0.29};
  SpecialCoords sc2{sc.rho, sc.theta, sc.phi + dphi, sc.psi + dpsi};
  ChartPoint pz = special_to_chart(sc, kp, ChartId::ZChart);
  ChartPoint pz2 = special_to_chart(sc2, kp, ChartId::ZChart);
  ChartPoint pw = special_to_chart(sc, kp, ChartId::WChart);
  ChartPoint pw2 = special_to_chart(sc2, kp, ChartId::WChart);
  DeckAction act;
  auto find = [&](const ChartPoint& p, const ChartPoint& q, int n, int& out) {
    for (int j = 0; j < n; ++j) {
      cplx rot = std::polar(1.0, 2.0 * kPi * j / n);
      if (std::abs(p.c0 * rot - q.c0) + std::abs(p.c1 * std::conj(rot) - q.c1) <
          tol * (std::abs(p.c0) + std::abs(p.c1))) {
        out = j;
        return true;
      }
    }
    return false;
  };
  if (!find(pz, pz2, kp.k, act.j) || !find(pw, pw2, kp.l, act.m))
    throw DomainError("translation is not a deck action of the chart atlas");
  return act;
}

}  // namespace sk
