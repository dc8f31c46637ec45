#pragma once

// Pointwise exterior algebra on coordinate charts of dimension <= 7.
// A degree-p form value is stored as a coefficient vector over strictly
// increasing multi-indices, ordered lexicographically.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sk {

using IndexSet = std::vector<int>;  // strictly increasing

// Table of all p-subsets of {0..n-1} in lexicographic order, with reverse
// lookup by bitmask. Cached per (n, p).
struct ComboTable {
  int n = 0, p = 0;
  std::vector<IndexSet> sets;
  std::vector<int> pos_by_mask;  // size 2^n, -1 where not a p-set

  static const ComboTable& get(int n, int p);
  int position(uint32_t mask) const { return pos_by_mask[mask]; }
  int size() const { return static_cast<int>(sets.size()); }
};

uint32_t mask_of(const IndexSet& s);

// Sign of sorting the concatenation of two disjoint increasing sets; 0 if
// they intersect. Returns the merged mask through `merged`.
int merge_sign(uint32_t a, uint32_t b, uint32_t& merged);

struct FormValue {
  int n = 0, p = 0;
  Eigen::VectorXd c;  // size C(n,p)

  FormValue() = default;
  FormValue(int n_, int p_) : n(n_), p(p_) {
    c = Eigen::VectorXd::Zero(ComboTable::get(n_, p_).size());
  }

  double& coeff(const IndexSet& idx);
  double coeff(const IndexSet& idx) const;

  FormValue& operator+=(const FormValue& o) { c += o.c; return *this; }
  FormValue& operator-=(const FormValue& o) { c -= o.c; return *this; }
  FormValue& operator*=(double s) { c *= s; return *this; }
  friend FormValue operator+(FormValue a, const FormValue& b) { a += b; return a; }
  friend FormValue operator-(FormValue a, const FormValue& b) { a -= b; return a; }
  friend FormValue operator*(double s, FormValue a) { a *= s; return a; }

  double sup() const { return c.size() ? c.cwiseAbs().maxCoeff() : 0.0; }
};

FormValue wedge(const FormValue& a, const FormValue& b);

// Interior product with the i-th coordinate vector.
FormValue interior(int i, const FormValue& a);

// Hodge star with respect to metric g (lower indices) and an orientation
// sign for the coordinate order. Riemannian signature assumed.
FormValue hodge(const FormValue& a, const Eigen::MatrixXd& g, double orientation = 1.0);

// Pointwise inner product <a,b>_g of two p-forms and the induced norm.
double form_inner(const FormValue& a, const FormValue& b, const Eigen::MatrixXd& g);
inline double form_norm(const FormValue& a, const Eigen::MatrixXd& g) {
  return std::sqrt(std::max(0.0, form_inner(a, a, g)));
}

// Pull a form back through a linear map: (A^* a)(v...) = a(Av...).
// A is the Jacobian, columns indexed by the new coordinates.
FormValue pullback(const FormValue& a, const Eigen::MatrixXd& A);

// A form field over a chart: coefficients as a function of the point.
struct FormField {
  int n = 0, p = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  // Optional analytic partials: partials(x)[k] = d(coeffs)/dx_k.
  std::function<std::vector<Eigen::VectorXd>(const Eigen::VectorXd&)> partials;

  FormValue at(const Eigen::VectorXd& x) const {
    FormValue v(n, p);
    v.c = eval(x);
    return v;
  }
};

struct FdScheme {
  double h = 1e-4;
  bool richardson = true;
};

// Numerical exterior derivative of a form field at x. Uses analytic
// partials when the field provides them, otherwise central differences.
FormValue exterior_derivative(const FormField& f, const Eigen::VectorXd& x,
                              const FdScheme& scheme = {});

// Central-difference partial of a vector-valued function, with one optional
// Richardson extrapolation level.
Eigen::VectorXd fd_partial(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x, int k, const FdScheme& scheme);

}  // namespace sk
