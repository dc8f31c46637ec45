#include "sk/forms.hpp"

#include <map>
#include <mutex>

namespace sk {

namespace {
void gen_combos(int n, int p, int start, IndexSet& cur, std::vector<IndexSet>& out) {
  if (static_cast<int>(cur.size()) == p) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    gen_combos(n, p, i + 1, cur, out);
    cur.pop_back();
  }
}
}  // namespace

const ComboTable& ComboTable::get(int n, int p) {
  static std::map<std::pair<int, int>, ComboTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (p < 0 || p > n || n > 12) throw std::invalid_argument("ComboTable: bad (n,p)");
  ComboTable t;
  t.n = n; t.p = p;
  IndexSet cur;
  gen_combos(n, p, 0, cur, t.sets);
  t.pos_by_mask.assign(1u << n, -1);
  for (int i = 0; i < static_cast<int>(t.sets.size()); ++i)
    t.pos_by_mask[mask_of(t.sets[i])] = i;
  return cache.emplace(key, std::move(t)).first->second;
}

uint32_t mask_of(const IndexSet& s) {
  uint32_t m = 0;
  for (int i : s) m |= (1u << i);
  return m;
}

int merge_sign(uint32_t a, uint32_t b, uint32_t& merged) {
  if (a & b) return 0;
  merged = a | b;
  // Count inversions: for each bit of b, the number of bits of a above it.
  int swaps = 0;
  for (uint32_t bb = b; bb; bb &= bb - 1) {
    uint32_t bit = bb & ~(bb - 1);
    uint32_t above = a & ~(bit | (bit - 1));
    swaps += __builtin_popcount(above);
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

double& FormValue::coeff(const IndexSet& idx) {
  int pos = ComboTable::get(n, p).position(mask_of(idx));
  if (pos < 0) throw std::invalid_argument("FormValue::coeff: bad index set");
  return c[pos];
}

double FormValue::coeff(const IndexSet& idx) const {
  int pos = ComboTable::get(n, p).position(mask_of(idx));
  if (pos < 0) throw std::invalid_argument("FormValue::coeff: bad index set");
  return c[pos];
}

FormValue wedge(const FormValue& a, const FormValue& b) {
  if (a.n != b.n) throw std::invalid_argument("wedge: dimension mismatch");
  FormValue out(a.n, a.p + b.p);
  const auto& ta = ComboTable::get(a.n, a.p);
  const auto& tb = ComboTable::get(b.n, b.p);
  const auto& to = ComboTable::get(a.n, a.p + b.p);
  for (int i = 0; i < ta.size(); ++i) {
    if (a.c[i] == 0.0) continue;
    uint32_t ma = mask_of(ta.sets[i]);
    for (int j = 0; j < tb.size(); ++j) {
      if (b.c[j] == 0.0) continue;
      uint32_t merged;
      int s = merge_sign(ma, mask_of(tb.sets[j]), merged);
      if (s == 0) continue;
      out.c[to.position(merged)] += s * a.c[i] * b.c[j];
    }
  }
  return out;
}

FormValue interior(int i, const FormValue& a) {
  FormValue out(a.n, a.p - 1);
  const auto& ta = ComboTable::get(a.n, a.p);
  const auto& to = ComboTable::get(a.n, a.p - 1);
  for (int s = 0; s < ta.size(); ++s) {
    const IndexSet& idx = ta.sets[s];
    for (int pos = 0; pos < a.p; ++pos) {
      if (idx[pos] != i) continue;
      uint32_t rest = mask_of(idx) & ~(1u << i);
      double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      out.c[to.position(rest)] += sign * a.c[s];
    }
  }
  return out;
}

namespace {
double minor_det(const Eigen::MatrixXd& m, const IndexSet& rows, const IndexSet& cols) {
  int p = static_cast<int>(rows.size());
  Eigen::MatrixXd sub(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) sub(i, j) = m(rows[i], cols[j]);
  if (p == 0) return 1.0;
  if (p == 1) return sub(0, 0);
  if (p == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  return sub.determinant();
}

IndexSet complement(const IndexSet& s, int n) {
  IndexSet out;
  uint32_t m = mask_of(s);
  for (int i = 0; i < n; ++i)
    if (!(m & (1u << i))) out.push_back(i);
  return out;
}
}  // namespace

FormValue hodge(const FormValue& a, const Eigen::MatrixXd& g, double orientation) {
  int n = a.n, p = a.p;
  Eigen::MatrixXd gi = g.inverse();
  double sq = std::sqrt(std::abs(g.determinant())) * orientation;
  FormValue out(n, n - p);
  const auto& tp = ComboTable::get(n, p);
  const auto& tq = ComboTable::get(n, n - p);
  for (int jo = 0; jo < tq.size(); ++jo) {
    const IndexSet& J = tq.sets[jo];
    IndexSet K = complement(J, n);
    uint32_t merged;
    int eps = merge_sign(mask_of(K), mask_of(J), merged);
    // raised component a^K = sum_I det(gi[K,I]) a_I
    double raised = 0.0;
    for (int io = 0; io < tp.size(); ++io) {
      if (a.c[io] == 0.0) continue;
      raised += minor_det(gi, K, tp.sets[io]) * a.c[io];
    }
    out.c[jo] = eps * raised * sq;
  }
  return out;
}

double form_inner(const FormValue& a, const FormValue& b, const Eigen::MatrixXd& g) {
  if (a.n != b.n || a.p != b.p) throw std::invalid_argument("form_inner: mismatch");
  Eigen::MatrixXd gi = g.inverse();
  const auto& tp = ComboTable::get(a.n, a.p);
  double acc = 0.0;
  for (int i = 0; i < tp.size(); ++i) {
    if (a.c[i] == 0.0) continue;
    for (int j = 0; j < tp.size(); ++j) {
      if (b.c[j] == 0.0) continue;
      acc += a.c[i] * b.c[j] * minor_det(gi, tp.sets[i], tp.sets[j]);
    }
  }
  return acc;
}

FormValue pullback(const FormValue& a, const Eigen::MatrixXd& A) {
  int m = static_cast<int>(A.cols());
  FormValue out(m, a.p);
  const auto& tin = ComboTable::get(a.n, a.p);
  const auto& tout = ComboTable::get(m, a.p);
  for (int jo = 0; jo < tout.size(); ++jo) {
    double acc = 0.0;
    for (int io = 0; io < tin.size(); ++io) {
      if (a.c[io] == 0.0) continue;
      acc += a.c[io] * minor_det(A, tin.sets[io], tout.sets[jo]);
    }
    out.c[jo] = acc;
  }
  return out;
}

Eigen::VectorXd fd_partial(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x, int k, const FdScheme& scheme) {
  auto central = [&](double h) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h; xm[k] -= h;
    return ((f(xp) - f(xm)) / (2.0 * h)).eval();
  };
  Eigen::VectorXd d1 = central(scheme.h);
  if (!scheme.richardson) return d1;
  Eigen::VectorXd d2 = central(2.0 * scheme.h);
  return (4.0 * d1 - d2) / 3.0;
}

FormValue exterior_derivative(const FormField& f, const Eigen::VectorXd& x,
                              const FdScheme& scheme) {
  int n = f.n, p = f.p;
  std::vector<Eigen::VectorXd> d(n);
  if (f.partials) {
    d = f.partials(x);
  } else {
    for (int k = 0; k < n; ++k) d[k] = fd_partial(f.eval, x, k, scheme);
  }
  FormValue out(n, p + 1);
  const auto& tp = ComboTable::get(n, p);
  const auto& to = ComboTable::get(n, p + 1);
  for (int jo = 0; jo < to.size(); ++jo) {
    const IndexSet& K = to.sets[jo];
    double acc = 0.0;
    for (int pos = 0; pos <= p; ++pos) {
      int k = K[pos];
      IndexSet rest;
      for (int q = 0; q <= p; ++q)
        if (q != pos) rest.push_back(K[q]);
      double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      acc += sign * d[k][tp.position(mask_of(rest))];
    }
    out.c[jo] = acc;
  }
  return out;
}

}  // namespace sk
