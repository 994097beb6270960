#include "suq/comult.hpp"

#include <cmath>
#include <stdexcept>

namespace suq {

namespace {

double sign_pow(int sign, int k) { return (sign < 0 && (k & 1)) ? -1.0 : 1.0; }

}  // namespace

void TwoLegVector::add(const LegPairKey& key, cplx w) {
  if (w == cplx(0.0)) return;
  coeff[key] += w;
}

cplx TwoLegVector::at(const LegPairKey& key) const {
  auto it = coeff.find(key);
  return it == coeff.end() ? cplx(0.0) : it->second;
}

double TwoLegVector::norm() const {
  double s = 0.0;
  for (auto& [k, w] : coeff) s += std::norm(w);
  return std::sqrt(s);
}

cplx inner(const TwoLegVector& a, const TwoLegVector& b) {
  // iterate the smaller support
  const TwoLegVector& lead = a.coeff.size() <= b.coeff.size() ? a : b;
  cplx s = 0.0;
  for (auto& [k, w] : lead.coeff) s += std::conj(a.at(k)) * b.at(k);
  return s;
}

double distance(const TwoLegVector& a, const TwoLegVector& b) {
  double s = 0.0;
  for (auto& [k, w] : a.coeff) s += std::norm(w - b.at(k));
  for (auto& [k, w] : b.coeff)
    if (a.coeff.find(k) == a.coeff.end()) s += std::norm(w);
  return std::sqrt(s);
}

int line_length(int m, int sign, const LatticeWindow& window) {
  const LatticePoint theta{sign, m};
  int n = 0;
  for (auto x : window.points()) {
    LatticePoint y = times(theta, x);
    if (y.in_lattice() && window.contains(y)) ++n;
  }
  return n;
}

bool line_admissible(int m, int sign, const LatticeWindow& window, int min_line) {
  return line_length(m, sign, window) >= min_line;
}

TwoLegVector digamma_vector(const DigammaIndex& idx, const TruncatedSpace& space,
                            const QParam& qp, double tol) {
  validate(qp);
  validate(space.window);
  if (!idx.p.in_lattice())
    throw std::invalid_argument("digamma_vector: p outside I_q");
  TwoLegVector out;
  const LatticePoint theta{idx.p.sign, idx.m};
  for (auto x : space.window.points()) {
    LatticePoint y = times(theta, x);
    if (!y.in_lattice() || !space.window.contains(y)) continue;
    double a = a_coeff({idx.p, x, y}, qp, tol);
    out.add({idx.r + chi(y) - chi(idx.p), x, idx.s - chi(x) + chi(idx.p), y}, a);
  }
  return out;
}

DigammaTable v_forward(const TwoLegVector& vec, const TruncatedSpace& space,
                       const QParam& qp, int min_line, double tol) {
  validate(qp);
  validate(space.window);
  DigammaTable out;
  for (auto& [key, w] : vec.coeff) {
    if (w == cplx(0.0)) continue;
    // the family is window-truncated, so keys outside the window overlap nothing
    if (!space.window.contains(key.x) || !space.window.contains(key.y))
      continue;
    const int sign_p = key.x.sign * key.y.sign;
    const int m = chi(key.y) - chi(key.x);
    if (!line_admissible(m, sign_p, space.window, min_line)) continue;
    for (auto p : space.window.points()) {
      if (p.sign != sign_p) continue;
      double a = a_coeff({p, key.x, key.y}, qp, tol);
      if (a == 0.0) continue;
      DigammaIndex idx{key.m1 - chi(key.y) + chi(p),
                       key.m2 + chi(key.x) - chi(p), m, p};
      out[idx] += w * a;
    }
  }
  return out;
}

TwoLegVector v_inverse(const DigammaTable& table, const TruncatedSpace& space,
                       const QParam& qp, int min_line, double tol) {
  validate(qp);
  validate(space.window);
  TwoLegVector out;
  for (auto& [idx, c] : table) {
    if (c == cplx(0.0)) continue;
    if (!space.window.contains(idx.p)) continue;
    if (!line_admissible(idx.m, idx.p.sign, space.window, min_line)) continue;
    TwoLegVector f = digamma_vector(idx, space, qp, tol);
    for (auto& [key, a] : f.coeff) out.add(key, c * a);
  }
  return out;
}

TruncatedSpace delta_op_space(const TruncatedSpace& space) {
  // line index = chi(y) - chi(x) over window pairs; +4 covers generator shifts
  return {space.window.k_max - space.window.k_min + 4, space.window};
}

TwoLegVector delta_apply(const SparseOperator& a, const TwoLegVector& vec,
                         const QParam& qp, int min_line, double tol) {
  const TruncatedSpace two_leg{0, a.space().window};
  DigammaTable analysis = v_forward(vec, two_leg, qp, min_line, tol);
  DigammaTable moved;
  for (auto& [idx, c] : analysis) {
    int col = a.space().index_of(idx.m, idx.p);
    if (col < 0)
      throw std::invalid_argument(
          "delta_apply: operator space cannot express a line index");
    for (auto& [row, w] : a.column(col)) {
      auto [m2, p2] = a.space().label_of(row);
      moved[{idx.r, idx.s, m2, p2}] += w * c;
    }
  }
  return v_inverse(moved, two_leg, qp, min_line, tol);
}

namespace {

// one-leg generator actions of the underlying quantum-group algebra; exact,
// with targets clipped to the window (zero-extension beyond I_q is exact and
// already encoded by the vanishing alpha-dagger weight at -q)
enum class LegOp { alpha, e_alpha_dag, gamma, e_gamma_dag };

void leg_emit(LegOp op, int m, const LatticePoint& x, const QParam& qp,
              const LatticeWindow& window, int& m_out, LatticePoint& x_out,
              double& w_out) {
  const double q = qp.q;
  w_out = 0.0;
  switch (op) {
    case LegOp::alpha: {
      x_out = {x.sign, x.k + 1};
      m_out = m;
      w_out = std::sqrt(x.sign + std::pow(q, -2 * x.k));
      break;
    }
    case LegOp::e_alpha_dag: {
      x_out = {x.sign, x.k - 1};
      m_out = m;
      if (!x_out.in_lattice()) return;
      w_out = x.sign * std::sqrt(x.sign + std::pow(q, 2 - 2 * x.k));
      break;
    }
    case LegOp::gamma: {
      x_out = x;
      m_out = m + 1;
      w_out = x.sign * std::pow(q, -x.k);
      break;
    }
    case LegOp::e_gamma_dag: {
      x_out = x;
      m_out = m - 1;
      w_out = std::pow(q, -x.k);
      break;
    }
  }
  if (!window.contains(x_out)) w_out = 0.0;
}

TwoLegVector pair_apply(LegOp first, LegOp second, cplx scale,
                        const TwoLegVector& vec, const LatticeWindow& window,
                        const QParam& qp) {
  TwoLegVector out;
  for (auto& [key, w] : vec.coeff) {
    int m1;
    LatticePoint x1;
    double w1;
    leg_emit(first, key.m1, key.x, qp, window, m1, x1, w1);
    if (w1 == 0.0) continue;
    int m2;
    LatticePoint x2;
    double w2;
    leg_emit(second, key.m2, key.y, qp, window, m2, x2, w2);
    if (w2 == 0.0) continue;
    out.add({m1, x1, m2, x2}, scale * w * w1 * w2);
  }
  return out;
}

}  // namespace

TwoLegVector delta0_apply(Generator which, const TwoLegVector& vec,
                          const TruncatedSpace& space, const QParam& qp) {
  validate(qp);
  validate(space.window);
  TwoLegVector out;
  switch (which) {
    case Generator::alpha: {
      out = pair_apply(LegOp::alpha, LegOp::alpha, 1.0, vec, space.window, qp);
      TwoLegVector t = pair_apply(LegOp::e_gamma_dag, LegOp::gamma, qp.q, vec,
                                  space.window, qp);
      for (auto& [k, w] : t.coeff) out.add(k, w);
      return out;
    }
    case Generator::gamma: {
      out = pair_apply(LegOp::gamma, LegOp::alpha, 1.0, vec, space.window, qp);
      TwoLegVector t = pair_apply(LegOp::e_alpha_dag, LegOp::gamma, 1.0, vec,
                                  space.window, qp);
      for (auto& [k, w] : t.coeff) out.add(k, w);
      return out;
    }
    default:
      throw std::invalid_argument("delta0_apply: only alpha and gamma");
  }
}

namespace {

bool leg_interior(const LatticePoint& t, const LatticeWindow& w, int budget) {
  if (t.sign > 0) return t.k >= w.k_min + budget && t.k <= w.k_max - budget;
  return t.k <= w.negative_k_max - budget;
}

// drop keys whose difference stencil reaches past the window edge; the one-
// sided terms that remain there are q^{-k}-amplified truncation artifacts,
// not coefficient defects
double interior_defect(const TwoLegVector& lhs, const TwoLegVector& rhs,
                       const LatticeWindow& w, int budget) {
  TwoLegVector l, r;
  for (auto& [key, c] : lhs.coeff)
    if (leg_interior(key.x, w, budget) && leg_interior(key.y, w, budget))
      l.add(key, c);
  for (auto& [key, c] : rhs.coeff)
    if (leg_interior(key.x, w, budget) && leg_interior(key.y, w, budget))
      r.add(key, c);
  return distance(l, r) / (1.0 + l.norm() + r.norm());
}

}  // namespace

double hopf_inclusion_residual(Generator which,
                               const std::vector<TwoLegVector>& samples,
                               const TruncatedSpace& space, const QParam& qp,
                               int budget, int min_line, double tol) {
  SparseOperator op = build_generator(which, delta_op_space(space), qp);
  double worst = 0.0;
  for (auto& v : samples) {
    TwoLegVector lhs = delta_apply(op, v, qp, min_line, tol);
    TwoLegVector rhs = delta0_apply(which, v, space, qp);
    worst = std::max(worst, interior_defect(lhs, rhs, space.window, budget));
  }
  return worst;
}

double eigen_action_residual(Generator which, const DigammaIndex& idx,
                             const TruncatedSpace& space, const QParam& qp,
                             int budget) {
  TwoLegVector f = digamma_vector(idx, space, qp);
  TwoLegVector lhs;
  DigammaIndex shifted = idx;
  double scale = 0.0;
  switch (which) {
    case Generator::gamma:
      lhs = delta0_apply(Generator::gamma, f, space, qp);
      shifted.m += 1;
      scale = idx.p.sign * std::pow(qp.q, -idx.p.k);
      break;
    case Generator::alpha:
      lhs = delta0_apply(Generator::alpha, f, space, qp);
      shifted.p = {idx.p.sign, idx.p.k + 1};
      scale = std::sqrt(idx.p.sign + std::pow(qp.q, -2 * idx.p.k));
      break;
    case Generator::e:
      // support lies on sgn(xy) = sgn(p), so e (x) e is the scalar sgn(p)
      for (auto& [key, w] : f.coeff)
        lhs.add(key, double(key.x.sign * key.y.sign) * w);
      scale = idx.p.sign;
      break;
    default:
      throw std::invalid_argument(
          "eigen_action_residual: only alpha, gamma, e");
  }
  TwoLegVector rhs;
  if (which == Generator::e) {
    for (auto& [key, w] : f.coeff) rhs.add(key, scale * w);
  } else {
    TwoLegVector g = digamma_vector(shifted, space, qp);
    for (auto& [key, w] : g.coeff) rhs.add(key, scale * w);
  }
  return interior_defect(lhs, rhs, space.window, budget);
}

double parseval_defect(const TwoLegVector& vec, const TruncatedSpace& space,
                       const QParam& qp, int min_line, double tol) {
  DigammaTable table = v_forward(vec, space, qp, min_line, tol);
  double n2 = 0.0;
  for (auto& [idx, c] : table) n2 += std::norm(c);
  return std::abs(std::sqrt(n2) - vec.norm());
}

double flip_symmetry_residual(const std::vector<DigammaIndex>& indices,
                              const TruncatedSpace& space, const QParam& qp,
                              double tol) {
  double worst = 0.0;
  for (auto& idx : indices) {
    TwoLegVector f = digamma_vector(idx, space, qp, tol);
    TwoLegVector lhs;
    for (auto& [key, w] : f.coeff) {
      double phase =
          sign_pow(key.x.sign, key.x.k) * sign_pow(key.y.sign, key.y.k);
      lhs.add({-key.m2, key.y, -key.m1, key.x}, phase * std::conj(w));
    }
    TwoLegVector rhs =
        digamma_vector({-idx.s, -idx.r, -idx.m, idx.p}, space, qp, tol);
    double phase = sign_pow(idx.p.sign, idx.p.k);
    for (auto& [key, w] : rhs.coeff) rhs.coeff[key] = phase * w;
    worst = std::max(worst,
                     distance(lhs, rhs) / (1.0 + lhs.norm() + rhs.norm()));
  }
  return worst;
}

}  // namespace suq
