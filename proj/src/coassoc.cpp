#include "suq/coassoc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "suq/qseries.hpp"

namespace suq {

namespace {

bool k_member(const LatticePoint& theta, const LatticePoint& x,
              const LatticePoint& y) {
  return LatticePoint{theta.sign * x.sign * y.sign, theta.k + x.k + y.k}
      .in_lattice();
}

bool same_window(const LatticeWindow& a, const LatticeWindow& b) {
  return a.k_min == b.k_min && a.k_max == b.k_max &&
         a.negative_k_max == b.negative_k_max;
}

double poch_neg(const LatticePoint& x, const QParam& q2, double tol) {
  // (-x; q^2)_inf
  return poch_inf(x.negated(), q2, tol).value.real();
}

}  // namespace

bool OmegaGrid::in_K(const LatticePoint& theta, const LatticePoint& x,
                     const LatticePoint& y) const {
  return k_member(theta, x, y);
}

double OmegaGrid::omega_weight(const LatticePoint& x, const LatticePoint& z,
                               const LatticePoint& y) const {
  const QParam q2 = qp.squared();
  return x.abs_value(q2) * y.abs_value(q2) * poch_neg(x, q2, 1e-15) *
         poch_neg(y, q2, 1e-15) / poch_neg(z, q2, 1e-15);
}

double OmegaGrid::omega_theta_weight(const LatticePoint& theta,
                                     const LatticePoint& x,
                                     const LatticePoint& y) const {
  const QParam q2 = qp.squared();
  return x.abs_value(q2) * y.abs_value(q2) * h(theta, x, y);
}

double OmegaGrid::h(const LatticePoint& theta, const LatticePoint& x,
                    const LatticePoint& y) const {
  const QParam q2 = qp.squared();
  const LatticePoint txy{theta.sign * x.sign * y.sign, theta.k + x.k + y.k};
  return poch_neg(x, q2, 1e-15) * poch_neg(y, q2, 1e-15) /
         poch_neg(txy, q2, 1e-15);
}

double OmegaGrid::h_prime(const LatticePoint& theta, const LatticePoint& x,
                          const LatticePoint& y) const {
  const QParam q2 = qp.squared();
  const LatticePoint txy{theta.sign * x.sign * y.sign,
                         1 + theta.k + x.k + y.k};
  return poch_neg(x, q2, 1e-15) * poch_neg(y, q2, 1e-15) /
         poch_neg(txy, q2, 1e-15);
}

int window_slot(const LatticeWindow& window, const LatticePoint& x) {
  if (!window.contains(x)) return -1;
  if (x.sign < 0) return x.k - 1;
  return window.negative_k_max + (window.k_max - x.k);
}

GridFunction GridFunction::zeros(const LatticePoint& theta,
                                 const LatticeWindow& window) {
  validate(window);
  GridFunction f;
  f.theta = theta;
  f.window = window;
  f.values.assign(static_cast<size_t>(window.size()) * window.size(), 0.0);
  return f;
}

double GridFunction::at(const LatticePoint& x, const LatticePoint& y) const {
  const int i = window_slot(window, x);
  const int j = window_slot(window, y);
  if (i < 0 || j < 0) return 0.0;
  return values[static_cast<size_t>(i) * window.size() + j];
}

void GridFunction::set(const LatticePoint& x, const LatticePoint& y, double v) {
  const int i = window_slot(window, x);
  const int j = window_slot(window, y);
  if (i < 0 || j < 0)
    throw std::invalid_argument("GridFunction::set: point outside the window");
  values[static_cast<size_t>(i) * window.size() + j] = v;
}

double omega_inner(const GridFunction& f, const GridFunction& g,
                   const OmegaGrid& grid) {
  if (!(f.theta == g.theta))
    throw std::invalid_argument("omega_inner: sector mismatch");
  if (!same_window(f.window, grid.window) || !same_window(g.window, grid.window))
    throw std::invalid_argument("omega_inner: window mismatch");
  const QParam q2 = grid.qp.squared();
  const auto pts = grid.window.points();
  // per-axis factors; the denominator only depends on the product point
  std::vector<double> ax(pts.size());
  for (size_t i = 0; i < pts.size(); ++i)
    ax[i] = pts[i].abs_value(q2) * poch_neg(pts[i], q2, 1e-15);
  std::map<LatticePoint, double> den;
  double s = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = 0; j < pts.size(); ++j) {
      if (!k_member(f.theta, pts[i], pts[j])) continue;
      const double fv = f.at(pts[i], pts[j]);
      const double gv = g.at(pts[i], pts[j]);
      if (fv == 0.0 || gv == 0.0) continue;
      const LatticePoint txy{f.theta.sign * pts[i].sign * pts[j].sign,
                             f.theta.k + pts[i].k + pts[j].k};
      auto it = den.find(txy);
      if (it == den.end())
        it = den.emplace(txy, poch_neg(txy, q2, 1e-15)).first;
      s += fv * gv * ax[i] * ax[j] / it->second;
    }
  }
  return s;
}

LatticePoint fg_theta(const FGIndex& idx) { return {idx.p.sign, idx.k}; }

namespace {

// Psi with arguments given as signed powers of the squared base; the argument
// symmetry Psi(a; b; z) = Psi(a z / b; z; b) routes the larger of |b|, |z|
// into the b slot, whose tail products absorb large entries stably
double psi_slots(int sa, long long ea, int sb, long long eb, int sz,
                 long long ez, const QParam& q2, double tol) {
  if (ez < 0 && ez < eb)
    return psi_slots(sa * sz * sb, ea + ez - eb, sz, ez, sb, eb, q2, tol);
  const double Q = q2.base();
  const auto val = [&](int s, long long e) {
    return cplx(s * std::pow(Q, static_cast<double>(e)));
  };
  return psi({val(sa, ea), val(sb, eb), val(sz, ez), q2}, tol).value.real();
}

}  // namespace

double fg_eval(const FGIndex& idx, const LatticePoint& x, const LatticePoint& y,
               const QParam& qp, double tol) {
  validate(qp);
  if (!idx.p.in_lattice())
    throw std::invalid_argument("fg_eval: p outside I_{q^2}");
  if (!x.in_lattice() || !y.in_lattice())
    throw std::invalid_argument("fg_eval: point off the lattice");
  if (idx.kind == FGKind::G)
    return fg_eval({FGKind::F, idx.k, -idx.m, idx.p}, y, x, qp, tol);
  const LatticePoint theta = fg_theta(idx);
  if (!k_member(theta, x, y))
    throw std::invalid_argument("fg_eval: (x, y) outside K(theta)");
  const int m = idx.m, k = idx.k;
  const int sp = idx.p.sign, kp = idx.p.k;
  // support: sgn(p) q^{-2m} y on the lattice
  if (!LatticePoint{sp * y.sign, y.k - m}.in_lattice()) return 0.0;

  const QParam q2 = qp.squared();
  const double q = qp.q;
  const double cq = c_q(qp);
  const long long tri = static_cast<long long>(m + k + 1) * (m + k + 2) / 2;
  const int cn = kp + m;  // chi of kappa^{-1}(p) q^m in the plain base
  const long long nu_e = static_cast<long long>(cn - 1) * (cn - 2) / 2;
  const double pref =
      cq * cq * std::pow(q, static_cast<double>(tri)) *
      std::pow(q, static_cast<double>(nu_e)) *
      std::sqrt(poch_neg(idx.p, q2, tol));
  const double psi1 = psi_slots(-sp, 1 - kp, y.sign, 1 - m + y.k - kp, sp,
                                1 - m, q2, tol);
  const double psi2 = psi_slots(-x.sign, 1 - x.k, sp * y.sign, 1 + k + y.k,
                                x.sign, 1 + m + k + x.k, q2, tol);
  return pref * psi1 * psi2;
}

GridFunction fg_function(const FGIndex& idx, const OmegaGrid& grid,
                         double tol) {
  const LatticePoint theta = fg_theta(idx);
  GridFunction f = GridFunction::zeros(theta, grid.window);
  for (auto x : grid.window.points())
    for (auto y : grid.window.points()) {
      if (!k_member(theta, x, y)) continue;
      f.set(x, y, fg_eval(idx, x, y, grid.qp, tol));
    }
  return f;
}

GridFunction gamma_tilde_apply(GammaKind kind, const LatticePoint& theta,
                               const GridFunction& f, const QParam& qp) {
  validate(qp);
  if (!(f.theta == theta))
    throw std::invalid_argument("gamma_tilde_apply: sector mismatch");
  const QParam q2 = qp.squared();
  const double scale = std::pow(qp.q, static_cast<double>(1 - theta.k));
  GridFunction out = GridFunction::zeros(theta, f.window);
  for (auto x : f.window.points()) {
    for (auto y : f.window.points()) {
      if (!k_member(theta, x, y)) continue;
      const double txy = theta.sign * x.sign * y.sign *
                         std::pow(q2.base(),
                                  static_cast<double>(theta.k + x.k + y.k));
      double acc;
      if (kind == GammaKind::left) {
        const LatticePoint xu{x.sign, x.k + 1};  // q^2 x
        const LatticePoint yd{y.sign, y.k - 1};  // q^{-2} y
        const double cy = 1.0 + yd.value(q2);
        acc = cy * f.at(xu, yd) - cy * f.at(x, yd) - (1.0 + txy) * f.at(xu, y) +
              f.at(x, y);
      } else {
        const LatticePoint xd{x.sign, x.k - 1};  // q^{-2} x
        const LatticePoint yu{y.sign, y.k + 1};  // q^2 y
        const double cx = 1.0 + xd.value(q2);
        acc = cx * f.at(xd, yu) - (1.0 + txy) * f.at(x, yu) -
              cx * f.at(xd, y) + f.at(x, y);
      }
      out.set(x, y, scale / (x.value(q2) * y.value(q2)) * acc);
    }
  }
  return out;
}

double adjointness_residual(const GridFunction& f, const GridFunction& g,
                            const OmegaGrid& grid) {
  const GridFunction lf = gamma_tilde_apply(GammaKind::left, f.theta, f, grid.qp);
  const GridFunction rg =
      gamma_tilde_apply(GammaKind::right_star, g.theta, g, grid.qp);
  return std::abs(omega_inner(lf, g, grid) - omega_inner(f, rg, grid));
}

GramReport fg_gram(const LatticePoint& theta, const LatticeWindow& window,
                   const std::vector<FGIndex>& indices, const QParam& qp,
                   double tol) {
  validate(qp);
  validate(window);
  for (auto& idx : indices)
    if (!(fg_theta(idx) == theta))
      throw std::invalid_argument("fg_gram: index off the sector");
  const OmegaGrid grid{window, qp};
  std::vector<GridFunction> fs;
  fs.reserve(indices.size());
  for (auto& idx : indices) fs.push_back(fg_function(idx, grid, tol));
  GramReport rep;
  rep.theta = theta;
  rep.window = window;
  const size_t n = indices.size();
  rep.gram.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      rep.gram[i][j] = omega_inner(fs[i], fs[j], grid);
      if (i == j)
        rep.max_diag_dev =
            std::max(rep.max_diag_dev, std::abs(rep.gram[i][j] - 1.0));
      else
        rep.max_offdiag = std::max(rep.max_offdiag, std::abs(rep.gram[i][j]));
    }
  return rep;
}

void ThreeLegVector::add(const TripleKey& key, cplx w) {
  if (w == cplx(0.0)) return;
  coeff[key] += w;
}

cplx ThreeLegVector::at(const TripleKey& key) const {
  auto it = coeff.find(key);
  return it == coeff.end() ? cplx(0.0) : it->second;
}

double ThreeLegVector::norm() const {
  double s = 0.0;
  for (auto& [k, w] : coeff) s += std::norm(w);
  return std::sqrt(s);
}

double distance(const ThreeLegVector& a, const ThreeLegVector& b) {
  double s = 0.0;
  for (auto& [k, w] : a.coeff) s += std::norm(w - b.at(k));
  for (auto& [k, w] : b.coeff)
    if (a.coeff.find(k) == a.coeff.end()) s += std::norm(w);
  return std::sqrt(s);
}

namespace {

// pipeline stage keys: one analysis pair plus a spectator leg, then two
// analysis pairs around the synthesized H leg
struct MixKey {
  int r = 0, s = 0;
  int ma = 0;
  LatticePoint pa;
  int mb = 0;
  LatticePoint xb;

  friend auto operator<=>(const MixKey&, const MixKey&) = default;
};

struct Mix2Key {
  int r1 = 0, s1 = 0, r2 = 0, s2 = 0;
  int m = 0;
  LatticePoint p;

  friend auto operator<=>(const Mix2Key&, const Mix2Key&) = default;
};

using MixMap = std::map<MixKey, cplx>;
using Mix2Map = std::map<Mix2Key, cplx>;

// a_p(x, sgn(p) q^m x) memo; the stages revisit the same line data many times
struct ACache {
  const QParam* qp;
  double tol;
  std::map<std::array<int, 5>, double> memo;

  double get(const LatticePoint& p, const LatticePoint& x, int m) {
    const std::array<int, 5> key{m, p.sign, p.k, x.sign, x.k};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const LatticePoint y = times({p.sign, m}, x);
    const double a = a_coeff({p, x, y}, *qp, tol);
    memo.emplace(key, a);
    return a;
  }
};

// one-pair analysis, the same index arithmetic as the two-leg transform
template <class Emit>
void analyze_pair(int mA, const LatticePoint& xA, int mB,
                  const LatticePoint& xB, cplx w, const LatticeWindow& win,
                  int min_line, ACache& cache, Emit&& emit) {
  if (w == cplx(0.0)) return;
  if (!win.contains(xA) || !win.contains(xB)) return;
  const int sign_p = xA.sign * xB.sign;
  const int m = chi(xB) - chi(xA);
  if (!line_admissible(m, sign_p, win, min_line)) return;
  for (auto p : win.points()) {
    if (p.sign != sign_p) continue;
    const double a = cache.get(p, xA, m);
    if (a == 0.0) continue;
    emit(mA - chi(xB) + chi(p), mB + chi(xA) - chi(p), m, p, w * a);
  }
}

// one-index synthesis, the same index arithmetic as the two-leg transform
template <class Emit>
void synth_pair(int r, int s, int m, const LatticePoint& p, cplx w,
                const LatticeWindow& win, int min_line, ACache& cache,
                Emit&& emit) {
  if (w == cplx(0.0)) return;
  if (!win.contains(p)) return;
  if (!line_admissible(m, p.sign, win, min_line)) return;
  const LatticePoint theta{p.sign, m};
  for (auto x : win.points()) {
    const LatticePoint y = times(theta, x);
    if (!y.in_lattice() || !win.contains(y)) continue;
    const double a = cache.get(p, x, m);
    if (a == 0.0) continue;
    emit(r + chi(y) - chi(p), x, s - chi(x) + chi(p), y, w * a);
  }
}

// dust below this relative cut cannot move the pipeline outputs at the
// tolerances the checks run at, but it dominates the stage sizes
constexpr double kDropRel = 1e-14;

template <class Map>
void drop_dust(Map& m) {
  double mx = 0.0;
  for (auto& [k, w] : m) mx = std::max(mx, std::abs(w));
  if (mx == 0.0) return;
  const double cut = kDropRel * mx;
  std::erase_if(m, [&](const auto& kv) { return std::abs(kv.second) <= cut; });
}

Mix2Map analyze_half(IteratedSide side, const ThreeLegVector& v,
                     const LatticeWindow& win, int min_line, ACache& cache) {
  MixMap s1;
  if (side == IteratedSide::left) {
    // analyze legs (1, 2); leg 3 spectates
    for (auto& [key, w] : v.coeff)
      analyze_pair(key.m1, key.x1, key.m2, key.x2, w, win, min_line, cache,
                   [&](int r, int s, int m, const LatticePoint& p, cplx c) {
                     s1[{r, s, m, p, key.m3, key.x3}] += c;
                   });
  } else {
    // analyze legs (2, 3); leg 1 spectates
    for (auto& [key, w] : v.coeff)
      analyze_pair(key.m2, key.x2, key.m3, key.x3, w, win, min_line, cache,
                   [&](int r, int s, int m, const LatticePoint& p, cplx c) {
                     s1[{r, s, m, p, key.m1, key.x1}] += c;
                   });
  }
  drop_dust(s1);
  Mix2Map s2;
  if (side == IteratedSide::left) {
    // analyze (H leg, leg 3); the first pair moves to the front
    for (auto& [k1, c1] : s1)
      analyze_pair(k1.ma, k1.pa, k1.mb, k1.xb, c1, win, min_line, cache,
                   [&](int r, int s, int m, const LatticePoint& p, cplx c) {
                     s2[{k1.r, k1.s, r, s, m, p}] += c;
                   });
  } else {
    // analyze (leg 1, H leg); the new pair lands in front, the first pair in
    // the middle
    for (auto& [k1, c1] : s1)
      analyze_pair(k1.mb, k1.xb, k1.ma, k1.pa, c1, win, min_line, cache,
                   [&](int r, int s, int m, const LatticePoint& p, cplx c) {
                     s2[{r, s, k1.r, k1.s, m, p}] += c;
                   });
  }
  drop_dust(s2);
  return s2;
}

ThreeLegVector synth_half(IteratedSide side, const Mix2Map& table,
                          const LatticeWindow& win, int min_line,
                          ACache& cache) {
  MixMap s4;
  if (side == IteratedSide::left) {
    // invert the inner analysis: (r2, s2, m, p) -> (H leg, leg 3)
    for (auto& [k3, c3] : table)
      synth_pair(k3.r2, k3.s2, k3.m, k3.p, c3, win, min_line, cache,
                 [&](int mA, const LatticePoint& xA, int mB,
                     const LatticePoint& xB, cplx c) {
                   s4[{k3.r1, k3.s1, mA, xA, mB, xB}] += c;
                 });
  } else {
    // invert the front analysis: (r1, s1, m, p) -> (leg 1, H leg)
    for (auto& [k3, c3] : table)
      synth_pair(k3.r1, k3.s1, k3.m, k3.p, c3, win, min_line, cache,
                 [&](int mA, const LatticePoint& xA, int mB,
                     const LatticePoint& xB, cplx c) {
                   s4[{k3.r2, k3.s2, mB, xB, mA, xA}] += c;
                 });
  }
  drop_dust(s4);
  ThreeLegVector out;
  if (side == IteratedSide::left) {
    for (auto& [k4, c4] : s4)
      synth_pair(k4.r, k4.s, k4.ma, k4.pa, c4, win, min_line, cache,
                 [&](int m1, const LatticePoint& x1, int m2,
                     const LatticePoint& x2, cplx c) {
                   out.add({m1, x1, m2, x2, k4.mb, k4.xb}, c);
                 });
  } else {
    for (auto& [k4, c4] : s4)
      synth_pair(k4.r, k4.s, k4.ma, k4.pa, c4, win, min_line, cache,
                 [&](int m2, const LatticePoint& x2, int m3,
                     const LatticePoint& x3, cplx c) {
                   out.add({k4.mb, k4.xb, m2, x2, m3, x3}, c);
                 });
  }
  return out;
}

Mix2Map act(const SparseOperator& op, const Mix2Map& in) {
  Mix2Map out;
  for (auto& [k, c] : in) {
    const int col = op.space().index_of(k.m, k.p);
    if (col < 0)
      throw std::invalid_argument(
          "iterated_delta_apply: operator space cannot express a line index");
    for (auto& [row, w] : op.column(col)) {
      auto [m2, p2] = op.space().label_of(row);
      out[{k.r1, k.s1, k.r2, k.s2, m2, p2}] += w * c;
    }
  }
  return out;
}

ThreeLegVector sign_action(const ThreeLegVector& v) {
  ThreeLegVector out;
  for (auto& [key, w] : v.coeff) {
    const int s = key.x1.sign * key.x2.sign * key.x3.sign;
    out.add(key, static_cast<double>(s) * w);
  }
  return out;
}

}  // namespace

ThreeLegVector triple_family_vector(IteratedSide side, int r, int s, int t,
                                    int n, int m, const LatticePoint& p,
                                    const TruncatedSpace& space,
                                    const QParam& qp, int min_line,
                                    double tol) {
  validate(qp);
  validate(space.window);
  if (!p.in_lattice())
    throw std::invalid_argument("triple_family_vector: p outside I_q");
  ACache cache{&qp, tol, {}};
  Mix2Map seed;
  seed[{r, s, t, n, m, p}] = 1.0;
  return synth_half(side, seed, space.window, min_line, cache);
}

ThreeLegVector iterated_delta_apply(IteratedSide side, const SparseOperator& op,
                                    const ThreeLegVector& v, const QParam& qp,
                                    int min_line, double tol) {
  validate(qp);
  const LatticeWindow& win = op.space().window;
  ACache cache{&qp, tol, {}};
  Mix2Map analysis = analyze_half(side, v, win, min_line, cache);
  Mix2Map moved = act(op, analysis);
  drop_dust(moved);
  return synth_half(side, moved, win, min_line, cache);
}

double coassoc_residual(Generator which,
                        const std::vector<ThreeLegVector>& samples,
                        const TruncatedSpace& space, const QParam& qp,
                        int min_line, double tol) {
  validate(qp);
  validate(space.window);
  double worst = 0.0;
  if (which == Generator::e) {
    // Delta(e) = e (x) e, so both iterated pipelines reduce to the legwise
    // sign action
    for (auto& v : samples) {
      const ThreeLegVector lhs = sign_action(v);
      const ThreeLegVector rhs = sign_action(v);
      worst = std::max(worst, distance(lhs, rhs));
    }
    return worst;
  }
  const SparseOperator op = build_generator(which, delta_op_space(space), qp);
  for (auto& v : samples) {
    const ThreeLegVector lhs =
        iterated_delta_apply(IteratedSide::left, op, v, qp, min_line, tol);
    const ThreeLegVector rhs =
        iterated_delta_apply(IteratedSide::right, op, v, qp, min_line, tol);
    worst = std::max(worst, distance(lhs, rhs));
  }
  return worst;
}

RacahReport racah_matrix(const LatticePoint& theta, const LatticeWindow& window,
                         const std::vector<FGIndex>& f_rows,
                         const std::vector<FGIndex>& g_cols, const QParam& qp,
                         double tol) {
  validate(qp);
  validate(window);
  for (auto& idx : f_rows)
    if (idx.kind != FGKind::F || !(fg_theta(idx) == theta))
      throw std::invalid_argument("racah_matrix: row index off the sector");
  for (auto& idx : g_cols)
    if (idx.kind != FGKind::G || !(fg_theta(idx) == theta))
      throw std::invalid_argument("racah_matrix: column index off the sector");
  const OmegaGrid grid{window, qp};
  std::vector<GridFunction> fs, gs;
  fs.reserve(f_rows.size());
  gs.reserve(g_cols.size());
  for (auto& idx : f_rows) fs.push_back(fg_function(idx, grid, tol));
  for (auto& idx : g_cols) gs.push_back(fg_function(idx, grid, tol));
  RacahReport rep;
  rep.rows = f_rows;
  rep.cols = g_cols;
  rep.matrix.assign(f_rows.size(), std::vector<double>(g_cols.size(), 0.0));
  for (size_t i = 0; i < f_rows.size(); ++i)
    for (size_t j = 0; j < g_cols.size(); ++j) {
      rep.matrix[i][j] = omega_inner(fs[i], gs[j], grid);
      if (!(f_rows[i].p == g_cols[j].p))
        rep.max_p_offdiag =
            std::max(rep.max_p_offdiag, std::abs(rep.matrix[i][j]));
    }
  for (size_t i = 0; i < f_rows.size(); ++i) {
    for (size_t i2 = 0; i2 < f_rows.size(); ++i2) {
      double dot = 0.0;
      for (size_t j = 0; j < g_cols.size(); ++j)
        dot += rep.matrix[i][j] * rep.matrix[i2][j];
      const double dev = std::abs(dot - (i == i2 ? 1.0 : 0.0));
      rep.max_orth_dev = std::max(rep.max_orth_dev, dev);
      if (i == i2)
        rep.max_row_norm_dev =
            std::max(rep.max_row_norm_dev, std::abs(std::sqrt(dot) - 1.0));
    }
  }
  return rep;
}

}  // namespace suq
