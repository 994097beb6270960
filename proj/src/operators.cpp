#include "suq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace suq {

namespace {

double qpow(double q, int k) { return std::pow(q, k); }

}  // namespace

void TruncatedSpace::ensure_points() const {
  if (!pts_.empty()) return;
  pts_ = window.points();
  for (size_t i = 0; i < pts_.size(); ++i) pt_index_[pts_[i]] = static_cast<int>(i);
}

int TruncatedSpace::dim() const {
  ensure_points();
  return (2 * mode_max + 1) * static_cast<int>(pts_.size());
}

const std::vector<LatticePoint>& TruncatedSpace::points() const {
  ensure_points();
  return pts_;
}

bool TruncatedSpace::contains(int m, const LatticePoint& p) const {
  return std::abs(m) <= mode_max && p.in_lattice() && window.contains(p);
}

int TruncatedSpace::index_of(int m, const LatticePoint& p) const {
  if (!contains(m, p)) return -1;
  ensure_points();
  auto it = pt_index_.find(p);
  if (it == pt_index_.end()) return -1;
  return (m + mode_max) * static_cast<int>(pts_.size()) + it->second;
}

std::pair<int, LatticePoint> TruncatedSpace::label_of(int idx) const {
  ensure_points();
  int n = static_cast<int>(pts_.size());
  if (idx < 0 || idx >= dim()) throw std::out_of_range("label_of: index out of range");
  return {idx / n - mode_max, pts_[idx % n]};
}

void validate(const TruncatedSpace& space) {
  if (space.mode_max < 0)
    throw std::invalid_argument("TruncatedSpace: mode_max must be >= 0");
  validate(space.window);
}

SparseOperator::SparseOperator(const TruncatedSpace& space)
    : space_(space), cols_(space.dim()) {}

SparseOperator SparseOperator::identity(const TruncatedSpace& space) {
  SparseOperator id(space);
  for (int j = 0; j < space.dim(); ++j) id.add_entry(j, j, 1.0);
  return id;
}

void SparseOperator::add_entry(int row, int col, cplx w) {
  if (w == cplx(0.0)) return;
  if (row < 0 || col < 0 || row >= space_.dim() || col >= space_.dim())
    throw std::out_of_range("SparseOperator: entry outside space");
  auto& c = cols_[col];
  for (auto& [r, v] : c)
    if (r == row) {
      v += w;
      return;
    }
  c.emplace_back(row, w);
}

const std::vector<std::pair<int, cplx>>& SparseOperator::column(int col) const {
  return cols_.at(col);
}

cplx SparseOperator::entry(int row, int col) const {
  for (auto& [r, v] : cols_.at(col))
    if (r == row) return v;
  return 0.0;
}

int SparseOperator::nnz() const {
  int n = 0;
  for (auto& c : cols_) n += static_cast<int>(c.size());
  return n;
}

SparseOperator build_generator(Generator which, const TruncatedSpace& space,
                               const QParam& qp) {
  validate(space);
  validate(qp);
  const double q = qp.q;
  SparseOperator op(space);
  for (int m = -space.mode_max; m <= space.mode_max; ++m) {
    for (auto p : space.points()) {
      int col = space.index_of(m, p);
      double sp = p.sign;
      switch (which) {
        case Generator::alpha: {
          LatticePoint tgt{p.sign, p.k + 1};
          int row = space.index_of(m, tgt);
          if (row >= 0) op.add_entry(row, col, std::sqrt(sp + qpow(q, -2 * p.k)));
          break;
        }
        case Generator::gamma: {
          int row = space.index_of(m + 1, p);
          if (row >= 0) op.add_entry(row, col, sp * qpow(q, -p.k));
          break;
        }
        case Generator::e:
          op.add_entry(col, col, sp);
          break;
        case Generator::u:
        case Generator::w: {
          LatticePoint shift = which == Generator::u ? LatticePoint{-1, 0}
                                                     : LatticePoint{1, -1};
          LatticePoint tgt = times(shift.inverse(), p);
          if (tgt.in_lattice()) {
            int row = space.index_of(m, tgt);
            if (row >= 0) op.add_entry(row, col, 1.0);
          }
          break;
        }
      }
    }
  }
  return op;
}

SparseOperator build_rho(const LatticePoint& p, const TruncatedSpace& space) {
  validate(space);
  SparseOperator op(space);
  for (int m = -space.mode_max; m <= space.mode_max; ++m) {
    for (auto t : space.points()) {
      LatticePoint tgt = times(p.inverse(), t);
      if (!tgt.in_lattice()) continue;
      int row = space.index_of(m, tgt);
      if (row >= 0) op.add_entry(row, space.index_of(m, t), 1.0);
    }
  }
  return op;
}

SparseOperator build_mult(const ModeTable& f, const TruncatedSpace& space) {
  validate(space);
  SparseOperator op(space);
  for (auto& [key, w] : f) {
    auto& [n, t] = key;
    if (!t.in_lattice()) throw std::invalid_argument("build_mult: point outside I_q");
    if (!space.window.contains(t)) continue;
    for (int r = -space.mode_max; r <= space.mode_max; ++r) {
      int row = space.index_of(r + n, t);
      int col = space.index_of(r, t);
      if (row >= 0 && col >= 0) op.add_entry(row, col, w);
    }
  }
  return op;
}

ModeTable translate_table(const LatticePoint& p, const ModeTable& f) {
  ModeTable out;
  for (auto& [key, w] : f) {
    LatticePoint moved = times(p.inverse(), key.second);
    if (moved.in_lattice()) out[{key.first, moved}] += w;
  }
  return out;
}

SparseOperator build_phi(int m, const LatticePoint& p, const LatticePoint& t,
                         const TruncatedSpace& space) {
  validate(space);
  if (!p.in_lattice() || !t.in_lattice())
    throw std::invalid_argument("build_phi: labels must lie in I_q");
  SparseOperator op(space);
  if (!space.window.contains(p) || !space.window.contains(t)) return op;
  for (int r = -space.mode_max; r <= space.mode_max; ++r) {
    int row = space.index_of(m + r, p);
    int col = space.index_of(r, t);
    if (row >= 0 && col >= 0) op.add_entry(row, col, 1.0);
  }
  return op;
}

SparseOperator compose(const SparseOperator& a, const SparseOperator& b) {
  if (!(a.space() == b.space()))
    throw std::invalid_argument("compose: space mismatch");
  SparseOperator out(a.space());
  for (int j = 0; j < b.space().dim(); ++j)
    for (auto& [k, wb] : b.column(j))
      for (auto& [i, wa] : a.column(k)) out.add_entry(i, j, wa * wb);
  return out;
}

SparseOperator adjoint(const SparseOperator& a) {
  SparseOperator out(a.space());
  for (int j = 0; j < a.space().dim(); ++j)
    for (auto& [i, w] : a.column(j)) out.add_entry(j, i, std::conj(w));
  return out;
}

SparseOperator add(const SparseOperator& a, const SparseOperator& b) {
  if (!(a.space() == b.space())) throw std::invalid_argument("add: space mismatch");
  SparseOperator out(a.space());
  for (int j = 0; j < a.space().dim(); ++j) {
    for (auto& [i, w] : a.column(j)) out.add_entry(i, j, w);
    for (auto& [i, w] : b.column(j)) out.add_entry(i, j, w);
  }
  return out;
}

SparseOperator scale(cplx c, const SparseOperator& a) {
  SparseOperator out(a.space());
  if (c == cplx(0.0)) return out;
  for (int j = 0; j < a.space().dim(); ++j)
    for (auto& [i, w] : a.column(j)) out.add_entry(i, j, c * w);
  return out;
}

std::vector<cplx> apply(const SparseOperator& a, const std::vector<cplx>& v) {
  if (static_cast<int>(v.size()) != a.space().dim())
    throw std::invalid_argument("apply: dimension mismatch");
  std::vector<cplx> out(v.size(), 0.0);
  for (int j = 0; j < a.space().dim(); ++j) {
    if (v[j] == cplx(0.0)) continue;
    for (auto& [i, w] : a.column(j)) out[i] += w * v[j];
  }
  return out;
}

namespace {

bool interior_point(const TruncatedSpace& s, int m, const LatticePoint& p, int budget) {
  if (std::abs(m) > s.mode_max - budget) return false;
  if (p.sign > 0)
    return p.k >= s.window.k_min + budget && p.k <= s.window.k_max - budget;
  // k = 1 is a lattice boundary, not a truncation edge; relations hold across
  // it through genuine zero-extension
  return p.k <= s.window.negative_k_max - budget;
}

}  // namespace

double interior_residual(const SparseOperator& lhs, const SparseOperator& rhs,
                         int budget) {
  if (!(lhs.space() == rhs.space()))
    throw std::invalid_argument("interior_residual: space mismatch");
  const TruncatedSpace& s = lhs.space();
  double worst = 0.0;
  for (int j = 0; j < s.dim(); ++j) {
    auto [m, p] = s.label_of(j);
    if (!interior_point(s, m, p, budget)) continue;
    std::map<int, std::pair<cplx, cplx>> merged;
    for (auto& [i, w] : lhs.column(j)) merged[i].first += w;
    for (auto& [i, w] : rhs.column(j)) merged[i].second += w;
    for (auto& [i, pr] : merged) {
      double d = std::abs(pr.first - pr.second);
      double sc = std::max(std::abs(pr.first), std::abs(pr.second));
      worst = std::max(worst, d / (1.0 + sc));
    }
  }
  return worst;
}

double relations_residual(const TruncatedSpace& space, const QParam& qp) {
  validate(space);
  validate(qp);
  const double q = qp.q;
  auto al = build_generator(Generator::alpha, space, qp);
  auto ga = build_generator(Generator::gamma, space, qp);
  auto e = build_generator(Generator::e, space, qp);
  auto u = build_generator(Generator::u, space, qp);
  auto w = build_generator(Generator::w, space, qp);
  auto ald = adjoint(al);
  auto gad = adjoint(ga);
  auto id = SparseOperator::identity(space);
  const int budget = 2;

  double worst = 0.0;
  auto check = [&](const SparseOperator& l, const SparseOperator& r) {
    worst = std::max(worst, interior_residual(l, r, budget));
  };

  // stated with the large diagonal terms on both sides; moving gamma*gamma
  // across the equals sign would measure a catastrophic cancellation instead
  // of the realization
  check(compose(ald, al), add(e, compose(gad, ga)));
  check(compose(al, ald), add(e, scale(q * q, compose(gad, ga))));
  check(compose(gad, ga), compose(ga, gad));
  check(compose(al, ga), scale(q, compose(ga, al)));
  check(compose(al, gad), scale(q, compose(gad, al)));
  check(adjoint(e), e);
  check(compose(e, e), id);
  check(compose(e, al), compose(al, e));
  check(compose(e, ga), compose(ga, e));
  check(compose(e, w), compose(w, e));
  // u swaps the lattice sign, so e anticommutes with it
  check(compose(e, u), scale(-1.0, compose(u, e)));
  check(compose(adjoint(w), w), id);
  check(adjoint(u), u);

  const LatticePoint probes[4] = {{1, 1}, {1, -1}, {-1, 0}, {-1, 1}};
  for (auto p : probes) {
    auto rp = build_rho(p, space);
    check(adjoint(rp), build_rho(p.inverse(), space));
    for (auto t : probes) {
      auto rt = build_rho(t, space);
      auto it = compose(adjoint(rt), rt);
      check(compose(rp, rt), compose(build_rho(times(p, t), space), it));
    }
  }

  ModeTable f;
  f[{1, pos(2)}] = cplx(2.5, 0.0);
  f[{-2, neg(1)}] = cplx(0.3, -0.7);
  f[{0, pos(-1)}] = cplx(1.1, 0.4);
  for (auto p : probes) {
    auto rp = build_rho(p, space);
    check(compose(rp, build_mult(f, space)),
          compose(build_mult(translate_table(p, f), space), rp));
  }
  return worst;
}

}  // namespace suq
