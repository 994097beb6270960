#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "suq/operators.hpp"

using namespace suq;

namespace {

const QParam kHalf{0.5, false};

TruncatedSpace small_space() { return {3, {-3, 4, 3}}; }
TruncatedSpace run_space() { return {6, {-8, 14, 8}}; }

// exact entrywise distance, no interior filtering
double diff_norm(const SparseOperator& a, const SparseOperator& b) {
  REQUIRE(a.space() == b.space());
  double worst = 0.0;
  for (int j = 0; j < a.space().dim(); ++j) {
    std::map<int, cplx> merged;
    for (auto& [i, w] : a.column(j)) merged[i] += w;
    for (auto& [i, w] : b.column(j)) merged[i] -= w;
    for (auto& [i, w] : merged) worst = std::max(worst, std::abs(w));
  }
  return worst;
}

std::vector<cplx> unit(const TruncatedSpace& s, int m, const LatticePoint& p) {
  std::vector<cplx> v(s.dim(), 0.0);
  int idx = s.index_of(m, p);
  REQUIRE(idx >= 0);
  v[idx] = 1.0;
  return v;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("truncated space indexing round-trips") {
  TruncatedSpace s = small_space();
  CHECK(s.dim() == 7 * (8 + 3));
  for (int idx = 0; idx < s.dim(); ++idx) {
    auto [m, p] = s.label_of(idx);
    CHECK(s.index_of(m, p) == idx);
  }
  CHECK(s.index_of(4, pos(0)) == -1);
  CHECK(s.index_of(0, pos(5)) == -1);
  CHECK(s.index_of(0, neg(4)) == -1);
  CHECK(s.index_of(0, LatticePoint{-1, 0}) == -1);
  CHECK_THROWS_AS(s.label_of(s.dim()), std::out_of_range);
  CHECK_THROWS_AS(validate(TruncatedSpace{-1, {-3, 4, 3}}),
                  std::invalid_argument);
}

TEST_CASE("alpha moves one lattice step and vanishes below -q under adjoint") {
  TruncatedSpace s = small_space();
  auto al = build_generator(Generator::alpha, s, kHalf);
  // alpha: zeta^0 (x) delta_{-q} -> sqrt(-1 + q^{-2}) zeta^0 (x) delta_{-q^2}
  int col = s.index_of(0, neg(1));
  CHECK(std::abs(al.entry(s.index_of(0, neg(2)), col) - std::sqrt(3.0)) <
        1e-15);
  CHECK(al.column(col).size() == 1);
  // the adjoint annihilates delta_{-q}: the would-be image -1 sits outside I_q
  auto ald = adjoint(al);
  CHECK(ald.column(s.index_of(0, neg(1))).empty());
}

TEST_CASE("gamma multiplies by p^{-1} and raises the Fourier mode") {
  TruncatedSpace s = small_space();
  auto ga = build_generator(Generator::gamma, s, kHalf);
  auto out = suq::apply(ga, unit(s, 0, pos(2)));
  CHECK(out[s.index_of(1, pos(2))] == cplx(4.0));
  out[s.index_of(1, pos(2))] = 0.0;
  for (auto& w : out) CHECK(w == cplx(0.0));
  // mode ceiling truncates
  CHECK(ga.column(s.index_of(3, pos(0))).empty());
}

TEST_CASE("e is a self-adjoint sign involution") {
  TruncatedSpace s = small_space();
  auto e = build_generator(Generator::e, s, kHalf);
  CHECK(diff_norm(compose(e, e), SparseOperator::identity(s)) == 0.0);
  CHECK(diff_norm(adjoint(e), e) == 0.0);
  CHECK(e.entry(s.index_of(0, pos(0)), s.index_of(0, pos(0))) == cplx(1.0));
  CHECK(e.entry(s.index_of(0, neg(1)), s.index_of(0, neg(1))) == cplx(-1.0));
}

TEST_CASE("u is a self-adjoint partial isometry squaring to i_{-1}") {
  TruncatedSpace s = small_space();
  auto u = build_generator(Generator::u, s, kHalf);
  CHECK(diff_norm(adjoint(u), u) == 0.0);
  auto minus_one = LatticePoint{-1, 0};
  auto r = build_rho(minus_one, s);
  CHECK(diff_norm(compose(u, u), compose(adjoint(r), r)) == 0.0);
  // sign flip needs k >= 1 to stay in I_q
  CHECK(u.column(s.index_of(0, pos(0))).empty());
  CHECK(u.entry(s.index_of(1, neg(2)), s.index_of(1, pos(2))) == cplx(1.0));
}

TEST_CASE("rho calculus: composition, adjoint, lattice-sign bookkeeping") {
  TruncatedSpace s = small_space();
  const LatticePoint probes[4] = {{1, 1}, {1, -1}, {-1, 0}, {-1, 1}};
  for (auto p : probes) {
    auto rp = build_rho(p, s);
    CHECK(diff_norm(adjoint(rp), build_rho(p.inverse(), s)) == 0.0);
    for (auto t : probes) {
      auto rt = build_rho(t, s);
      auto i_t = compose(adjoint(rt), rt);
      CHECK(diff_norm(compose(rp, rt),
                      compose(build_rho(times(p, t), s), i_t)) == 0.0);
    }
  }
  auto w = build_generator(Generator::w, s, kHalf);
  CHECK(diff_norm(w, build_rho(LatticePoint{1, -1}, s)) == 0.0);
}

TEST_CASE("multiplication operators exchange with rho through translation") {
  TruncatedSpace s = small_space();
  ModeTable f;
  f[{1, pos(2)}] = cplx(2.5, 0.0);
  f[{-2, neg(1)}] = cplx(0.3, -0.7);
  f[{0, pos(-1)}] = cplx(1.1, 0.4);
  const LatticePoint probes[3] = {{1, 1}, {-1, 0}, {-1, 1}};
  for (auto p : probes) {
    auto rp = build_rho(p, s);
    auto lhs = compose(rp, build_mult(f, s));
    auto rhs = compose(build_mult(translate_table(p, f), s), rp);
    CHECK(diff_norm(lhs, rhs) == 0.0);
  }
  ModeTable bad;
  bad[{0, LatticePoint{-1, 0}}] = 1.0;
  CHECK_THROWS_AS(build_mult(bad, s), std::invalid_argument);
}

TEST_CASE("phi units: action, product rule, star rule") {
  TruncatedSpace s = small_space();
  auto ph = build_phi(2, pos(1), neg(2), s);
  // zeta^r (x) delta_x -> [x = t] zeta^{m+r} (x) delta_p
  auto out = suq::apply(ph, unit(s, -1, neg(2)));
  CHECK(out[s.index_of(1, pos(1))] == cplx(1.0));
  CHECK(ph.column(s.index_of(0, pos(0))).empty());

  CHECK(diff_norm(compose(build_phi(1, pos(1), pos(0), s),
                          build_phi(1, pos(0), neg(1), s)),
                  build_phi(2, pos(1), neg(1), s)) == 0.0);
  // mismatched inner labels annihilate
  CHECK(compose(build_phi(1, pos(1), pos(0), s),
                build_phi(1, pos(2), neg(1), s))
            .nnz() == 0);
  CHECK(diff_norm(adjoint(build_phi(2, pos(1), neg(2), s)),
                  build_phi(-2, neg(2), pos(1), s)) == 0.0);
  // Phi(0,p,p) projects onto the mode tower at p
  auto pr = build_phi(0, pos(1), pos(1), s);
  CHECK(diff_norm(compose(pr, pr), pr) == 0.0);
  CHECK_THROWS_AS(build_phi(0, LatticePoint{-1, 0}, pos(0), s),
                  std::invalid_argument);
}

TEST_CASE("distinct phi labels occupy disjoint matrix positions") {
  TruncatedSpace s = small_space();
  struct Label {
    int m;
    LatticePoint p, t;
  };
  const Label labels[5] = {{0, pos(1), pos(1)},
                           {0, pos(1), neg(1)},
                           {1, pos(1), pos(1)},
                           {2, neg(2), pos(0)},
                           {-1, pos(0), pos(0)}};
  std::set<std::pair<int, int>> seen;
  for (auto& l : labels) {
    auto ph = build_phi(l.m, l.p, l.t, s);
    CHECK(ph.nnz() > 0);
    for (int j = 0; j < s.dim(); ++j)
      for (auto& [i, w] : ph.column(j)) {
        CHECK(w == cplx(1.0));
        CHECK(seen.insert({i, j}).second);
      }
  }
}

TEST_CASE("composition plumbing: identity, double adjoint, associativity") {
  TruncatedSpace s = small_space();
  std::mt19937_64 rng(7001);
  std::uniform_real_distribution<double> coin(-1.0, 1.0);
  auto random_op = [&] {
    SparseOperator op(s);
    for (int n = 0; n < 60; ++n) {
      int i = static_cast<int>(rng() % s.dim());
      int j = static_cast<int>(rng() % s.dim());
      op.add_entry(i, j, cplx(coin(rng), coin(rng)));
    }
    return op;
  };
  auto id = SparseOperator::identity(s);
  for (int rep = 0; rep < 5; ++rep) {
    auto a = random_op(), b = random_op(), c = random_op();
    CHECK(diff_norm(compose(id, a), a) == 0.0);
    CHECK(diff_norm(compose(a, id), a) == 0.0);
    CHECK(diff_norm(adjoint(adjoint(a)), a) == 0.0);
    CHECK(diff_norm(compose(compose(a, b), c), compose(a, compose(b, c))) <
          1e-13);
    // apply agrees with compose on a basis vector
    auto v = unit(s, 1, pos(2));
    auto via_ops = suq::apply(compose(a, b), v);
    auto stepwise = suq::apply(a, suq::apply(b, v));
    for (int i = 0; i < s.dim(); ++i)
      CHECK(std::abs(via_ops[i] - stepwise[i]) < 1e-13);
  }
  TruncatedSpace other{2, {-2, 2, 2}};
  CHECK_THROWS_AS(compose(SparseOperator(other), SparseOperator(s)),
                  std::invalid_argument);
  CHECK_THROWS_AS(add(SparseOperator(other), SparseOperator(s)),
                  std::invalid_argument);
  CHECK_THROWS_AS(suq::apply(SparseOperator(s), std::vector<cplx>(3, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("defining relations hold on the interior to machine precision") {
  CHECK(relations_residual(run_space(), kHalf) < 1e-13);
  CHECK(relations_residual({4, {-5, 7, 5}}, QParam{0.3, false}) < 1e-13);
  CHECK(relations_residual({4, {-5, 7, 5}}, QParam{0.8, false}) < 1e-13);
}

TEST_CASE("interior excludes truncation edges but keeps the -q boundary") {
  TruncatedSpace s = run_space();
  auto al = build_generator(Generator::alpha, s, kHalf);
  auto ga = build_generator(Generator::gamma, s, kHalf);
  auto e = build_generator(Generator::e, s, kHalf);
  auto lhs = compose(adjoint(al), al);
  auto rhs = add(e, compose(adjoint(ga), ga));
  // budget-0 sees the broken shift relations at the window edge
  CHECK(interior_residual(lhs, rhs, 0) > 0.1);
  CHECK(interior_residual(lhs, rhs, 2) < 1e-15);
}

}  // TEST_SUITE
