#pragma once

#include <map>
#include <vector>

#include "suq/coefficients.hpp"
#include "suq/operators.hpp"

namespace suq {

// index of the eigenvector family: Fourier offsets r, s, line index m, label p
struct DigammaIndex {
  int r = 0;
  int s = 0;
  int m = 0;
  LatticePoint p;

  friend bool operator==(const DigammaIndex&, const DigammaIndex&) = default;
  friend auto operator<=>(const DigammaIndex&, const DigammaIndex&) = default;
};

// support key on H (x) H: (zeta^{m1} (x) delta_x) (x) (zeta^{m2} (x) delta_y)
struct LegPairKey {
  int m1 = 0;
  LatticePoint x;
  int m2 = 0;
  LatticePoint y;

  friend bool operator==(const LegPairKey&, const LegPairKey&) = default;
  friend auto operator<=>(const LegPairKey&, const LegPairKey&) = default;
};

// finitely supported two-leg vector; lattice legs are confined to a window by
// the producing operations while Fourier modes stay exact unbounded integers
struct TwoLegVector {
  std::map<LegPairKey, cplx> coeff;

  void add(const LegPairKey& key, cplx w);
  cplx at(const LegPairKey& key) const;
  double norm() const;
};

cplx inner(const TwoLegVector& a, const TwoLegVector& b);
double distance(const TwoLegVector& a, const TwoLegVector& b);

// points x in the window whose partner sgn q^m x is also a window point
int line_length(int m, int sign, const LatticeWindow& window);
// short lines produce badly truncated, nearly-zero vectors; they are excluded
// from analysis/synthesis index sets
bool line_admissible(int m, int sign, const LatticeWindow& window,
                     int min_line = 12);

// digamma_{r,s,m,p}: coefficient a_p(x, y) at modes (r + chi(y/p), s - chi(x/p))
// over the window slice of the line y = sgn(p) q^m x
TwoLegVector digamma_vector(const DigammaIndex& idx, const TruncatedSpace& space,
                            const QParam& qp, double tol = 1e-16);

using DigammaTable = std::map<DigammaIndex, cplx>;

// analysis against the eigenvector family: exact finite inner products,
// enumerated over window labels p on admissible lines
DigammaTable v_forward(const TwoLegVector& vec, const TruncatedSpace& space,
                       const QParam& qp, int min_line = 12, double tol = 1e-16);

// synthesis, the adjoint of v_forward over the same admissible index set
TwoLegVector v_inverse(const DigammaTable& table, const TruncatedSpace& space,
                       const QParam& qp, int min_line = 12, double tol = 1e-16);

// operator space for the third leg: line indices range over exponent
// differences across the window, far beyond any two-leg mode truncation
TruncatedSpace delta_op_space(const TruncatedSpace& space);

// Delta(a) vec = V* (1 (x) 1 (x) a) V vec; a acts on (m, p) labels and must
// live on a space expressing every admissible line index (see delta_op_space)
TwoLegVector delta_apply(const SparseOperator& a, const TwoLegVector& vec,
                         const QParam& qp, int min_line = 12,
                         double tol = 1e-16);

// leg-wise algebraic comultiplication of a generator on the finite tensor
// product: Delta0(alpha) = alpha (x) alpha + q (e gamma*) (x) gamma,
// Delta0(gamma) = gamma (x) alpha + (e alpha*) (x) gamma
TwoLegVector delta0_apply(Generator which, const TwoLegVector& vec,
                          const TruncatedSpace& space, const QParam& qp);

// max over samples of the Delta(T) vs Delta0(T) defect, both sides truncated
// to the same window; keys within `budget` of a window edge are excluded,
// where the synthesis stencil is incomplete by construction
double hopf_inclusion_residual(Generator which,
                               const std::vector<TwoLegVector>& samples,
                               const TruncatedSpace& space, const QParam& qp,
                               int budget = 2, int min_line = 12,
                               double tol = 1e-16);

// diagonal action residual on one family vector, measured through the
// leg-wise coproduct so the coefficient algebra cancels exactly and only
// the window tail remains: gamma scales by p^{-1} and shifts m by one,
// alpha scales by sqrt(sgn p + p^{-2}) and moves p to qp, e scales by
// sgn(p); keys within `budget` of a window edge are excluded
double eigen_action_residual(Generator which, const DigammaIndex& idx,
                             const TruncatedSpace& space, const QParam& qp,
                             int budget = 2);

// | ||V vec|| - ||vec|| | over the admissible index set
double parseval_defect(const TwoLegVector& vec, const TruncatedSpace& space,
                       const QParam& qp, int min_line = 12,
                       double tol = 1e-16);

// flip identity: leg swap of (J (x) J) digamma_{r,s,m,p} equals
// sgn(p)^chi(p) digamma_{-s,-r,-m,p}, with J the anti-unitary
// zeta^n (x) delta_x -> sgn(x)^chi(x) zeta^{-n} (x) delta_x
double flip_symmetry_residual(const std::vector<DigammaIndex>& indices,
                              const TruncatedSpace& space, const QParam& qp,
                              double tol = 1e-16);

}  // namespace suq
