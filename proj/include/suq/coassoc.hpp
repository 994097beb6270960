#pragma once

#include <map>
#include <vector>

#include "suq/comult.hpp"

namespace suq {

// Measure model on the base-q^2 grid. Omega weights triples (x, z, y) in
// I_{q^2}^3; its sector reduction Omega_theta weights pairs on
// K(theta) = {(x, y) : theta x y in I_{q^2}} for theta in +-q^{2Z}. The section
// L(theta) = {(x, theta x y, y) : (x, y) in K(theta)} identifies the two
// pictures, and the sector weights are positive and finite on any window.
struct OmegaGrid {
  LatticeWindow window;  // base-q^2 exponents
  QParam qp;             // plain-q parameter; all products run in base q^2

  bool in_K(const LatticePoint& theta, const LatticePoint& x,
            const LatticePoint& y) const;
  // |x||y| (-x, -y; q^2)_inf / (-z; q^2)_inf
  double omega_weight(const LatticePoint& x, const LatticePoint& z,
                      const LatticePoint& y) const;
  // the pair weight |x||y| h(x, y) on K(theta)
  double omega_theta_weight(const LatticePoint& theta, const LatticePoint& x,
                            const LatticePoint& y) const;
  // h(x, y) = (-x, -y; q^2)_inf / (-theta x y; q^2)_inf
  double h(const LatticePoint& theta, const LatticePoint& x,
           const LatticePoint& y) const;
  // h'(x, y) = (-x, -y; q^2)_inf / (-q^2 theta x y; q^2)_inf, defined where
  // q^2 theta x y stays on the lattice
  double h_prime(const LatticePoint& theta, const LatticePoint& x,
                 const LatticePoint& y) const;
};

// dense slot of a window point, matching LatticeWindow::points() order;
// -1 when the point falls outside the window
int window_slot(const LatticeWindow& window, const LatticePoint& x);

// real function on the window square, zero-extended off the window; values
// off K(theta) are kept at zero by the producing operations
struct GridFunction {
  LatticePoint theta;
  LatticeWindow window;
  std::vector<double> values;

  static GridFunction zeros(const LatticePoint& theta,
                            const LatticeWindow& window);
  double at(const LatticePoint& x, const LatticePoint& y) const;
  void set(const LatticePoint& x, const LatticePoint& y, double v);
};

// <f, g> against Omega_theta over K(theta) cut to the grid window
double omega_inner(const GridFunction& f, const GridFunction& g,
                   const OmegaGrid& grid);

enum class FGKind { F, G };

// basis label on the sector theta = sgn(p) q^{2k}; p is a base-q^2 point
struct FGIndex {
  FGKind kind = FGKind::F;
  int k = 0;
  int m = 0;
  LatticePoint p;

  friend bool operator==(const FGIndex&, const FGIndex&) = default;
};

LatticePoint fg_theta(const FGIndex& idx);

// F^k_{m,p}(x, y) = c_q^2 q^{(m+k+1)(m+k+2)/2} nu(kappa^{-1}(p) q^m)
//   sqrt((-p; q^2)_inf) Psi(-q^2/p; q^{2(1-m)} y / |p|; sgn(p) q^{2(1-m)})
//   Psi(-q^2/x; sgn(p) q^{2(1+k)} y; q^{2(1+m+k)} x)
// when sgn(p) q^{-2m} y lies in I_{q^2}, zero otherwise;
// G^k_{m,p}(x, y) = F^k_{-m,p}(y, x). Requires (x, y) in K(sgn(p) q^{2k}).
double fg_eval(const FGIndex& idx, const LatticePoint& x, const LatticePoint& y,
               const QParam& qp, double tol = 1e-16);

GridFunction fg_function(const FGIndex& idx, const OmegaGrid& grid,
                         double tol = 1e-16);

enum class GammaKind { left, right_star };

// left: (gamma_l^theta f)(x, y) = q |theta|^{-1/2} (xy)^{-1} [
//   (1 + q^{-2}y) f(q^2 x, q^{-2}y) - (1 + q^{-2}y) f(x, q^{-2}y)
//   - (1 + theta x y) f(q^2 x, y) + f(x, y) ];
// right_star realizes (gamma_r^theta)^*, the same stencil with the two
// coordinates interchanged. Off-window neighbours read as zero.
GridFunction gamma_tilde_apply(GammaKind kind, const LatticePoint& theta,
                               const GridFunction& f, const QParam& qp);

// <gamma_l f, g> - <f, (gamma_r)^* g> against Omega_theta; vanishes up to
// roundoff for f, g supported away from the window edges, where the
// summation by parts telescopes inside the window
double adjointness_residual(const GridFunction& f, const GridFunction& g,
                            const OmegaGrid& grid);

// Gram of {fg_function(idx)} against Omega_theta; every index must live on
// the given sector
GramReport fg_gram(const LatticePoint& theta, const LatticeWindow& window,
                   const std::vector<FGIndex>& indices, const QParam& qp,
                   double tol = 1e-16);

// support key on H (x) H (x) H
struct TripleKey {
  int m1 = 0;
  LatticePoint x1;
  int m2 = 0;
  LatticePoint x2;
  int m3 = 0;
  LatticePoint x3;

  friend bool operator==(const TripleKey&, const TripleKey&) = default;
  friend auto operator<=>(const TripleKey&, const TripleKey&) = default;
};

struct ThreeLegVector {
  std::map<TripleKey, cplx> coeff;

  void add(const TripleKey& key, cplx w);
  cplx at(const TripleKey& key) const;
  double norm() const;
};

double distance(const ThreeLegVector& a, const ThreeLegVector& b);

// left: (Delta (x) iota)Delta through (V* (x) 1)(1 (x) V*);
// right: (iota (x) Delta)Delta through (1 (x) V*) V13*
enum class IteratedSide { left, right };

// joint eigenvector of the iterated comultiplication on the chosen side:
// the synthesis of zeta^r (x) zeta^s (x) zeta^t (x) zeta^n (x) digamma_{m,p}
ThreeLegVector triple_family_vector(IteratedSide side, int r, int s, int t,
                                    int n, int m, const LatticePoint& p,
                                    const TruncatedSpace& space,
                                    const QParam& qp, int min_line = 12,
                                    double tol = 1e-16);

// iterated comultiplication of the operator applied to v: analysis on two
// leg pairs, operator action on the synthesized H leg, synthesis back; the
// operator must live on a space expressing every admissible line index
ThreeLegVector iterated_delta_apply(IteratedSide side, const SparseOperator& op,
                                    const ThreeLegVector& v, const QParam& qp,
                                    int min_line = 12, double tol = 1e-16);

// worst distance over the samples between the two iterated pipelines for the
// generator; e acts legwise as the sign operator on both sides and is exact
double coassoc_residual(Generator which,
                        const std::vector<ThreeLegVector>& samples,
                        const TruncatedSpace& space, const QParam& qp,
                        int min_line = 12, double tol = 1e-16);

// overlap matrix R[i][j] = <F_i, G_j> against Omega_theta together with its
// orthogonality defects; the p-off-diagonal magnitude is reported, not
// asserted, since p-diagonality of the change of basis is open
struct RacahReport {
  std::vector<FGIndex> rows;
  std::vector<FGIndex> cols;
  std::vector<std::vector<double>> matrix;
  double max_row_norm_dev = 0.0;
  double max_orth_dev = 0.0;
  double max_p_offdiag = 0.0;
};

RacahReport racah_matrix(const LatticePoint& theta, const LatticeWindow& window,
                         const std::vector<FGIndex>& f_rows,
                         const std::vector<FGIndex>& g_cols, const QParam& qp,
                         double tol = 1e-16);

}  // namespace suq
