#pragma once

#include <utility>
#include <vector>

#include "suq/lattice.hpp"
#include "suq/qseries.hpp"

namespace suq {

// c_q = (sqrt(2) q (q^2;q^2)_inf (-q^2;q^2)_inf)^{-1}
double c_q(const QParam& qp);

struct APoint {
  LatticePoint p, x, y;
};

// Clebsch-Gordan-type coefficient a_p(x, y). Real; zero off the support
// sgn(x y) = sgn(p); labels must lie in I_q.
double a_coeff(const APoint& pt, const QParam& qp, double tol = 1e-16);

// residuals of the three index-permutation relations, each |lhs-rhs|/(1+|lhs|+|rhs|)
struct SymmetryResiduals {
  double py_swap;  // a_p(x,y) vs (-1)^chi(yp) sgn(x)^chi(x) |y/p| a_y(x,p)
  double xy_swap;  // a_p(x,y) vs sgn(p)^chi(p) sgn(x)^chi(x) sgn(y)^chi(y) a_p(y,x)
  double px_swap;  // a_p(x,y) vs (-1)^chi(xp) sgn(y)^chi(y) |x/p| a_x(p,y)
};
SymmetryResiduals symmetry_residuals(const APoint& pt, const QParam& qp,
                                     double tol = 1e-16);

struct GramReport {
  LatticePoint theta;
  LatticeWindow window;
  std::vector<std::vector<double>> gram;
  double max_offdiag = 0.0;
  double max_diag_dev = 0.0;
};

// Gram of the family {x -> a_p(x, theta x)}_p over the window slice of the line;
// the shifted argument theta x may leave the window, only x is truncated
GramReport orthogonality_gram(const LatticePoint& theta, const LatticeWindow& window,
                              const std::vector<LatticePoint>& p_list,
                              const QParam& qp, double tol = 1e-16);

// all p in the window with sgn(p) = sgn(theta) and |chi(p)| <= 4
std::vector<LatticePoint> default_p_list(const LatticePoint& theta,
                                         const LatticeWindow& window);

// Gram of the dual family {p -> a_p(x_i, y_i)} over p in the half-lattice with
// sgn(p) = sgn(theta), truncated to the window; each y_i must equal theta x_i
GramReport dual_gram(const LatticePoint& theta, const LatticeWindow& window,
                     const std::vector<std::pair<LatticePoint, LatticePoint>>& xy_list,
                     const QParam& qp, double tol = 1e-16);

// residuals of the two contiguous recurrences (alpha-type and gamma-type)
struct RecurrenceResiduals {
  double alpha;
  double gamma;
};
RecurrenceResiduals recurrence_residuals(const APoint& pt, const QParam& qp,
                                         double tol = 1e-16);

// pointwise second-order eigenvalue check: the two-phase function built from
// a_p on the line y = sgn(p) q^m x satisfies L f = p^{-2} f; returns the max
// residual over the line's window points and sampled unit phases
double second_order_eigen_residual(int r, int s, int m, const LatticePoint& p,
                                   const LatticeWindow& window, const QParam& qp,
                                   int phase_samples = 4, double tol = 1e-16);

}  // namespace suq
