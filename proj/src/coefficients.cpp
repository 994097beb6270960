#include "suq/coefficients.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace suq {

namespace {

int parity(int k) { return (k % 2) ? -1 : 1; }

// s^k for s = +-1, k any integer
int sign_pow(int s, int k) { return s > 0 ? 1 : parity(k); }

double qpow(double q, int e) { return std::pow(q, static_cast<double>(e)); }

// (-kappa(t); q^2)_inf as a positive real, t in I_q
double kappa_poch(const LatticePoint& t, const QParam& q2, double tol) {
  cplx arg = -static_cast<double>(t.sign) * qpow(q2.base(), t.k);
  return poch_inf(arg, q2, tol).value.real();
}

// log2 of the same, stable at any depth: for exponent -n the divergent part
// peels off as an exact power, (-Q^{-n};Q)_inf = Q^{-n(n+1)/2} (-Q;Q)_n (-1;Q)_inf
double log2_kappa_poch(const LatticePoint& t, const QParam& q2, double tol) {
  if (t.sign < 0 || t.k >= 0) return std::log2(kappa_poch(t, q2, tol));
  const double Q = q2.base();
  const long n = -t.k;
  double lg = -0.5 * static_cast<double>(n) * static_cast<double>(n + 1) * std::log2(Q);
  for (long i = 1; i <= n; ++i) lg += std::log2(1.0 + std::pow(Q, static_cast<double>(i)));
  return lg + 1.0 + std::log2(poch_inf(cplx(-Q), q2, tol).value.real());
}

}  // namespace

double c_q(const QParam& qp) {
  validate(qp);
  const QParam q2 = qp.squared();
  const double Q = q2.base();
  double d = std::sqrt(2.0) * qp.q * poch_inf(cplx(Q), q2).value.real() *
             poch_inf(cplx(-Q), q2).value.real();
  return 1.0 / d;
}

namespace {

// literal closed formula; numerically safe only when the series slots are tame
double a_core(const LatticePoint& p, const LatticePoint& x, const LatticePoint& y,
              const QParam& qp, double tol) {
  const double q = qp.q;
  const QParam q2 = qp.squared();
  const double Q = q2.base();

  cplx a = -static_cast<double>(y.sign) * qpow(Q, 1 - y.k);
  cplx b = static_cast<double>(x.sign * y.sign) * qpow(Q, 1 + x.k - y.k);
  cplx z = static_cast<double>(x.sign * p.sign) * qpow(Q, 1 + x.k - p.k);
  double series = psi({a, b, z, q2}, tol).value.real();

  const long nu_chi = static_cast<long>(p.k) + y.k - x.k;
  const long pow_e = static_cast<long>(y.k) + (nu_chi - 1) * (nu_chi - 2) / 2;
  if (p.k > -16 && x.k > -16 && y.k > -16 && std::labs(pow_e) <= 500) {
    double pref = c_q(qp) * s_sign(x, y) * parity(p.k) * sign_pow(-y.sign, x.k) *
                  qpow(q, y.k) * nu(times(p, times(y, x.inverse())), qp);
    double rad = std::sqrt(kappa_poch(p, q2, tol) * kappa_poch(y, q2, tol) /
                           kappa_poch(x, q2, tol));
    return pref * rad * series;
  }
  // deep labels: the q-power and Pochhammer magnitudes overflow long before
  // the value does, so assemble the exponent in log2 space
  const double sign_pref =
      s_sign(x, y) * parity(p.k) * sign_pow(-y.sign, x.k);
  const double lg =
      static_cast<double>(pow_e) * std::log2(q) +
      0.5 * (log2_kappa_poch(p, q2, tol) + log2_kappa_poch(y, q2, tol) -
             log2_kappa_poch(x, q2, tol));
  return sign_pref * c_q(qp) * series * std::exp2(lg);
}

// predicted cancellation severity of the literal formula at labels (P, X, Y):
// negative slot exponents feed a theta-type cancellation whose lost digits grow
// quadratically
long hazard_score(const LatticePoint& P, const LatticePoint& X,
                  const LatticePoint& Y) {
  auto msq = [](int v) {
    long m = v < 0 ? -v : 0;
    return m * m;
  };
  int zeta = 1 + X.k - P.k;   // z-slot exponent
  int beta = 1 + X.k - Y.k;   // b-slot exponent
  int alpha = 1 - Y.k;        // a-slot exponent
  return 2 * msq(zeta) + 2 * msq(beta) + msq(alpha);
}

}  // namespace

double a_coeff(const APoint& pt, const QParam& qp, double tol) {
  validate(qp);
  const LatticePoint &p = pt.p, &x = pt.x, &y = pt.y;
  if (!p.in_lattice() || !x.in_lattice() || !y.in_lattice())
    throw std::invalid_argument("a_coeff: label outside I_q");
  if (x.sign * y.sign != p.sign) return 0.0;  // support condition

  const double q = qp.q;
  // the index permutation relations are exact; route the evaluation through the
  // arrangement whose series slots are numerically safest (sign and q-power
  // prefactors only, so no accuracy is spent on the rerouting itself)
  struct Arrangement {
    LatticePoint P, X, Y;
    double factor;
  };
  const double f_xy = sign_pow(p.sign, p.k) * sign_pow(x.sign, x.k) *
                      sign_pow(y.sign, y.k);
  const double f_py = parity(y.k + p.k) * sign_pow(x.sign, x.k) * qpow(q, y.k - p.k);
  const double f_px = parity(x.k + p.k) * sign_pow(y.sign, y.k) * qpow(q, x.k - p.k);
  const double f_sw = sign_pow(y.sign, y.k) * sign_pow(x.sign, x.k) *
                      sign_pow(p.sign, p.k);  // inner swap of the last two labels
  const Arrangement arr[6] = {
      {p, x, y, 1.0},
      {p, y, x, f_xy},
      {y, x, p, f_py},
      {y, p, x, f_py * f_sw},
      {x, p, y, f_px},
      {x, y, p, f_px * f_sw},
  };
  int best = 0;
  long best_score = hazard_score(arr[0].P, arr[0].X, arr[0].Y);
  for (int i = 1; i < 6; ++i) {
    long s = hazard_score(arr[i].P, arr[i].X, arr[i].Y);
    if (s < best_score) {
      best = i;
      best_score = s;
    }
  }
  return arr[best].factor * a_core(arr[best].P, arr[best].X, arr[best].Y, qp, tol);
}

SymmetryResiduals symmetry_residuals(const APoint& pt, const QParam& qp,
                                     double tol) {
  const LatticePoint &p = pt.p, &x = pt.x, &y = pt.y;
  const double q = qp.q;
  double base = a_coeff(pt, qp, tol);

  SymmetryResiduals r{};
  // swapping p with y needs y as a subscript, available since y in I_q
  {
    double rhs = parity(y.k + p.k) * sign_pow(x.sign, x.k) * qpow(q, y.k - p.k) *
                 a_coeff({y, x, p}, qp, tol);
    r.py_swap = rel_residual(base, rhs);
  }
  {
    double rhs = sign_pow(p.sign, p.k) * sign_pow(x.sign, x.k) *
                 sign_pow(y.sign, y.k) * a_coeff({p, y, x}, qp, tol);
    r.xy_swap = rel_residual(base, rhs);
  }
  // swapping p with x similarly needs x in I_q
  {
    double rhs = parity(x.k + p.k) * sign_pow(y.sign, y.k) * qpow(q, x.k - p.k) *
                 a_coeff({x, p, y}, qp, tol);
    r.px_swap = rel_residual(base, rhs);
  }
  return r;
}

std::vector<LatticePoint> default_p_list(const LatticePoint& theta,
                                         const LatticeWindow& window) {
  std::vector<LatticePoint> out;
  for (auto p : window.points())
    if (p.sign == theta.sign && std::abs(p.k) <= 4) out.push_back(p);
  return out;
}

GramReport orthogonality_gram(const LatticePoint& theta, const LatticeWindow& window,
                              const std::vector<LatticePoint>& p_list,
                              const QParam& qp, double tol) {
  validate(qp);
  validate(window);
  GramReport rep;
  rep.theta = theta;
  rep.window = window;

  auto pts = window.points();
  const size_t n = p_list.size();
  std::vector<std::vector<double>> cols(n);
  for (size_t i = 0; i < n; ++i) {
    cols[i].reserve(pts.size());
    for (auto x : pts) {
      LatticePoint y = times(theta, x);
      cols[i].push_back(y.in_lattice() ? a_coeff({p_list[i], x, y}, qp, tol) : 0.0);
    }
  }
  rep.gram.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      double g = 0.0;
      for (size_t t = 0; t < pts.size(); ++t) g += cols[i][t] * cols[j][t];
      rep.gram[i][j] = rep.gram[j][i] = g;
      if (i == j)
        rep.max_diag_dev = std::max(rep.max_diag_dev, std::abs(g - 1.0));
      else
        rep.max_offdiag = std::max(rep.max_offdiag, std::abs(g));
    }
  return rep;
}

GramReport dual_gram(const LatticePoint& theta, const LatticeWindow& window,
                     const std::vector<std::pair<LatticePoint, LatticePoint>>& xy_list,
                     const QParam& qp, double tol) {
  validate(qp);
  validate(window);
  for (auto& [x, y] : xy_list)
    if (!(times(theta, x) == y))
      throw std::invalid_argument("dual_gram: pair off the theta line");

  GramReport rep;
  rep.theta = theta;
  rep.window = window;

  std::vector<LatticePoint> ps;
  for (auto p : window.points())
    if (p.sign == theta.sign) ps.push_back(p);

  const size_t n = xy_list.size();
  std::vector<std::vector<double>> rows(n);
  for (size_t i = 0; i < n; ++i) {
    rows[i].reserve(ps.size());
    for (auto p : ps) rows[i].push_back(a_coeff({p, xy_list[i].first, xy_list[i].second}, qp, tol));
  }
  rep.gram.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      double g = 0.0;
      for (size_t t = 0; t < ps.size(); ++t) g += rows[i][t] * rows[j][t];
      rep.gram[i][j] = rep.gram[j][i] = g;
      if (i == j)
        rep.max_diag_dev = std::max(rep.max_diag_dev, std::abs(g - 1.0));
      else
        rep.max_offdiag = std::max(rep.max_offdiag, std::abs(g));
    }
  return rep;
}

RecurrenceResiduals recurrence_residuals(const APoint& pt, const QParam& qp,
                                         double tol) {
  const LatticePoint &p = pt.p, &x = pt.x, &y = pt.y;
  const double q = qp.q;
  auto A = [&](LatticePoint pp, LatticePoint xx, LatticePoint yy) {
    if (!xx.in_lattice() || !yy.in_lattice()) return 0.0;  // zero extension
    return a_coeff({pp, xx, yy}, qp, tol);
  };
  double base = A(p, x, y);

  RecurrenceResiduals r{};
  {
    // sqrt(sgn p + p^-2) a_{qp}(x,y) =
    //   sqrt((sgn x + q^2/x^2)(sgn y + q^2/y^2)) a_p(x/q, y/q) + sgn(x) q/(xy) a_p(x,y)
    double lhs = std::sqrt(p.sign + qpow(q, -2 * p.k)) *
                 A(LatticePoint{p.sign, p.k + 1}, x, y);
    double rhs = std::sqrt((x.sign + qpow(q, 2 - 2 * x.k)) *
                           (y.sign + qpow(q, 2 - 2 * y.k))) *
                     A(p, LatticePoint{x.sign, x.k - 1}, LatticePoint{y.sign, y.k - 1}) +
                 x.sign * (x.sign * y.sign) * qpow(q, 1 - x.k - y.k) * base;
    r.alpha = rel_residual(lhs, rhs);
  }
  {
    // p^-1 a_p(x,y) =
    //   sgn(x) y^-1 sqrt(sgn x + x^-2) a_p(qx, y) + x^-1 sqrt(sgn y + q^2/y^2) a_p(x, y/q)
    double lhs = p.sign * qpow(q, -p.k) * base;
    double rhs = x.sign * y.sign * qpow(q, -y.k) *
                     std::sqrt(x.sign + qpow(q, -2 * x.k)) *
                     A(p, LatticePoint{x.sign, x.k + 1}, y) +
                 x.sign * qpow(q, -x.k) *
                     std::sqrt(y.sign + qpow(q, 2 - 2 * y.k)) *
                     A(p, x, LatticePoint{y.sign, y.k - 1});
    r.gamma = rel_residual(lhs, rhs);
  }
  return r;
}

double second_order_eigen_residual(int r, int s, int m, const LatticePoint& p,
                                   const LatticeWindow& window, const QParam& qp,
                                   int phase_samples, double tol) {
  validate(qp);
  validate(window);
  if (!p.in_lattice()) throw std::invalid_argument("second_order_eigen: p outside I_q");
  if (phase_samples < 1) throw std::invalid_argument("second_order_eigen: need samples >= 1");
  const double q = qp.q;

  // f(lambda, x, mu, y) on the line y = sgn(p) q^m x, zero-extended off I_q
  auto f = [&](cplx lam, LatticePoint x, cplx mu) -> cplx {
    LatticePoint y{p.sign * x.sign, x.k + m};
    if (!x.in_lattice() || !y.in_lattice()) return 0.0;
    double a = a_coeff({p, x, y}, qp, tol);
    return a * ipow(lam, r + y.k - p.k) * ipow(mu, s - x.k + p.k);
  };

  const double eig = qpow(q, -2 * p.k);
  double worst = 0.0;
  for (int j = 1; j <= phase_samples; ++j) {
    cplx lam = std::polar(1.0, 6.283185307179586 * 0.6180339887498949 * j);
    cplx mu = std::polar(1.0, 6.283185307179586 * 0.3819660112501051 * j);
    for (auto x : window.points()) {
      LatticePoint y{p.sign * x.sign, x.k + m};
      if (!y.in_lattice()) continue;
      double sx = x.sign, sy = y.sign;
      double diag = qpow(q, -2 * x.k) * (sy + qpow(q, -2 * y.k)) +
                    (sx + qpow(q, 2 - 2 * x.k)) * qpow(q, -2 * y.k);
      double up = sx * std::sqrt((sx + qpow(q, -2 * x.k)) * (sy + qpow(q, -2 * y.k)));
      double dn = sx * std::sqrt((sx + qpow(q, 2 - 2 * x.k)) *
                                 (sy + qpow(q, 2 - 2 * y.k)));
      cplx inv_xy = sx * sy * qpow(q, -x.k - y.k);
      cplx t0 = diag * f(lam, x, mu);
      cplx t1 = std::conj(lam) * mu * inv_xy * qpow(q, -1) * up *
                f(lam, LatticePoint{x.sign, x.k + 1}, mu);
      cplx t2 = lam * std::conj(mu) * inv_xy * qpow(q, 1) * dn *
                f(lam, LatticePoint{x.sign, x.k - 1}, mu);
      cplx rhs = eig * f(lam, x, mu);
      // the three-term combination cancels by many orders toward small x, so
      // measure the defect against the scale of what actually cancels
      double scale = std::max({std::abs(t0), std::abs(t1), std::abs(t2), std::abs(rhs)});
      worst = std::max(worst, std::abs(t0 + t1 + t2 - rhs) / (1.0 + scale));
    }
  }
  return worst;
}

}  // namespace suq
