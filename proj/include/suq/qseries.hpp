#pragma once

#include <complex>
#include <vector>

#include "suq/lattice.hpp"

namespace suq {

using cplx = std::complex<double>;

// value + rigorous truncation-tail majorant + number of terms summed
struct SeriesValue {
  cplx value{};
  double error_bound = 0.0;
  int terms = 1;
};

struct PsiArgs {
  cplx a{};
  cplx b{};
  cplx z{};
  QParam base{};  // series base is base.base()
};

// shared residual convention |lhs-rhs| / (1 + |lhs| + |rhs|)
double rel_residual(cplx lhs, cplx rhs);

// integer power with exact handling of negative exponents
cplx ipow(cplx w, int k);

// (a; Q)_n
cplx poch_finite(cplx a, int n, const QParam& qp);

// (a; Q)_inf; exact zero when a factor vanishes exactly
SeriesValue poch_inf(cplx a, const QParam& qp, double tol = 1e-15);

// lattice overload: a = +Q^{-j}, j >= 0 short-circuits to exact zero
SeriesValue poch_inf(const LatticePoint& a, const QParam& qp, double tol = 1e-15);

// Psi(a; b; Q, z) = sum_n (a;Q)_n (b Q^n;Q)_inf / (Q;Q)_n (-1)^n Q^{n(n-1)/2} z^n,
// entire in a, b, z
SeriesValue psi(const PsiArgs& args, double tol = 1e-14);

// phi(w; z) = sum_r (w Q^r; Q)_inf / (Q;Q)_r Q^{r(r-1)} z^r with Q = q^2 always
SeriesValue phi_aux(cplx w, cplx z, const QParam& qp, double tol = 1e-14);

// 2phi1(a, b; c; Q, z); needs |z| < 1 and c off Q^{-N0}
SeriesValue two_phi_one(cplx a, cplx b, cplx c, cplx z, const QParam& qp,
                        double tol = 1e-14);

// 1phi1(a; c; Q, w) = Psi(a; c; Q, w) / (c;Q)_inf, c off Q^{-N0}
SeriesValue one_phi_one(cplx a, cplx c, cplx w, const QParam& qp,
                        double tol = 1e-14);

// dominating envelope (-|a|;Q)_inf (-|z|;Q)_inf |z|^k Q^{k(k-1)/2} for
// |Psi(a; Q^{1-k}; Q, z)|, k >= 0
double psi_bound(cplx a, int k, cplx z, const QParam& qp);

enum class QIdentity {
  theta_product,  // (a Q^k;Q)_inf (Q^{1-k}/a;Q)_inf = (-a)^{-k} Q^{-k(k-1)/2} (a;Q)_inf (Q/a;Q)_inf
  arg_symmetry,   // Psi(a;b;z) = Psi(a z / b; z; b), b != 0
  transform_a,    // (Q^{k+1}/a;Q)_inf Psi(a Q^{-k}; Q^{1-k}; z) = (Q/a;Q)_inf (a z/Q)^k Psi(a; Q^{k+1}; z Q^k)
  transform_z,    // (Q^{k+1} a/z;Q)_inf Psi(Q^{-k}; a; z) = (z/Q)^k (Q^k a;Q)_inf Psi(Q^{-k}; Q a/z; Q^2/z), k >= 0
  contiguous_a,   // Psi(a;b;z) = (1-a) Psi(Qa;b;z) + a Psi(a;b;Qz)
  contiguous_b,   // Psi(a;b;z) = (a-b) Psi(a;Qb;Qz) + (1-a) Psi(Qa;Qb;z)
};

struct IdentityParams {
  cplx a{};
  cplx b{};
  cplx c{};
  cplx z{};
  int k = 0;
};

// identity checks run the series to near-rounding tolerance; cancellation between
// large Psi values amplifies any truncation slack
double identity_residual(QIdentity which, const IdentityParams& p,
                         const QParam& qp, double tol = 1e-16);

// residuals of 2phi1(a, b/x_i; c; x_i z) against 1phi1(a; c; b z) along
// x_i = 2^{-i}, i = 0..imax; the sequence must decay below 1e-8
std::vector<double> limit_transition_residuals(cplx a, cplx b, cplx c, cplx z,
                                               const QParam& qp, int imax = 30,
                                               double tol = 1e-14);

}  // namespace suq
