#include "suq/qseries.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace suq {

namespace {

double qpow(double Q, long long e) { return std::pow(Q, static_cast<double>(e)); }

// (b Q^n; Q)_inf for n = 0..; one infinite product at the top index, extended
// downward through (b Q^n;Q)_inf = (1 - b Q^n)(b Q^{n+1};Q)_inf so lattice zeros
// propagate exactly
struct PochTail {
  cplx b;
  QParam qp;
  double tol;
  std::vector<cplx> table;

  PochTail(cplx b_, const QParam& qp_, double tol_) : b(b_), qp(qp_), tol(tol_) {
    fill(48);
  }

  void fill(int cap) {
    const double Q = qp.base();
    std::vector<cplx> np(static_cast<size_t>(cap) + 1);
    np[static_cast<size_t>(cap)] = poch_inf(b * qpow(Q, cap), qp, tol).value;
    for (int i = cap - 1; i >= static_cast<int>(table.size()); --i)
      np[static_cast<size_t>(i)] =
          (1.0 - b * qpow(Q, i)) * np[static_cast<size_t>(i) + 1];
    for (size_t i = 0; i < table.size(); ++i) np[i] = table[i];
    table = std::move(np);
  }

  cplx get(int n) {
    while (n >= static_cast<int>(table.size())) fill(2 * static_cast<int>(table.size()));
    return table[static_cast<size_t>(n)];
  }
};

void check_base(const QParam& qp) {
  if (!(qp.base() > 0.0) || !(qp.base() < 1.0))
    throw std::invalid_argument("qseries: need 0 < base < 1");
}

// rejects c in Q^{-N0}, where finite factors (c;Q)_n degenerate
void check_c_parameter(cplx c, double Q, const char* who) {
  double scale = std::abs(c);
  if (scale < 1.0) return;
  for (int j = 0; j <= 400; ++j) {
    double p = qpow(Q, j);
    if (scale * p < 0.5) break;
    if (std::abs(1.0 - c * p) <= 1e-12 * (1.0 + scale * p))
      throw std::invalid_argument(std::string(who) + ": c parameter on Q^{-N0}");
  }
}

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

double rel_residual(cplx lhs, cplx rhs) {
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
}

cplx ipow(cplx w, int k) {
  if (k < 0) return 1.0 / ipow(w, -k);
  cplx r = 1.0, base = w;
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    base *= base;
  }
  return r;
}

cplx poch_finite(cplx a, int n, const QParam& qp) {
  check_base(qp);
  if (n < 0) throw std::invalid_argument("poch_finite: n < 0");
  const double Q = qp.base();
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= 1.0 - a * qpow(Q, i);
  return r;
}

SeriesValue poch_inf(cplx a, const QParam& qp, double tol) {
  check_base(qp);
  const double Q = qp.base();
  const double am = std::abs(a);
  cplx prod = 1.0;
  for (int i = 0;; ++i) {
    cplx f = 1.0 - a * qpow(Q, i);
    if (f == 0.0) return {cplx(0.0), 0.0, i + 1};
    prod *= f;
    double rem = am * qpow(Q, i + 1);
    if (rem < 0.5) {
      // |log of remaining product| <= rem / ((1-Q)(1-rem)); rounding adds ~1 ulp
      // per retained factor
      double lb = rem / ((1.0 - Q) * (1.0 - rem));
      if (lb < tol || lb < 1e-18) {
        double eb = std::abs(prod) *
                    (2.0 * lb + (i + 2) * std::numeric_limits<double>::epsilon());
        return {prod, eb, i + 1};
      }
    }
    if (i > 100000) throw std::runtime_error("poch_inf: no convergence");
  }
}

SeriesValue poch_inf(const LatticePoint& a, const QParam& qp, double tol) {
  if (a.sign > 0 && a.k <= 0) return {cplx(0.0), 0.0, 1};
  return poch_inf(cplx(a.value(qp)), qp, tol);
}

SeriesValue psi(const PsiArgs& args, double tol) {
  check_base(args.base);
  const double Q = args.base.base();
  const cplx a = args.a, b = args.b, z = args.z;
  const double zm = std::abs(z);

  // term majorant constant: |(a;Q)_n| <= (-|a|;Q)_inf, |(bQ^n;Q)_inf| <= (-|b|;Q)_inf,
  // (Q;Q)_n >= (Q;Q)_inf
  const double Ca = poch_inf(cplx(-std::abs(a)), args.base, 1e-15).value.real();
  const double Cb = poch_inf(cplx(-std::abs(b)), args.base, 1e-15).value.real();
  const double Cq = poch_inf(cplx(Q), args.base, 1e-15).value.real();
  const double logC = std::log(Ca) + std::log(Cb) - std::log(Cq);
  const double logQ = std::log(Q);
  const double logz = zm > 0.0 ? std::log(zm) : -std::numeric_limits<double>::infinity();

  PochTail P(b, args.base, 1e-15);

  cplx A = 1.0;    // (a;Q)_n
  cplx u = 1.0;    // (-1)^n Q^{n(n-1)/2} z^n
  double Qn = 1.0; // (Q;Q)_n
  cplx S = 0.0;
  double sumabs = 0.0;
  double tail = std::numeric_limits<double>::infinity();
  int n = 0;
  for (;; ++n) {
    cplx t = A * P.get(n) / Qn * u;
    S += t;
    sumabs += std::abs(t);
    double ratio = qpow(Q, n + 1) * zm;
    if (ratio < 1.0) {
      double logm = logC + 0.5 * static_cast<double>(n) * (n + 1) * logQ +
                    (n + 1) * logz;
      tail = logm > 700.0 ? std::numeric_limits<double>::infinity()
                          : std::exp(logm) / (1.0 - ratio);
      if (n >= 5 && tail < tol * (1.0 + std::abs(S))) break;
    }
    A *= 1.0 - a * qpow(Q, n);
    u *= -z * qpow(Q, n);
    Qn *= 1.0 - qpow(Q, n + 1);
    if (n > 4000) throw std::runtime_error("psi: no convergence");
  }
  if (!finite(S)) throw std::overflow_error("psi: overflow, arguments too large");
  // truncation tail plus a per-term rounding cushion
  double eb = tail + (n + 11) * std::numeric_limits<double>::epsilon() *
                         (sumabs + std::abs(S));
  return {S, eb, n + 1};
}

SeriesValue phi_aux(cplx w, cplx z, const QParam& qp, double tol) {
  validate(qp);
  const QParam q2{qp.q, true};  // the series lives in base q^2 regardless of flag
  const double Q = q2.base();
  const double zm = std::abs(z);

  const double Cw = poch_inf(cplx(-std::abs(w)), q2, 1e-15).value.real();
  const double Cq = poch_inf(cplx(Q), q2, 1e-15).value.real();
  const double logC = std::log(Cw) - std::log(Cq);
  const double logQ = std::log(Q);
  const double logz = zm > 0.0 ? std::log(zm) : -std::numeric_limits<double>::infinity();

  PochTail P(w, q2, 1e-15);

  cplx u = 1.0;     // Q^{r(r-1)} z^r
  double Qr = 1.0;  // (Q;Q)_r
  cplx S = 0.0;
  double sumabs = 0.0;
  double tail = std::numeric_limits<double>::infinity();
  int r = 0;
  for (;; ++r) {
    cplx t = P.get(r) / Qr * u;
    S += t;
    sumabs += std::abs(t);
    double ratio = qpow(Q, 2 * (r + 1)) * zm;
    if (ratio < 1.0) {
      double logm = logC + static_cast<double>(r) * (r + 1) * logQ + (r + 1) * logz;
      tail = logm > 700.0 ? std::numeric_limits<double>::infinity()
                          : std::exp(logm) / (1.0 - ratio);
      if (r >= 5 && tail < tol * (1.0 + std::abs(S))) break;
    }
    u *= z * qpow(Q, 2 * r);
    Qr *= 1.0 - qpow(Q, r + 1);
    if (r > 4000) throw std::runtime_error("phi_aux: no convergence");
  }
  if (!finite(S)) throw std::overflow_error("phi_aux: overflow");
  double eb = tail + (r + 11) * std::numeric_limits<double>::epsilon() *
                         (sumabs + std::abs(S));
  return {S, eb, r + 1};
}

SeriesValue two_phi_one(cplx a, cplx b, cplx c, cplx z, const QParam& qp,
                        double tol) {
  check_base(qp);
  const double Q = qp.base();
  if (!(std::abs(z) < 1.0))
    throw std::invalid_argument("two_phi_one: need |z| < 1");
  check_c_parameter(c, Q, "two_phi_one");

  const double am = std::abs(a), bm = std::abs(b), cm = std::abs(c),
               zm = std::abs(z);
  cplx t = 1.0, S = 0.0;
  double sumabs = 0.0;
  double tail = std::numeric_limits<double>::infinity();
  int n = 0;
  for (;; ++n) {
    S += t;
    sumabs += std::abs(t);
    double qn = qpow(Q, n);
    // sup over j >= n of the absolute term ratio
    if (cm * qn < 1.0) {
      double r = zm * (1.0 + am * qn) * (1.0 + bm * qn) /
                 ((1.0 - cm * qn) * (1.0 - qpow(Q, n + 1)));
      if (r < 1.0) {
        tail = std::abs(t) * r / (1.0 - r);
        if (n >= 5 && tail < tol * (1.0 + std::abs(S))) break;
      }
    }
    t *= (1.0 - a * qn) * (1.0 - b * qn) * z /
         ((1.0 - c * qn) * (1.0 - qpow(Q, n + 1)));
    if (n > 100000) throw std::runtime_error("two_phi_one: no convergence");
  }
  if (!finite(S)) throw std::overflow_error("two_phi_one: overflow");
  double eb = tail + (n + 11) * std::numeric_limits<double>::epsilon() *
                         (sumabs + std::abs(S));
  return {S, eb, n + 1};
}

SeriesValue one_phi_one(cplx a, cplx c, cplx w, const QParam& qp, double tol) {
  check_base(qp);
  check_c_parameter(c, qp.base(), "one_phi_one");
  SeriesValue num = psi({a, c, w, qp}, tol);
  SeriesValue den = poch_inf(c, qp, 1e-15);
  cplx v = num.value / den.value;
  double eb = (num.error_bound + std::abs(v) * den.error_bound) / std::abs(den.value);
  return {v, eb, num.terms};
}

double psi_bound(cplx a, int k, cplx z, const QParam& qp) {
  check_base(qp);
  if (k < 0) throw std::invalid_argument("psi_bound: need k >= 0");
  const double Q = qp.base();
  double pa = poch_inf(cplx(-std::abs(a)), qp, 1e-15).value.real();
  double pz = poch_inf(cplx(-std::abs(z)), qp, 1e-15).value.real();
  return pa * pz * std::pow(std::abs(z), k) *
         qpow(Q, static_cast<long long>(k) * (k - 1) / 2);
}

double identity_residual(QIdentity which, const IdentityParams& p,
                         const QParam& qp, double tol) {
  check_base(qp);
  const double Q = qp.base();
  auto PSI = [&](cplx a, cplx b, cplx z) { return psi({a, b, z, qp}, tol).value; };
  auto PINF = [&](cplx a) { return poch_inf(a, qp, 1e-15).value; };

  switch (which) {
    case QIdentity::theta_product: {
      if (p.a == 0.0) throw std::invalid_argument("theta_product: a = 0");
      const int k = p.k;
      cplx lhs = PINF(p.a * qpow(Q, k)) * PINF(qpow(Q, 1 - k) / p.a);
      cplx rhs = ipow(-p.a, -k) *
                 qpow(Q, -static_cast<long long>(k) * (k - 1) / 2) * PINF(p.a) *
                 PINF(Q / p.a);
      return rel_residual(lhs, rhs);
    }
    case QIdentity::arg_symmetry: {
      if (p.b == 0.0) throw std::invalid_argument("arg_symmetry: b = 0");
      cplx lhs = PSI(p.a, p.b, p.z);
      cplx rhs = PSI(p.a * p.z / p.b, p.z, p.b);
      return rel_residual(lhs, rhs);
    }
    case QIdentity::transform_a: {
      if (p.a == 0.0 || p.z == 0.0)
        throw std::invalid_argument("transform_a: a, z must be nonzero");
      const int k = p.k;
      cplx lhs = PINF(qpow(Q, k + 1) / p.a) *
                 PSI(p.a * qpow(Q, -k), qpow(Q, 1 - k), p.z);
      cplx rhs = PINF(Q / p.a) * ipow(p.a * p.z / Q, k) *
                 PSI(p.a, qpow(Q, k + 1), p.z * qpow(Q, k));
      return rel_residual(lhs, rhs);
    }
    case QIdentity::transform_z: {
      if (p.z == 0.0) throw std::invalid_argument("transform_z: z = 0");
      if (p.k < 0) throw std::invalid_argument("transform_z: need k >= 0");
      const int k = p.k;
      cplx lhs = PINF(qpow(Q, k + 1) * p.a / p.z) * PSI(qpow(Q, -k), p.a, p.z);
      cplx rhs = ipow(p.z / Q, k) * PINF(qpow(Q, k) * p.a) *
                 PSI(qpow(Q, -k), Q * p.a / p.z, Q * Q / p.z);
      return rel_residual(lhs, rhs);
    }
    case QIdentity::contiguous_a: {
      cplx lhs = PSI(p.a, p.b, p.z);
      cplx rhs = (1.0 - p.a) * PSI(Q * p.a, p.b, p.z) + p.a * PSI(p.a, p.b, Q * p.z);
      return rel_residual(lhs, rhs);
    }
    case QIdentity::contiguous_b: {
      cplx lhs = PSI(p.a, p.b, p.z);
      cplx rhs = (p.a - p.b) * PSI(p.a, Q * p.b, Q * p.z) +
                 (1.0 - p.a) * PSI(Q * p.a, Q * p.b, p.z);
      return rel_residual(lhs, rhs);
    }
  }
  throw std::logic_error("identity_residual: unknown identity");
}

std::vector<double> limit_transition_residuals(cplx a, cplx b, cplx c, cplx z,
                                               const QParam& qp, int imax,
                                               double tol) {
  if (!(std::abs(z) < 1.0))
    throw std::invalid_argument("limit_transition: need |z| < 1");
  cplx target = one_phi_one(a, c, b * z, qp, tol).value;
  std::vector<double> out;
  out.reserve(static_cast<size_t>(imax) + 1);
  for (int i = 0; i <= imax; ++i) {
    double x = std::ldexp(1.0, -i);
    cplx lhs = two_phi_one(a, b / x, c, x * z, qp, tol).value;
    out.push_back(rel_residual(lhs, target));
  }
  return out;
}

}  // namespace suq
