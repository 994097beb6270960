#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "suq/coefficients.hpp"
#include "suq/operators.hpp"

namespace suq {

// label of the orthonormal GNS basis vector f_{m,p,t}
struct GNSIndex {
  int m = 0;
  LatticePoint p, t;

  friend bool operator==(const GNSIndex&, const GNSIndex&) = default;
  friend auto operator<=>(const GNSIndex&, const GNSIndex&) = default;
};

// finite combination of the matrix-unit generators Phi(m,p,t)
struct PhiElement {
  std::map<GNSIndex, cplx> coeff;

  void add(const GNSIndex& label, cplx w);
};

// finite vector in the GNS space, expanded over the f basis
struct GNSVector {
  std::map<GNSIndex, cplx> coeff;

  void add(const GNSIndex& label, cplx w);
  cplx at(const GNSIndex& label) const;
  double norm() const;
};

double distance(const GNSVector& a, const GNSVector& b);

using GNSPairKey = std::pair<GNSIndex, GNSIndex>;
// expansion over f (x) f basis pairs; the kernel weights are real
using GNSPairTable = std::map<GNSPairKey, double>;

double pair_norm(const GNSPairTable& table);
double pair_inner(const GNSPairTable& a, const GNSPairTable& b);

// GNS map on generators: Lambda(Phi(m,p,t)) = |t|^{-1} f_{m,p,t}
GNSVector lambda_map(const PhiElement& x, const QParam& qp);

// Haar weight: phi(Phi(m,p,t)) = delta_{m,0} delta_{p,t} t^{-2}, computed
// from the integer label exponents
cplx weight_value(const PhiElement& x, const QParam& qp);

// q^{n i z} with the real-modulus and unit-phase factors split, so purely
// imaginary z costs one real power and real z one unit phase
cplx q_power_iz(double q, int n, cplx z);

// modular conjugation and modular operator on the GNS basis:
// J f_{m,p,t} = f_{-m,t,p} and nabla f_{m,p,t} = |p^{-1} t|^2 f_{m,p,t}
struct ModularData {
  GNSIndex j_image;
  double nabla = 1.0;
};
ModularData modular_data(const GNSIndex& idx, const QParam& qp);

// modular automorphism: each generator label is scaled by |p^{-1} t|^{2iz}
PhiElement modular_group(const PhiElement& x, cplx z, const QParam& qp);

// GNS representation: Phi(m',p',t') f_{n,c,d} = delta_{t',c} f_{n+m',p',d}
GNSVector pi_apply(const PhiElement& x, const GNSVector& v);

// multiplicative-unitary kernel: inner summation window plus parameters
struct WKernel {
  LatticeWindow window;
  QParam qp;
};

// expansion of W*(f_in1 (x) f_in2) as a finite table over output pairs; the
// two inner labels run over the window while the derived fourth label is kept
// wherever it lands on the lattice; terms below tol are dropped
GNSPairTable w_star_apply(const WKernel& kernel, const GNSIndex& in1,
                          const GNSIndex& in2, double tol = 1e-16);

// residual of Lambda((omega pi (x) id) Delta(x)) = (omega (x) id)(W*) Lambda(x)
// for the matrix-element functional omega = < . f_omega1, f_omega2 >, with the
// left side assembled from the closed form of the coproduct matrix elements
// and the right side from the kernel expansion
double left_invariance_residual(const GNSIndex& omega1, const GNSIndex& omega2,
                                const PhiElement& x, const WKernel& kernel,
                                double tol = 1e-16);

// single vector-functional slice (id (x) < . f_u, f_v >)(W*) applied to
// f_probe, evaluated through the contracted kernel in closed form
GNSVector w_star_slice(const GNSIndex& u, const GNSIndex& v,
                       const GNSIndex& probe, const QParam& qp);

// residual of the absolutely convergent slice identity: the weighted double
// sum of vector-functional slices of W* against the scalar multiple of the
// represented generator, probed on a fixed set of basis vectors; throws
// runtime_error when the window cannot certify the requested tolerance
double slice_functional_residual(int m1, int m2, int m3, int m4,
                                 const LatticePoint& p, const LatticePoint& t,
                                 const WKernel& kernel, double tol = 1e-6);

// antipode triple on generator labels, exact sign and q-power phases:
// S(Phi(m,p,t))     = sgn(p)^chi(p) sgn(t)^chi(t) (-1)^m q^m Phi(m,t,p)
// R(Phi(m,p,t))     = sgn(p)^chi(p) sgn(t)^chi(t) (-1)^m     Phi(m,t,p)
// tau_z(Phi(m,p,t)) = q^{2 m i z} Phi(m,p,t)
PhiElement antipode(const PhiElement& x, const QParam& qp);
PhiElement unitary_antipode(const PhiElement& x);
PhiElement scaling(const PhiElement& x, cplx z, const QParam& qp);

// the commutant-side involution breve-R(a) = breve-J a* breve-J on generators:
// Phi(m,p,t) -> sgn(p)^chi(p) sgn(t)^chi(t) Phi(m,t,p)
PhiElement breve_R(const PhiElement& x);

// max |phi(x) - phi(breve-R(x))| over the samples; exact zero is attainable
// because the weight only sees the diagonal labels, where the phase squares
// away
double breve_R_weight_residual(const std::vector<PhiElement>& samples,
                               const QParam& qp);

// operator-level realizations of the unitary antipode and scaling group on
// the truncated one-leg space: R(a) = I a* I with the anti-unitary
// I(zeta^n (x) delta_x) = (-1)^n sgn(x)^chi(x) zeta^{-n} (x) delta_x, and
// tau_z(a) = Q^{iz} a Q^{-iz} with Q(zeta^n (x) delta_x) = q^{2n} zeta^n (x)
// delta_x; each returns the worst entrywise defect against the label formula
double unitary_antipode_operator_residual(const std::vector<GNSIndex>& labels,
                                          const TruncatedSpace& space);
double scaling_operator_residual(const std::vector<GNSIndex>& labels, cplx z,
                                 const TruncatedSpace& space, const QParam& qp);

}  // namespace suq
