#pragma once

#include <compare>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

namespace suq {

// Deformation parameter. base_squared selects the q^2 lattice/series base used by
// the coefficient and coassociativity layers; nu and c_q always read plain q.
struct QParam {
  double q = 0.5;
  bool base_squared = false;

  double base() const { return base_squared ? q * q : q; }
  QParam squared() const { return {q, true}; }
};

void validate(const QParam& qp);

// Point of the multiplicative grid +-base^Z, stored exactly as (sign, exponent).
// I_q membership needs exponent >= 1 on the negative half; the positive half is all
// of q^Z. The same encoding serves the q^2 grid when the ambient base is squared.
struct LatticePoint {
  int sign = 1;  // +1 or -1
  int k = 0;     // value = sign * base^k

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  // map-key order, not value order
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

  bool in_lattice() const { return sign > 0 || k >= 1; }
  double value(const QParam& qp) const;
  double abs_value(const QParam& qp) const;  // base^k
  LatticePoint negated() const { return {-sign, k}; }
  LatticePoint inverse() const { return {sign, -k}; }
};

inline LatticePoint pos(int k) { return {1, k}; }
inline LatticePoint neg(int k) { return {-1, k}; }

// exponent chi(x) = log_base |x|
inline int chi(const LatticePoint& x) { return x.k; }

// kappa(x) = sgn(x) x^2 carries (sign, k) on the base-q grid to the same (sign, k)
// on the base-q^2 grid.
inline LatticePoint kappa(const LatticePoint& x) { return x; }
double kappa(double x);

// nu(t) = q^{(chi(t)-1)(chi(t)-2)/2}, always in plain q
double nu(const LatticePoint& t, const QParam& qp);

int s_sign(double x, double y);  // -1 iff x > 0 and y < 0; zero arguments rejected
inline int s_sign(const LatticePoint& x, const LatticePoint& y) {
  return (x.sign > 0 && y.sign < 0) ? -1 : 1;
}

// product on +-base^Z, no membership constraint
inline LatticePoint times(const LatticePoint& a, const LatticePoint& b) {
  return {a.sign * b.sign, a.k + b.k};
}

// p*x when it lands in I_q, absent otherwise (zero-extension convention).
// Point shifts of delta functions go through translate(p.inverse(), x).
std::optional<LatticePoint> translate(const LatticePoint& p, const LatticePoint& x);

// Finite truncation {base^k : k_min <= k <= k_max} u {-base^k : 1 <= k <= negative_k_max}
struct LatticeWindow {
  int k_min = -8;
  int k_max = 14;
  int negative_k_max = 8;

  bool contains(const LatticePoint& x) const {
    if (x.sign > 0) return x.k >= k_min && x.k <= k_max;
    return x.k >= 1 && x.k <= negative_k_max;
  }
  int size() const { return (k_max - k_min + 1) + negative_k_max; }
  std::vector<LatticePoint> points() const;  // strictly increasing by value
};

void validate(const LatticeWindow& w);

}  // namespace suq
