#include "suq/lattice.hpp"

#include <cmath>

namespace suq {

void validate(const QParam& qp) {
  if (!(qp.q > 0.0) || !(qp.q < 1.0))
    throw std::invalid_argument("QParam: need 0 < q < 1");
}

double LatticePoint::value(const QParam& qp) const {
  return sign * std::pow(qp.base(), k);
}

double LatticePoint::abs_value(const QParam& qp) const {
  return std::pow(qp.base(), k);
}

double kappa(double x) { return x < 0 ? -x * x : x * x; }

double nu(const LatticePoint& t, const QParam& qp) {
  // (k-1)(k-2) is a product of consecutive integers, always even
  long long e = static_cast<long long>(t.k - 1) * (t.k - 2) / 2;
  return std::pow(qp.q, static_cast<double>(e));
}

int s_sign(double x, double y) {
  if (x == 0.0 || y == 0.0) throw std::invalid_argument("s_sign: zero argument");
  return (x > 0 && y < 0) ? -1 : 1;
}

std::optional<LatticePoint> translate(const LatticePoint& p, const LatticePoint& x) {
  LatticePoint y = times(p, x);
  if (!y.in_lattice()) return std::nullopt;
  return y;
}

void validate(const LatticeWindow& w) {
  if (w.k_min > w.k_max)
    throw std::invalid_argument("LatticeWindow: k_min > k_max");
  if (w.negative_k_max < 0)
    throw std::invalid_argument("LatticeWindow: negative_k_max < 0");
}

std::vector<LatticePoint> LatticeWindow::points() const {
  std::vector<LatticePoint> out;
  out.reserve(static_cast<size_t>(size()));
  // -base^1 < -base^2 < ... < 0 < ... < base^{k_max-1}... increasing value means
  // increasing k on the negative half, decreasing k on the positive half
  for (int k = 1; k <= negative_k_max; ++k) out.push_back(neg(k));
  for (int k = k_max; k >= k_min; --k) out.push_back(pos(k));
  return out;
}

}  // namespace suq
