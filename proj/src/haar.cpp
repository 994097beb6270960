#include "suq/haar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace suq {

namespace {

double sign_pow(int sign, int k) { return (sign < 0 && (k & 1)) ? -1.0 : 1.0; }

double parity(int m) { return (m & 1) ? -1.0 : 1.0; }

// sgn(p)^chi(p) sgn(t)^chi(t)
double leg_phase(const GNSIndex& idx) {
  return sign_pow(idx.p.sign, idx.p.k) * sign_pow(idx.t.sign, idx.t.k);
}

void check_label(const GNSIndex& idx) {
  if (!idx.p.in_lattice() || !idx.t.in_lattice())
    throw std::invalid_argument("haar: label leg outside I_q");
}

// (-1)^n sgn(x)^chi(x), the phase of the mode-flip conjugation I
double i_phase(int n, const LatticePoint& x) {
  return parity(n) * sign_pow(x.sign, x.k);
}

bool at_window_edge(const LatticePoint& x, const LatticeWindow& w) {
  if (x.sign > 0) return x.k == w.k_min || x.k == w.k_max;
  return x.k == w.negative_k_max;
}

}  // namespace

void PhiElement::add(const GNSIndex& label, cplx w) {
  if (w == cplx(0.0)) return;
  coeff[label] += w;
}

void GNSVector::add(const GNSIndex& label, cplx w) {
  if (w == cplx(0.0)) return;
  coeff[label] += w;
}

cplx GNSVector::at(const GNSIndex& label) const {
  auto it = coeff.find(label);
  return it == coeff.end() ? cplx(0.0) : it->second;
}

double GNSVector::norm() const {
  double s = 0.0;
  for (auto& [k, w] : coeff) s += std::norm(w);
  return std::sqrt(s);
}

double distance(const GNSVector& a, const GNSVector& b) {
  double s = 0.0;
  for (auto& [k, w] : a.coeff) s += std::norm(w - b.at(k));
  for (auto& [k, w] : b.coeff)
    if (a.coeff.find(k) == a.coeff.end()) s += std::norm(w);
  return std::sqrt(s);
}

double pair_norm(const GNSPairTable& table) {
  double s = 0.0;
  for (auto& [k, w] : table) s += w * w;
  return std::sqrt(s);
}

double pair_inner(const GNSPairTable& a, const GNSPairTable& b) {
  const GNSPairTable& lead = a.size() <= b.size() ? a : b;
  const GNSPairTable& other = a.size() <= b.size() ? b : a;
  double s = 0.0;
  for (auto& [k, w] : lead) {
    auto it = other.find(k);
    if (it != other.end()) s += w * it->second;
  }
  return s;
}

GNSVector lambda_map(const PhiElement& x, const QParam& qp) {
  const double q = qp.base();
  GNSVector out;
  for (auto& [lab, c] : x.coeff) {
    check_label(lab);
    out.add(lab, c * std::pow(q, -lab.t.k));
  }
  return out;
}

cplx weight_value(const PhiElement& x, const QParam& qp) {
  const double q = qp.base();
  cplx s = 0.0;
  for (auto& [lab, c] : x.coeff) {
    check_label(lab);
    if (lab.m == 0 && lab.p == lab.t) s += c * std::pow(q, -2 * lab.t.k);
  }
  return s;
}

cplx q_power_iz(double q, int n, cplx z) {
  // q^{n i z} = q^{-n Im z} * exp(i n Re z ln q); the modulus stays an exact
  // integer power when Im z is a half-integer multiple of 2/n
  double mod = std::pow(q, -double(n) * z.imag());
  if (z.real() == 0.0) return {mod, 0.0};
  double arg = double(n) * z.real() * std::log(q);
  return mod * cplx{std::cos(arg), std::sin(arg)};
}

ModularData modular_data(const GNSIndex& idx, const QParam& qp) {
  check_label(idx);
  return {{-idx.m, idx.t, idx.p}, std::pow(qp.base(), 2 * (idx.t.k - idx.p.k))};
}

PhiElement modular_group(const PhiElement& x, cplx z, const QParam& qp) {
  PhiElement out;
  for (auto& [lab, c] : x.coeff)
    out.add(lab, c * q_power_iz(qp.base(), 2 * (lab.t.k - lab.p.k), z));
  return out;
}

GNSVector pi_apply(const PhiElement& x, const GNSVector& v) {
  GNSVector out;
  for (auto& [xl, xc] : x.coeff)
    for (auto& [vl, vc] : v.coeff)
      if (xl.t == vl.p) out.add({vl.m + xl.m, xl.p, vl.t}, xc * vc);
  return out;
}

GNSPairTable w_star_apply(const WKernel& kernel, const GNSIndex& in1,
                          const GNSIndex& in2, double tol) {
  check_label(in1);
  check_label(in2);
  const QParam& qp = kernel.qp;
  const double q = qp.base();
  GNSPairTable out;
  for (auto y : kernel.window.points()) {
    // support of a_{t2}(p1, y); the second coefficient's support then holds
    // automatically
    if (y.sign * in1.p.sign != in2.t.sign) continue;
    const double wy = std::pow(q, in2.t.k - y.k) * a_coeff({in2.t, in1.p, y}, qp);
    if (wy == 0.0) continue;
    for (auto z : kernel.window.points()) {
      const LatticePoint w{
          in2.p.sign * in2.t.sign * y.sign * z.sign * in1.p.sign,
          y.k + z.k - in1.p.k + in2.m};
      // the derived fourth label is kept wherever it lands on the lattice
      if (!w.in_lattice()) continue;
      const double weight = wy * a_coeff({in2.p, z, w}, qp);
      if (std::abs(weight) <= tol) continue;
      const int kk = in1.p.k + in2.p.k - in2.t.k - z.k;
      out[{GNSIndex{in1.m + in2.m - kk, z, in1.t}, GNSIndex{kk, w, y}}] += weight;
    }
  }
  return out;
}

double left_invariance_residual(const GNSIndex& omega1, const GNSIndex& omega2,
                                const PhiElement& x, const WKernel& kernel,
                                double tol) {
  check_label(omega1);
  check_label(omega2);
  const QParam& qp = kernel.qp;
  const double q = qp.base();
  GNSVector lhs, rhs;
  for (auto& [lab, c] : x.coeff) {
    check_label(lab);
    // closed form of Lambda((omega pi (x) id) Delta(Phi) Phi(0,v,v)) summed
    // over window points v; the whole line vanishes unless the functional
    // legs share t and the modes balance the label exponents
    if (omega1.t == omega2.t &&
        omega1.m + lab.m - omega2.m ==
            lab.p.k + omega1.p.k - omega2.p.k - lab.t.k) {
      for (auto v : kernel.window.points()) {
        const LatticePoint wv{
            lab.p.sign * lab.t.sign * v.sign * omega1.p.sign * omega2.p.sign,
            v.k - omega1.p.k + lab.m + omega2.p.k};
        if (!wv.in_lattice()) continue;
        const double a1 = a_coeff({lab.t, omega1.p, v}, qp);
        if (a1 == 0.0) continue;
        const double a2 = a_coeff({lab.p, omega2.p, wv}, qp);
        lhs.add({lab.m + omega1.m - omega2.m, wv, v},
                c * std::pow(q, -v.k) * a1 * a2);
      }
    }
    // kernel route: |t|^{-1} times the first-leg contraction of
    // W*(f_omega1 (x) f_lab) against f_omega2
    const GNSPairTable table = w_star_apply(kernel, omega1, lab, tol);
    const cplx s = c * std::pow(q, -lab.t.k);
    for (auto& [key, weight] : table)
      if (key.first == omega2) rhs.add(key.second, s * weight);
  }
  return distance(lhs, rhs) / (1.0 + lhs.norm() + rhs.norm());
}

GNSVector w_star_slice(const GNSIndex& u, const GNSIndex& v,
                       const GNSIndex& probe, const QParam& qp) {
  check_label(u);
  check_label(v);
  check_label(probe);
  GNSVector out;
  if (u.p.k + v.t.k - v.p.k - u.t.k != v.m - u.m) return out;
  const LatticePoint g{u.p.sign * u.t.sign * probe.p.sign * v.p.sign * v.t.sign,
                       probe.p.k + v.p.k - v.t.k - u.m};
  if (!g.in_lattice()) return out;
  const double value = std::pow(qp.base(), u.t.k - v.t.k) *
                       a_coeff({u.t, probe.p, v.t}, qp) *
                       a_coeff({u.p, g, v.p}, qp);
  out.add({u.m - v.m + probe.m, g, probe.t}, value);
  return out;
}

double slice_functional_residual(int m1, int m2, int m3, int m4,
                                 const LatticePoint& p, const LatticePoint& t,
                                 const WKernel& kernel, double tol) {
  if (!p.in_lattice() || !t.in_lattice())
    throw std::invalid_argument("slice_functional_residual: label outside I_q");
  const QParam& qp = kernel.qp;
  const double q = qp.base();
  const std::vector<GNSIndex> probes = {
      {0, t, pos(1)}, {2, t, pos(2)}, {0, {t.sign, t.k + 1}, pos(1)}};
  double worst = 0.0;
  for (auto& probe : probes) {
    GNSVector lhs;
    // every slice in the functional sum lands on the single contracted label
    // g = sgn(pt) c q^{-m1} and needs the mode balance m3-m4 = m2-m1; the
    // weighted double sum then factors into independent x and y sums
    const LatticePoint g{p.sign * t.sign * probe.p.sign, probe.p.k - m1};
    if (m3 - m4 == m2 - m1 && g.in_lattice()) {
      double sum_x = 0.0, abs_x = 0.0, edge_x = 0.0;
      for (auto x : kernel.window.points()) {
        const LatticePoint bx{p.sign * x.sign, x.k + m3};
        if (!bx.in_lattice()) continue;
        double term = std::pow(q, x.k) * a_coeff({p, bx, x}, qp) *
                      a_coeff({bx, g, x}, qp);
        if (x.k & 1) term = -term;                     // (-1)^{chi(x)}
        if (x.sign < 0 && (x.k & 1)) term = -term;     // sgn(x)^{chi(x)}
        sum_x += term;
        abs_x += std::abs(term);
        if (at_window_edge(x, kernel.window)) edge_x += std::abs(term);
      }
      double sum_y = 0.0, abs_y = 0.0, edge_y = 0.0;
      for (auto y : kernel.window.points()) {
        const LatticePoint by{t.sign * y.sign, y.k + m4};
        if (!by.in_lattice()) continue;
        double term = std::pow(q, y.k) * a_coeff({t, by, y}, qp) *
                      a_coeff({by, probe.p, y}, qp);
        if (y.k & 1) term = -term;
        if (y.sign < 0 && (y.k & 1)) term = -term;
        sum_y += term;
        abs_y += std::abs(term);
        if (at_window_edge(y, kernel.window)) edge_y += std::abs(term);
      }
      // geometric extrapolation of the boundary-shell mass; the summands
      // decay at least geometrically past a window that already holds the
      // bulk, so this majorizes the discarded tail
      const double tail = std::pow(q, m4) *
                          (edge_x * abs_y + abs_x * edge_y + edge_x * edge_y) *
                          q / (1.0 - q);
      if (tail > tol)
        throw std::runtime_error(
            "slice_functional_residual: window too small, tail estimate " +
            std::to_string(tail));
      lhs.add({m1 - m2 + probe.m, g, probe.t},
              std::pow(q, m4) * sum_x * sum_y);
    }
    GNSVector rhs;
    if (t.k - p.k == m1 && m3 - m4 == m2 - m1 && probe.p == t)
      rhs.add({probe.m + m1 - m2, p, probe.t},
              parity(m2) * std::pow(q, 2 * t.k - m1 - m3));
    const double res = distance(lhs, rhs) / (1.0 + lhs.norm() + rhs.norm());
    if (res > worst) worst = res;
  }
  return worst;
}

PhiElement antipode(const PhiElement& x, const QParam& qp) {
  const double q = qp.base();
  PhiElement out;
  for (auto& [lab, c] : x.coeff)
    out.add({lab.m, lab.t, lab.p},
            c * (leg_phase(lab) * parity(lab.m)) * std::pow(q, lab.m));
  return out;
}

PhiElement unitary_antipode(const PhiElement& x) {
  PhiElement out;
  for (auto& [lab, c] : x.coeff)
    out.add({lab.m, lab.t, lab.p}, c * (leg_phase(lab) * parity(lab.m)));
  return out;
}

PhiElement scaling(const PhiElement& x, cplx z, const QParam& qp) {
  PhiElement out;
  for (auto& [lab, c] : x.coeff)
    out.add(lab, c * q_power_iz(qp.base(), 2 * lab.m, z));
  return out;
}

PhiElement breve_R(const PhiElement& x) {
  PhiElement out;
  for (auto& [lab, c] : x.coeff)
    out.add({lab.m, lab.t, lab.p}, c * leg_phase(lab));
  return out;
}

double breve_R_weight_residual(const std::vector<PhiElement>& samples,
                               const QParam& qp) {
  double worst = 0.0;
  for (auto& x : samples) {
    const double r = std::abs(weight_value(x, qp) - weight_value(breve_R(x), qp));
    if (r > worst) worst = r;
  }
  return worst;
}

double unitary_antipode_operator_residual(const std::vector<GNSIndex>& labels,
                                          const TruncatedSpace& space) {
  double worst = 0.0;
  for (auto& lab : labels) {
    check_label(lab);
    const SparseOperator star =
        adjoint(build_phi(lab.m, lab.p, lab.t, space));
    // I a* I entrywise: (row, col) maps to the mode-flipped pair with both
    // conjugation phases, and the matrix entry conjugates
    SparseOperator conj_mat(space);
    for (int col = 0; col < space.dim(); ++col) {
      const auto [nu, xu] = space.label_of(col);
      // the mode range is symmetric, so the flip never leaves the truncation
      const int col_flip = space.index_of(-nu, xu);
      for (auto& [row, w] : star.column(col_flip)) {
        const auto [nr, xr] = space.label_of(row);
        conj_mat.add_entry(space.index_of(-nr, xr), col,
                           i_phase(nu, xu) * i_phase(nr, xr) * std::conj(w));
      }
    }
    const SparseOperator target =
        scale(leg_phase(lab) * parity(lab.m),
              build_phi(lab.m, lab.t, lab.p, space));
    for (int col = 0; col < space.dim(); ++col) {
      std::map<int, cplx> diff;
      for (auto& [row, w] : conj_mat.column(col)) diff[row] += w;
      for (auto& [row, w] : target.column(col)) diff[row] -= w;
      for (auto& [row, w] : diff)
        if (std::abs(w) > worst) worst = std::abs(w);
    }
  }
  return worst;
}

double scaling_operator_residual(const std::vector<GNSIndex>& labels, cplx z,
                                 const TruncatedSpace& space,
                                 const QParam& qp) {
  const double q = qp.base();
  double worst = 0.0;
  for (auto& lab : labels) {
    check_label(lab);
    const SparseOperator a = build_phi(lab.m, lab.p, lab.t, space);
    const cplx target = q_power_iz(q, 2 * lab.m, z);
    for (int col = 0; col < space.dim(); ++col) {
      const auto [nu, xu] = space.label_of(col);
      const cplx right = q_power_iz(q, 2 * nu, -z);
      for (auto& [row, w] : a.column(col)) {
        const auto [nr, xr] = space.label_of(row);
        const cplx got = q_power_iz(q, 2 * nr, z) * w * right;
        const double r = std::abs(got - target * w);
        if (r > worst) worst = r;
      }
    }
  }
  return worst;
}

}  // namespace suq
