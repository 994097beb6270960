#pragma once

#include <map>
#include <utility>
#include <vector>

#include "suq/lattice.hpp"
#include "suq/qseries.hpp"

namespace suq {

// truncation of L2(T) (x) l2(I_q): Fourier modes |m| <= mode_max, points in window
struct TruncatedSpace {
  int mode_max = 0;
  LatticeWindow window;

  TruncatedSpace() = default;
  TruncatedSpace(int modes, LatticeWindow win) : mode_max(modes), window(win) {}

  int dim() const;
  bool contains(int m, const LatticePoint& p) const;
  // dense index, -1 when (m, p) lies outside the truncation
  int index_of(int m, const LatticePoint& p) const;
  std::pair<int, LatticePoint> label_of(int idx) const;
  const std::vector<LatticePoint>& points() const;

  bool operator==(const TruncatedSpace& o) const {
    return mode_max == o.mode_max && window.k_min == o.window.k_min &&
           window.k_max == o.window.k_max &&
           window.negative_k_max == o.window.negative_k_max;
  }

 private:
  mutable std::vector<LatticePoint> pts_;
  mutable std::map<LatticePoint, int> pt_index_;
  void ensure_points() const;
};

void validate(const TruncatedSpace& space);

struct BasisVector {
  int m = 0;
  LatticePoint p;
};

// column-compressed endomorphism of a TruncatedSpace
class SparseOperator {
 public:
  explicit SparseOperator(const TruncatedSpace& space);
  static SparseOperator identity(const TruncatedSpace& space);

  const TruncatedSpace& space() const { return space_; }
  void add_entry(int row, int col, cplx w);
  const std::vector<std::pair<int, cplx>>& column(int col) const;
  cplx entry(int row, int col) const;
  int nnz() const;

 private:
  TruncatedSpace space_;
  std::vector<std::vector<std::pair<int, cplx>>> cols_;
};

enum class Generator { alpha, gamma, e, u, w };

// f = sum f_{n,t} zeta^n (x) delta_t as a finite coefficient table
using ModeTable = std::map<std::pair<int, LatticePoint>, cplx>;

SparseOperator build_generator(Generator which, const TruncatedSpace& space,
                               const QParam& qp);
// rho_p shifts the lattice leg by p^{-1}; p ranges over all of +-q^Z
SparseOperator build_rho(const LatticePoint& p, const TruncatedSpace& space);
SparseOperator build_mult(const ModeTable& f, const TruncatedSpace& space);
// T_p f, the table conjugation appearing in rho_p M_f = M_{T_p f} rho_p
ModeTable translate_table(const LatticePoint& p, const ModeTable& f);
SparseOperator build_phi(int m, const LatticePoint& p, const LatticePoint& t,
                         const TruncatedSpace& space);

SparseOperator compose(const SparseOperator& a, const SparseOperator& b);
SparseOperator adjoint(const SparseOperator& a);
SparseOperator add(const SparseOperator& a, const SparseOperator& b);
SparseOperator scale(cplx c, const SparseOperator& a);
std::vector<cplx> apply(const SparseOperator& a, const std::vector<cplx>& v);

// entrywise-relative defect max_{ij} |L_ij - R_ij| / (1 + max(|L_ij|, |R_ij|)),
// quantified over columns at distance >= budget from every window edge (shift
// relations necessarily break within `budget` steps of the truncation boundary)
double interior_residual(const SparseOperator& lhs, const SparseOperator& rhs,
                         int budget);

// worst interior residual over the defining relations of the (alpha, gamma, e)
// algebra, the rho calculus, and the multiplication-operator exchange rule
double relations_residual(const TruncatedSpace& space, const QParam& qp);

}  // namespace suq
