#pragma once

#include "auerbach/canonical.hpp"
#include "auerbach/constructions.hpp"
#include "auerbach/core.hpp"
#include "auerbach/orthogonality.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace auerbach {

enum class L3VectorClass { Axis, TwoPoint, JpType, None };

/// Matches |v| (sorted) against the three admissible l^3_p row templates:
/// (0,0,1), (0,c,c) with c = 2^{-1/p}, and (r_p, 1, 1)/(2 + r_p^p)^{1/p}.
inline L3VectorClass classify_l3_vector(const Vector& v, const PExponent& p,
                                        const ToleranceConfig& tol = {}) {
  if (!p.is_smooth_finite() || p.value() == 2.0) {
    throw std::invalid_argument("classify_l3_vector: finite p > 1, p != 2 required");
  }
  if (v.size() != 3) throw std::invalid_argument("classify_l3_vector: dimension 3 required");
  if (std::abs(p_norm(v, p) - 1.0) > tol.residual_tol) {
    throw std::domain_error("classify_l3_vector: input must have unit p-norm");
  }
  Eigen::Vector3d a = v.cwiseAbs();
  std::sort(a.data(), a.data() + 3);

  auto matches = [&](double x, double y, double z) {
    return std::abs(a[0] - x) <= tol.quantization_step &&
           std::abs(a[1] - y) <= tol.quantization_step &&
           std::abs(a[2] - z) <= tol.quantization_step;
  };
  const double c = std::pow(2.0, -1.0 / p.value());
  const double r = solve_rp(p).value;
  const double s = std::pow(2.0 + std::pow(r, p.value()), -1.0 / p.value());
  if (matches(0, 0, 1)) return L3VectorClass::Axis;
  if (matches(0, c, c)) return L3VectorClass::TwoPoint;
  if (matches(r * s, s, s)) return L3VectorClass::JpType;
  return L3VectorClass::None;
}

enum class L3Label { Identity, BlockH2, Jp, JinfFamily, Other, OrthogonalGroupP2 };

inline std::string to_string(L3Label l) {
  switch (l) {
    case L3Label::Identity: return "IDENTITY";
    case L3Label::BlockH2: return "BLOCK_H2";
    case L3Label::Jp: return "JP";
    case L3Label::JinfFamily: return "JINF_FAMILY";
    case L3Label::Other: return "OTHER";
    case L3Label::OrthogonalGroupP2: return "ORTHOGONAL_GROUP_P2";
  }
  return "OTHER";
}

struct L3Classification {
  L3Label label = L3Label::Other;
  double t = 0.0;  // recovered parameter, JINF_FAMILY only (up to sign)
};

namespace detail {

inline L3Classification classify_l3_infinity(const BasisMatrix& B, const ToleranceConfig& tol) {
  const CanonicalClass c = canonical_form(B, tol);
  if (same_class(c, canonical_form(identity_basis(3, B.p), tol), tol)) {
    return {L3Label::Identity, 0.0};
  }
  Matrix block(3, 3);
  block << 1, 0, 0, 0, 1, 1, 0, 1, -1;
  if (same_class(c, canonical_form(BasisMatrix(block, B.p), tol), tol)) {
    return {L3Label::BlockH2, 0.0};
  }
  // J_inf(t) membership: all entries are +-1 except possibly one, whose
  // modulus is the family parameter. Equivalence can flip t's sign, so t
  // is recovered as a modulus.
  double t = 1.0;
  int off_grid = 0;
  for (Eigen::Index i = 0; i < 9; ++i) {
    const double a = std::abs(B.rows.data()[i]);
    if (std::abs(a - 1.0) > 100 * tol.quantization_step) {
      ++off_grid;
      t = a;
    }
  }
  if (off_grid <= 1 && t <= 1.0 &&
      same_class(c, canonical_form(jinf_basis(t), tol), tol)) {
    return {L3Label::JinfFamily, t};
  }
  return {L3Label::Other, 0.0};
}

}  // namespace detail

/// Classifies a verified l^3 basis against the complete lists: the three
/// matrices for finite p != 2, the three types (one a family) at p = inf,
/// the dual picture at p = 1, and the orthogonal-group verdict at p = 2.
/// An unmatched verified basis comes back OTHER, never an error.
inline L3Classification classify_l3_basis(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  if (B.n() != 3) throw std::invalid_argument("classify_l3_basis: n = 3 required");

  if (B.p.is_infinity()) return detail::classify_l3_infinity(B, tol);
  if (B.p.is_one()) {
    const BasisMatrix D = dual_basis(B, tol);
    return detail::classify_l3_infinity(D, tol);
  }
  if (B.p.value() == 2.0) return {L3Label::OrthogonalGroupP2, 0.0};

  const CanonicalClass c = canonical_form(B, tol);
  if (same_class(c, canonical_form(identity_basis(3, B.p), tol), tol)) {
    return {L3Label::Identity, 0.0};
  }
  if (same_class(c, canonical_form(block_basis({identity_basis(1, B.p), hadamard2_basis(B.p)}), tol),
                 tol)) {
    return {L3Label::BlockH2, 0.0};
  }
  if (same_class(c, canonical_form(jp_basis(B.p), tol), tol)) return {L3Label::Jp, 0.0};
  return {L3Label::Other, 0.0};
}

/// A unit vector is spherical when it is collinear with its supporting
/// functional ^p x, i.e. all nonzero components share one modulus.
inline bool is_spherical_point(const Vector& x, const PExponent& p,
                               const ToleranceConfig& tol = {}) {
  if (!p.is_smooth_finite() || p.value() == 2.0) {
    throw std::invalid_argument("is_spherical_point: finite p > 1, p != 2 required");
  }
  double level = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (a <= tol.quantization_step) continue;
    if (level == 0.0) {
      level = a;
    } else if (std::abs(a - level) > tol.quantization_step) {
      return false;
    }
  }
  return level > 0.0;
}

namespace detail {

/// Basis (rows) of the subspace of span(R) supported inside the column
/// set `keep` (complement coordinates forced to zero).
inline Matrix restrict_span(const Matrix& R, const std::vector<int>& zero_cols, double rank_tol) {
  if (zero_cols.empty()) return R;
  Matrix C(zero_cols.size(), R.rows());
  for (std::size_t a = 0; a < zero_cols.size(); ++a) C.row(a) = R.col(zero_cols[a]).transpose();
  Eigen::FullPivLU<Matrix> lu(C);
  lu.setThreshold(rank_tol);
  const Matrix K = lu.kernel();  // columns span {c : C c = 0}
  if (lu.dimensionOfKernel() == 0) return Matrix(0, R.cols());
  return K.transpose() * R;
}

inline bool decomposes_to_lp(const Matrix& R, const ToleranceConfig& tol) {
  const int m = static_cast<int>(R.rows());
  if (m <= 1) return true;  // a line is isometric to l^1_p

  std::vector<int> support;
  for (Eigen::Index j = 0; j < R.cols(); ++j) {
    if (R.col(j).cwiseAbs().maxCoeff() > tol.rank_tol) support.push_back(static_cast<int>(j));
  }
  if (static_cast<int>(support.size()) == m) return true;  // full coordinate subspace

  // Exhaustive split of the support into two complementary coordinate
  // blocks; fix the first support coordinate on one side to halve the scan.
  const int s = static_cast<int>(support.size());
  // mask = 0 is the valid split {support[0]} vs the rest; only the
  // all-ones mask (empty right side) is skipped via the size guard below.
  for (unsigned mask = 0; mask < (1u << (s - 1)); ++mask) {
    std::vector<int> in_zero, out_zero;
    for (int a = 0; a < s; ++a) {
      const bool left = a == 0 || (mask & (1u << (a - 1)));
      (left ? out_zero : in_zero).push_back(support[a]);
    }
    const Matrix left = restrict_span(R, in_zero, tol.rank_tol);
    const Matrix right = restrict_span(R, out_zero, tol.rank_tol);
    if (left.rows() + right.rows() != m || left.rows() == 0 || right.rows() == 0) continue;
    if (decomposes_to_lp(left, tol) && decomposes_to_lp(right, tol)) return true;
  }
  return false;
}

}  // namespace detail

/// Decides whether span(vectors) is isometrically isomorphic to l^m_p,
/// i.e. admits a disjoint-support basis, by exhaustive coordinate-subset
/// decomposition (n <= 8).
inline bool subspace_isometric_lp(const std::vector<Vector>& vectors, const PExponent& p,
                                  const ToleranceConfig& tol = {}) {
  if (vectors.empty()) throw std::invalid_argument("subspace_isometric_lp: no vectors");
  if (!p.is_smooth_finite() || p.value() == 2.0) {
    throw std::invalid_argument("subspace_isometric_lp: finite p > 1, p != 2 required");
  }
  const int m = static_cast<int>(vectors.size());
  const int n = static_cast<int>(vectors.front().size());
  if (n > 8) throw std::invalid_argument("subspace_isometric_lp: n <= 8 required");
  Matrix R(m, n);
  for (int i = 0; i < m; ++i) {
    if (vectors[i].size() != n) throw std::invalid_argument("subspace_isometric_lp: ragged input");
    R.row(i) = vectors[i].transpose();
  }
  Eigen::FullPivLU<Matrix> lu(R);
  lu.setThreshold(tol.rank_tol);
  if (lu.rank() != m) throw std::domain_error("subspace_isometric_lp: vectors must be independent");
  return detail::decomposes_to_lp(R, tol);
}

/// Strong Auerbach: every subset of rows spans a subspace isometric to
/// l^m_p. All 2^n - 1 subsets are checked (singletons are trivially true).
inline bool is_strong_auerbach(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  if (!B.p.is_smooth_finite() || B.p.value() == 2.0) {
    throw std::invalid_argument("is_strong_auerbach: finite p > 1, p != 2 required");
  }
  if (B.n() > 8) throw std::invalid_argument("is_strong_auerbach: n <= 8 required");
  if (!is_auerbach(B, tol).auerbach) {
    throw std::invalid_argument("is_strong_auerbach: input is not a verified Auerbach basis");
  }
  const int n = B.n();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if ((mask & (mask - 1)) == 0) continue;  // singleton
    std::vector<Vector> subset;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) subset.push_back(B.row(i));
    }
    if (!subspace_isometric_lp(subset, B.p, tol)) return false;
  }
  return true;
}

enum class StrongVectorClass { Axis, Pair, None };

///// The two admissible strong-basis row templates, up to signed permutation:
/// (1, 0, ..., 0) and (2^{-1/p}, 2^{-1/p}, 0, ..., 0).
inline StrongVectorClass classify_strong_vector(const Vector& v, const PExponent& p,
                                                const ToleranceConfig& tol = {}) {
  if (!p.is_smooth_finite()) {
    throw std::invalid_argument("classify_strong_vector: finite p > 1 required");
  }
  Vector a = v.cwiseAbs();
  std::sort(a.data(), a.data() + a.size(), std::greater<double>());
  const double c = std::pow(2.0, -1.0 / p.value());
  auto near = [&](double x, double y) { return std::abs(x - y) <= tol.quantization_step; };
  bool axis = near(a[0], 1.0);
  bool pair = a.size() >= 2 && near(a[0], c) && near(a[1], c);
  for (Eigen::Index i = (pair ? 2 : 1); i < a.size(); ++i) {
    if (!near(a[i], 0.0)) return StrongVectorClass::None;
  }
  if (axis) return StrongVectorClass::Axis;
  if (pair) return StrongVectorClass::Pair;
  return StrongVectorClass::None;
}

struct LowerBoundReport {
  long count = 0;  // row-equivalence-only classes
  long bound = 0;  // n(n-1)/2 + 1
  bool satisfied = false;
};

/// Expands canonical (row-and-column) classes into row-equivalence-only
/// classes — bases identified only by row permutation and row signs — and
/// checks the count against the critical-point lower bound n(n-1)/2 + 1.
inline LowerBoundReport ww_lower_bound_check(const std::vector<CanonicalClass>& classes, int n,
                                             const ToleranceConfig& tol = {}) {
  LowerBoundReport rep;
  rep.bound = static_cast<long>(n) * (n - 1) / 2 + 1;
  if (classes.empty()) return rep;

  std::vector<Matrix> distinct;
  std::vector<int> perm(n);
  for (const auto& cls : classes) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        Matrix m(n, n);
        for (int j = 0; j < n; ++j) {
          m.col(j) = cls.representative.col(perm[j]) * ((mask & (1u << j)) ? -1.0 : 1.0);
        }
        m = detail::normalize_rows(std::move(m));
        bool seen = false;
        for (const auto& d : distinct) {
          if ((d - m).cwiseAbs().maxCoeff() <= 100 * tol.quantization_step) { seen = true; break; }
        }
        if (!seen) distinct.push_back(std::move(m));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  rep.count = static_cast<long>(distinct.size());
  rep.satisfied = rep.count >= rep.bound;
  return rep;
}

}  // namespace auerbach
