#pragma once

#include "auerbach/canonical.hpp"
#include "auerbach/core.hpp"
#include "auerbach/orthogonality.hpp"

#include <cmath>
#include <vector>

namespace auerbach {

/// The structural constant of the nontrivial l^3_p basis: the unique root
/// in (0, 1] of r^{p-1} + r - 1 = 0.
struct RpRoot {
  PExponent p;
  double value = 0.0;
  double residual = 0.0;           // |r^{p-1} + r - 1|
  double printed_eq_residual = 0.0;  // |1 - r - r^p|, kept for the report
};

/// Bisection bracket then Newton polish on g(r) = r^{p-1} + r - 1.
/// g is strictly increasing on [0, 1] with g(0) = -1, g(1) = 1.
inline RpRoot solve_rp(const PExponent& p) {
  if (!p.is_smooth_finite()) throw std::invalid_argument("solve_rp: requires finite p > 1");
  const double e = p.value() - 1.0;
  auto g = [&](double r) { return std::pow(r, e) + r - 1.0; };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double gp = e * std::pow(r, e - 1.0) + 1.0;
    r -= g(r) / gp;
    r = std::clamp(r, 0.0, 1.0);
  }
  RpRoot out;
  out.p = p;
  out.value = r;
  out.residual = std::abs(g(r));
  out.printed_eq_residual = std::abs(1.0 - r - std::pow(r, p.value()));
  return out;
}

inline BasisMatrix identity_basis(int n, const PExponent& p) {
  if (n < 1) throw std::invalid_argument("identity_basis: n >= 1 required");
  return BasisMatrix(Matrix::Identity(n, n), p);
}

/// 2^{-1/p} [[1,1],[1,-1]], the second (and last) l^2_p basis.
inline BasisMatrix hadamard2_basis(const PExponent& p) {
  if (!p.is_finite()) throw std::invalid_argument("hadamard2_basis: requires finite p >= 1");
  const double c = std::pow(2.0, -1.0 / p.value());
  Matrix m(2, 2);
  m << c, c, c, -c;
  return BasisMatrix(m, p);
}

/// Direct sum on disjoint coordinate blocks. All parts must share p.
inline BasisMatrix block_basis(const std::vector<BasisMatrix>& parts) {
  if (parts.empty()) throw std::invalid_argument("block_basis: no parts");
  int n = 0;
  for (const auto& part : parts) {
    if (part.p != parts.front().p) {
      throw std::invalid_argument("block_basis: parts must share the same p");
    }
    n += part.n();
  }
  Matrix m = Matrix::Zero(n, n);
  int off = 0;
  for (const auto& part : parts) {
    m.block(off, off, part.n(), part.n()) = part.rows;
    off += part.n();
  }
  return BasisMatrix(std::move(m), parts.front().p);
}

/// The nontrivial l^3_p basis: with r = r_p and s = (2 + r^p)^{-1/p},
/// rows s*(1,1,-r), s*(1,-r,1), s*(-r,1,1).
inline BasisMatrix jp_basis(const PExponent& p) {
  if (!p.is_smooth_finite()) throw std::invalid_argument("jp_basis: requires finite p > 1");
  const double r = solve_rp(p).value;
  const double s = std::pow(2.0 + std::pow(r, p.value()), -1.0 / p.value());
  Matrix m(3, 3);
  m << 1, 1, -r,
       1, -r, 1,
       -r, 1, 1;
  return BasisMatrix(s * m, p);
}

/// The one-parameter family of l^3_inf bases, Auerbach for -1 <= t <= 1.
inline BasisMatrix jinf_basis(double t) {
  if (!(t >= -1.0 && t <= 1.0)) throw std::domain_error("jinf_basis: t must lie in [-1, 1]");
  Matrix m(3, 3);
  m << 1, 1, 1,
       -1, 1, 1,
       t, 1, -1;
  return BasisMatrix(m, PExponent::infinity());
}

/// A fourth l^3_p basis outside the identity/block/J_p list, valid for
/// every finite p >= 1: with a = c = 2^{-1/p} and b = 4^{-1/p},
///   (0,  c, -c)
///   (a, -b, -b)
///   (a,  b,  b).
/// Each pair of rows is mutually orthogonal and every dual row is unit in
/// the dual norm (direct algebra: a^p = 2 b^p = 1/2, 2 c^p = 1). The rows
/// mix the axis vector e_1 with the pair vector (0, 1, 1), Hadamard-style,
/// so it is not a coordinate block: row supports are {2, 3, 3}, which no
/// signed row/column permutation can turn into the block pattern {1, 2, 2}.
inline BasisMatrix twisted_block_basis(const PExponent& p) {
  if (!p.is_finite()) throw std::invalid_argument("twisted_block_basis: requires finite p >= 1");
  const double a = std::pow(2.0, -1.0 / p.value());
  const double b = std::pow(4.0, -1.0 / p.value());
  Matrix m(3, 3);
  m << 0, a, -a,
       a, -b, -b,
       a, b, b;
  return BasisMatrix(m, p);
}

/// Sylvester doubling 2^{-1/p} [[B,B],[B,-B]]: an Auerbach basis of
/// l^{2n}_p whenever B is one of l^n_p.
inline BasisMatrix sylvester_double(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  if (!B.p.is_finite()) throw std::invalid_argument("sylvester_double: requires finite p >= 1");
  if (!is_auerbach(B, tol).auerbach) {
    throw std::invalid_argument("sylvester_double: input is not a verified Auerbach basis");
  }
  const int n = B.n();
  const double c = std::pow(2.0, -1.0 / B.p.value());
  Matrix m(2 * n, 2 * n);
  m.block(0, 0, n, n) = B.rows;
  m.block(0, n, n, n) = B.rows;
  m.block(n, 0, n, n) = B.rows;
  m.block(n, n, n, n) = -B.rows;
  return BasisMatrix(c * m, B.p);
}

struct WeighingReport {
  bool is_weighing = false;
  int weight = 0;  // m in W W^T = m I; meaningful only when is_weighing
};

/// Tests entries in {0, +-1} and W W^T = m I exactly over integers.
inline WeighingReport weighing_check(const Eigen::MatrixXi& W) {
  WeighingReport rep;
  if (W.rows() != W.cols() || W.rows() < 1) return rep;
  for (Eigen::Index i = 0; i < W.size(); ++i) {
    const int v = W.data()[i];
    if (v != 0 && v != 1 && v != -1) return rep;
  }
  const Eigen::MatrixXi G = W * W.transpose();
  const int m = G(0, 0);
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
      if (G(i, j) != (i == j ? m : 0)) return rep;
    }
  }
  rep.is_weighing = true;
  rep.weight = m;
  return rep;
}

/// A basis is stationary when its rows, rescaled so the smallest nonzero
/// modulus is 1, land in {0, +-1}^n with mutually Euclidean-orthogonal rows.
inline bool is_stationary(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  const int n = B.n();
  Matrix scaled(n, n);
  for (int i = 0; i < n; ++i) {
    double smallest = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(B.rows(i, j));
      if (a > tol.quantization_step && (smallest == 0.0 || a < smallest)) smallest = a;
    }
    if (smallest == 0.0) return false;
    scaled.row(i) = B.rows.row(i) / smallest;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = scaled(i, j);
      const double r = std::round(v);
      if (std::abs(v - r) > 1e-6 || std::abs(r) > 1.0) return false;
      scaled(i, j) = r;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(scaled.row(i).dot(scaled.row(j))) > 0.5) return false;
    }
  }
  return true;
}

namespace detail {

inline void stationary_dfs(int n, std::vector<Eigen::VectorXi>& rows,
                           const std::vector<Eigen::VectorXi>& candidates, std::size_t start,
                           std::vector<Eigen::MatrixXi>& out) {
  if (static_cast<int>(rows.size()) == n) {
    Eigen::MatrixXi m(n, n);
    for (int i = 0; i < n; ++i) m.row(i) = rows[i].transpose();
    if (m.cast<double>().determinant() != 0.0) out.push_back(m);
    return;
  }
  for (std::size_t c = start; c < candidates.size(); ++c) {
    bool ok = true;
    for (const auto& r : rows) {
      if (r.dot(candidates[c]) != 0) { ok = false; break; }
    }
    if (ok) {
      rows.push_back(candidates[c]);
      stationary_dfs(n, rows, candidates, c + 1, out);
      rows.pop_back();
    }
  }
}

}  // namespace detail

/// Exhaustive census of stationary bases: rows from {0, +-1}^n, pairwise
/// Euclidean-orthogonal, nonsingular, deduplicated by canonical form.
/// Rows are generated sign-normalized and in increasing lexicographic
/// order, which prunes most of the signed-permutation orbit up front.
inline std::vector<CanonicalClass> enumerate_stationary(int n, const ToleranceConfig& tol = {}) {
  if (n < 1 || n > 5) throw std::invalid_argument("enumerate_stationary: 1 <= n <= 5");

  std::vector<Eigen::VectorXi> candidates;
  const int total = static_cast<int>(std::pow(3, n));
  for (int code = 0; code < total; ++code) {
    Eigen::VectorXi v(n);
    int c = code;
    for (int j = 0; j < n; ++j) { v[j] = c % 3 - 1; c /= 3; }
    int first = 0;
    for (int j = 0; j < n; ++j) {
      if (v[j] != 0) { first = v[j]; break; }
    }
    if (first == 1) candidates.push_back(v);  // nonzero, first nonzero entry +1
  }

  std::vector<Eigen::MatrixXi> raw;
  std::vector<Eigen::VectorXi> rows;
  detail::stationary_dfs(n, rows, candidates, 0, raw);

  std::vector<CanonicalClass> classes;
  for (const auto& m : raw) {
    CanonicalClass c = canonical_form(BasisMatrix(m.cast<double>(), PExponent::finite(3)), tol);
    bool seen = false;
    for (const auto& existing : classes) {
      if (same_class(existing, c, tol)) { seen = true; break; }
    }
    if (!seen) classes.push_back(std::move(c));
  }
  return classes;
}

}  // namespace auerbach
