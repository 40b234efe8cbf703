#pragma once

#include "auerbach/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace auerbach {

struct OrthogonalityVerdict {
  bool orthogonal = false;
  /// Criterion residual, or the minimizing lambda on the oracle path.
  double witness = 0.0;
};

/// Birkhoff-James orthogonality x _|_ y via the smooth criterion
/// y . ^p x = 0, scale-normalized so one tolerance fits all inputs.
inline OrthogonalityVerdict bj_orthogonal_smooth(const Vector& x, const Vector& y,
                                                 const PExponent& p,
                                                 const ToleranceConfig& tol = {}) {
  if (!p.is_smooth_finite()) {
    throw std::invalid_argument("bj_orthogonal_smooth: requires finite p > 1");
  }
  if (x.isZero(0.0)) throw std::domain_error("bj_orthogonal_smooth: x must be nonzero");
  const double raw = y.dot(p_map(x, p));
  const double scale = p_norm(y, p) * std::pow(p_norm(x, p), p.value() - 1.0);
  const double res = scale > 0 ? std::abs(raw) / scale : std::abs(raw);
  return {res <= tol.residual_tol, res};
}

/// One-sided derivative test for the polyhedral norms p = 1, infinity:
/// x _|_ y iff both one-sided derivatives of ||x + t y|| at t = 0 are >= 0.
inline OrthogonalityVerdict bj_directional(const Vector& x, const Vector& y,
                                           const PExponent& p,
                                           const ToleranceConfig& tol = {}) {
  if (p.is_smooth_finite()) {
    throw std::invalid_argument("bj_directional: p must be 1 or infinity");
  }
  if (x.isZero(0.0)) throw std::domain_error("bj_directional: x must be nonzero");
  const double ny = p_norm(y, p);
  if (ny == 0.0) return {true, 0.0};

  double dplus, dminus;
  if (p.is_infinity()) {
    const double nx = x.lpNorm<Eigen::Infinity>();
    dplus = -std::numeric_limits<double>::infinity();
    dminus = dplus;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(std::abs(x[i]) - nx) <= tol.residual_tol * nx) {
        const double s = x[i] >= 0 ? 1.0 : -1.0;
        dplus = std::max(dplus, s * y[i]);
        dminus = std::max(dminus, -s * y[i]);
      }
    }
  } else {
    double signed_sum = 0, zero_mass = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) {
        zero_mass += std::abs(y[i]);
      } else {
        signed_sum += (x[i] > 0 ? y[i] : -y[i]);
      }
    }
    dplus = signed_sum + zero_mass;
    dminus = -signed_sum + zero_mass;
  }
  const double worst = std::min(dplus, dminus) / ny;
  return {worst >= -tol.residual_tol, worst};
}

/// Literal implementation of the definition: minimizes the convex function
/// t -> ||x + t y||_p by golden-section search. The acceptance reference
/// every criterion-based test is checked against.
inline OrthogonalityVerdict bj_minimization_oracle(const Vector& x, const Vector& y,
                                                   const PExponent& p,
                                                   const ToleranceConfig& tol = {}) {
  if (x.isZero(0.0) || y.isZero(0.0)) {
    throw std::domain_error("bj_minimization_oracle: x and y must be nonzero");
  }
  const double w = tol.oracle_lambda_window;
  double a = -w, b = w;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return p_norm(x + t * y, p); };
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-9) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a); fd = f(d);
    }
  }
  const double lambda = (a + b) / 2.0;
  const bool orth = f(lambda) >= p_norm(x, p) - tol.residual_tol;
  return {orth, lambda};
}

/// Rows of the biorthogonal functionals: dual_basis(B) . B^T = I.
/// The result lives in l^n_q, q = dual(p).
inline BasisMatrix dual_basis(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  Matrix normalized = B.rows;
  for (int i = 0; i < B.n(); ++i) {
    const double nr = normalized.row(i).norm();
    if (nr == 0.0) throw std::domain_error("dual_basis: singular matrix (zero row)");
    normalized.row(i) /= nr;
  }
  if (std::abs(normalized.determinant()) <= tol.rank_tol) {
    throw std::domain_error("dual_basis: singular matrix");
  }
  Matrix inv_t = B.rows.inverse().transpose();
  return BasisMatrix(std::move(inv_t), B.p.dual());
}

struct AuerbachReport {
  bool auerbach = false;
  bool singular = false;
  double max_row_norm_residual = 0.0;   // | ||v_i||_p - 1 |
  double max_dual_norm_residual = 0.0;  // | ||v^i||_q - 1 |
  double eq_system_residual = 0.0;      // max |B (^pB)^T - I|, finite p > 1 only
  std::string reason;

  double worst() const {
    return std::max({max_row_norm_residual, max_dual_norm_residual, eq_system_residual});
  }
};

/// Dual-criterion Auerbach verifier: unit rows and unit dual rows, valid
/// for every p in [1, inf]. For smooth finite p it additionally
/// cross-checks the gradient-map system B (^pB)^T = I.
inline AuerbachReport is_auerbach(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  AuerbachReport rep;
  const int n = B.n();

  Matrix normalized = B.rows;
  bool zero_row = false;
  for (int i = 0; i < n; ++i) {
    const double nr = normalized.row(i).norm();
    if (nr == 0.0) { zero_row = true; break; }
    normalized.row(i) /= nr;
  }
  if (zero_row || std::abs(normalized.determinant()) <= tol.rank_tol) {
    rep.singular = true;
    rep.reason = "singular";
    return rep;
  }

  for (int i = 0; i < n; ++i) {
    rep.max_row_norm_residual =
        std::max(rep.max_row_norm_residual, std::abs(p_norm(B.row(i), B.p) - 1.0));
  }

  const BasisMatrix D = dual_basis(B, tol);
  for (int i = 0; i < n; ++i) {
    rep.max_dual_norm_residual =
        std::max(rep.max_dual_norm_residual, std::abs(p_norm(D.row(i), D.p) - 1.0));
  }

  if (B.p.is_smooth_finite()) {
    Matrix G(n, n);
    for (int i = 0; i < n; ++i) G.row(i) = p_map(B.row(i), B.p).transpose();
    rep.eq_system_residual =
        (B.rows * G.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  }

  rep.auerbach = rep.worst() <= tol.residual_tol;
  if (!rep.auerbach) rep.reason = "residual above tolerance";
  return rep;
}

/// Criticality of the determinant on the product of unit spheres: for each
/// row, the sine of the angle between the cofactor vector (the det gradient
/// with respect to that row) and ^p(row). Zero iff Auerbach; invariant
/// under determinant scale, so one tolerance fits every matrix.
inline double criticality_residual(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  if (!B.p.is_smooth_finite()) {
    throw std::invalid_argument("criticality_residual: requires finite p > 1");
  }
  const int n = B.n();
  const double det = B.rows.determinant();
  Matrix normalized = B.rows;
  for (int i = 0; i < n; ++i) {
    const double nr = normalized.row(i).norm();
    if (nr > 0) normalized.row(i) /= nr;
  }
  if (std::abs(normalized.determinant()) <= tol.rank_tol) {
    throw std::domain_error("criticality_residual: singular matrix");
  }
  const Matrix cof = det * B.rows.inverse().transpose();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    Vector c = cof.row(i).transpose();
    Vector g = p_map(B.row(i), B.p);
    c /= c.norm();
    g /= g.norm();
    // |sin(angle)| as the rejection of c from the line through g; computing
    // it as sqrt(1 - cos^2) cancels catastrophically and floors near 1e-8.
    // The rejection norm is symmetric in the sign of c, which matters
    // because the cofactor rows flip sign with the determinant.
    worst = std::max(worst, (c - c.dot(g) * g).norm());
  }
  return worst;
}

}  // namespace auerbach
