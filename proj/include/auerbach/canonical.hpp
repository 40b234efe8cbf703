#pragma once

#include "auerbach/core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace auerbach {

/// Orbit representative of a basis under negating/permuting rows and
/// columns, quantized so that solver noise cannot split a class.
struct CanonicalClass {
  Matrix representative;
  PExponent p;
  std::string label;      // IDENTITY | BLOCK_H2 | JP | JINF_FAMILY | OTHER | ""
  double residual = 0.0;  // residual of the full-precision basis behind the representative

  std::string key() const {
    std::ostringstream os;
    os.precision(17);
    for (Eigen::Index i = 0; i < representative.rows(); ++i) {
      for (Eigen::Index j = 0; j < representative.cols(); ++j) {
        os << representative(i, j) << (j + 1 < representative.cols() ? " " : ";");
      }
    }
    return os.str();
  }
};

namespace detail {

inline Matrix quantize(const Matrix& m, double step) {
  Matrix q = m;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    double v = std::round(q.data()[i] / step) * step;
    if (v == 0.0) v = 0.0;  // normalize -0
    q.data()[i] = v;
  }
  return q;
}

inline bool lex_less(const Matrix& a, const Matrix& b) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    }
  }
  return false;
}

inline bool row_lex_less(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (a[j] != b[j]) return a[j] < b[j];
  }
  return false;
}

/// Sign-normalize each row (first nonzero entry made positive) then sort
/// rows lexicographically. This is the row-equivalence canonical form.
inline Matrix normalize_rows(Matrix m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) {
        if (m(i, j) < 0) m.row(i) = -m.row(i);
        break;
      }
    }
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return row_lex_less(m.row(a), m.row(b));
  });
  Matrix out(n, m.cols());
  for (Eigen::Index i = 0; i < n; ++i) out.row(i) = m.row(order[i]);
  return out;
}

}  // namespace detail

/// Lexicographic minimum over all 2^n n! signed column permutations,
/// with rows sign-normalized and sorted. Exact orbit search; n <= 6.
inline CanonicalClass canonical_form(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  const int n = B.n();
  if (n > 6) throw std::invalid_argument("canonical_form: n > 6 not supported");

  const Matrix Q = detail::quantize(B.rows, tol.quantization_step);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  Matrix best;
  bool have_best = false;
  do {
    Matrix permuted(n, n);
    for (int j = 0; j < n; ++j) permuted.col(j) = Q.col(perm[j]);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Matrix m = permuted;
      for (int j = 0; j < n; ++j) {
        if (mask & (1u << j)) m.col(j) = -m.col(j);
      }
      m = detail::normalize_rows(std::move(m));
      if (!have_best || detail::lex_less(m, best)) {
        best = m;
        have_best = true;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Column/row negations reintroduce -0.0 after quantization; scrub it so
  // representatives serialize identically.
  for (Eigen::Index i = 0; i < best.size(); ++i) {
    if (best.data()[i] == 0.0) best.data()[i] = 0.0;
  }
  return {best, B.p, "", 0.0};
}

/// Entrywise comparison of canonical representatives with slack above the
/// quantization grid, so converged solutions straddling a grid boundary
/// still merge.
inline bool same_class(const CanonicalClass& a, const CanonicalClass& b,
                       const ToleranceConfig& tol = {}) {
  if (a.representative.rows() != b.representative.rows()) return false;
  return (a.representative - b.representative).cwiseAbs().maxCoeff()
         <= 100 * tol.quantization_step;
}

}  // namespace auerbach
