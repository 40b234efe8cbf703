#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace auerbach {

/// All numerical thresholds used by the verifiers, the canonicalizer and
/// the Newton solver. Defaults are the ones every test and the CLI use.
struct ToleranceConfig {
  double residual_tol = 1e-10;
  double rank_tol = 1e-9;
  double quantization_step = 1e-8;
  int newton_max_iter = 200;
  double oracle_lambda_window = 4.0;  // golden-section search over [-w, w]

  void validate() const {
    if (residual_tol <= 0 || rank_tol <= 0 || quantization_step <= 0 ||
        newton_max_iter <= 0 || oracle_lambda_window <= 0) {
      throw std::invalid_argument("ToleranceConfig: all fields must be positive");
    }
  }
};

/// The norm exponent p in [1, inf]. ONE and INFINITY are distinguished
/// variants, never sentinel floats: downstream code dispatches on smooth
/// (1 < p < inf) versus polyhedral (p in {1, inf}) norms.
class PExponent {
 public:
  enum class Kind { One, Finite, Infinity };

  PExponent() = default;

  static PExponent one() { return PExponent(Kind::One, 1.0); }
  static PExponent infinity() { return PExponent(Kind::Infinity, 0.0); }

  static PExponent finite(double p) {
    if (!std::isfinite(p) || p < 1.0) {
      throw std::invalid_argument("PExponent: p must be >= 1");
    }
    if (p == 1.0) return one();
    return PExponent(Kind::Finite, p);
  }

  /// Accepts "1", "inf" (also "infinity", "oo") or a decimal literal.
  static PExponent parse(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "oo" || s == "Inf") return infinity();
    if (s == "1") return one();
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("PExponent: cannot parse '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("PExponent: trailing junk in '" + s + "'");
    return finite(v);
  }

  Kind kind() const { return kind_; }
  bool is_one() const { return kind_ == Kind::One; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  bool is_finite() const { return kind_ != Kind::Infinity; }
  /// 1 < p < inf, where the norm is smooth and the gradient map exists.
  bool is_smooth_finite() const { return kind_ == Kind::Finite; }

  double value() const {
    switch (kind_) {
      case Kind::One: return 1.0;
      case Kind::Finite: return value_;
      case Kind::Infinity: break;
    }
    throw std::logic_error("PExponent: INFINITY has no finite value");
  }

  PExponent dual() const {
    switch (kind_) {
      case Kind::One: return infinity();
      case Kind::Infinity: return one();
      case Kind::Finite: return finite(value_ / (value_ - 1.0));
    }
    throw std::logic_error("PExponent: bad kind");
  }

  std::string str() const {
    if (is_one()) return "1";
    if (is_infinity()) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
  }

  bool operator==(const PExponent& o) const {
    return kind_ == o.kind_ && (kind_ != Kind::Finite || value_ == o.value_);
  }
  bool operator!=(const PExponent& o) const { return !(*this == o); }

 private:
  PExponent(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_ = Kind::Finite;
  double value_ = 2.0;
};

inline PExponent dual_exponent(const PExponent& p) { return p.dual(); }

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// ||x||_p for all p in [1, inf].
inline double p_norm(const Vector& x, const PExponent& p) {
  if (p.is_infinity()) return x.lpNorm<Eigen::Infinity>();
  if (p.is_one()) return x.lpNorm<1>();
  const double pv = p.value();
  if (pv == 2.0) return x.norm();
  double s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), pv);
  return std::pow(s, 1.0 / pv);
}

/// sign(x)|x|^e with the 0 -> 0 convention, so negative exponents at zero
/// components never occur.
inline double signed_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  const double m = std::pow(std::abs(x), e);
  return x < 0 ? -m : m;
}

/// The gradient map: component j is x_j |x_j|^{p-2}. Defined for finite
/// p > 1 only; at p = 1 or infinity callers use one-sided derivatives.
inline Vector p_map(const Vector& x, const PExponent& p) {
  if (!p.is_smooth_finite()) {
    throw std::invalid_argument("p_map: requires finite p > 1");
  }
  const double pv = p.value();
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = signed_pow(x[i], pv - 1.0);
  return g;
}

/// The semi-inner product [y, x] = (sum y_j x_j |x_j|^{p-2}) / ||x||^{p-2},
/// the unique one compatible with the p-norm for finite p > 1.
inline double semi_inner_product(const Vector& y, const Vector& x, const PExponent& p) {
  if (!p.is_smooth_finite()) {
    throw std::invalid_argument("semi_inner_product: requires finite p > 1");
  }
  if (x.isZero(0.0)) throw std::domain_error("semi_inner_product: x must be nonzero");
  const double nx = p_norm(x, p);
  return y.dot(p_map(x, p)) / std::pow(nx, p.value() - 2.0);
}

/// An n x n matrix whose rows are candidate (or verified) basis vectors of
/// l^n_p. Immutable by convention: operations return new instances.
struct BasisMatrix {
  Matrix rows;
  PExponent p;

  BasisMatrix() = default;
  BasisMatrix(Matrix m, PExponent pe) : rows(std::move(m)), p(pe) {
    if (rows.rows() != rows.cols() || rows.rows() < 1) {
      throw std::invalid_argument("BasisMatrix: matrix must be square, n >= 1");
    }
    if (!rows.allFinite()) throw std::invalid_argument("BasisMatrix: entries must be finite");
  }

  int n() const { return static_cast<int>(rows.rows()); }
  Vector row(int i) const { return rows.row(i).transpose(); }
};

}  // namespace auerbach
