#pragma once

#include "auerbach/canonical.hpp"
#include "auerbach/constructions.hpp"
#include "auerbach/core.hpp"
#include "auerbach/orthogonality.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace auerbach {

enum class SolveStatus { Converged, Diverged, SingularJacobian, NearP2Refused };

struct SolveReport {
  std::optional<BasisMatrix> solution;
  double residual = 0.0;  // max |x_i . ^p x_j - delta_ij|
  int iterations = 0;
  std::uint64_t seed = 0;
  SolveStatus status = SolveStatus::Diverged;
};

/// Entry (i, j) of the Auerbach system: x^(i) . ^p x^(j) - delta_ij.
inline Matrix system_residual(const Matrix& X, const PExponent& p) {
  if (!p.is_smooth_finite()) throw std::invalid_argument("system_residual: finite p > 1 required");
  const int n = static_cast<int>(X.rows());
  Matrix G(n, n);
  for (int j = 0; j < n; ++j) G.row(j) = p_map(X.row(j).transpose(), p).transpose();
  return X * G.transpose() - Matrix::Identity(n, n);
}

/// Analytic Jacobian of the system. Unknown (i, k) maps to column i*n + k,
/// equation (i, j) to row i*n + j.
inline Matrix system_jacobian(const Matrix& X, const PExponent& p) {
  if (!p.is_smooth_finite()) throw std::invalid_argument("system_jacobian: finite p > 1 required");
  const int n = static_cast<int>(X.rows());
  const double pv = p.value();
  Matrix G(n, n);   // G(j, k) = ^p x^(j)_k
  Matrix Gd(n, n);  // Gd(j, k) = |x^(j)_k|^{p-2}
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      G(j, k) = signed_pow(X(j, k), pv - 1.0);
      Gd(j, k) = X(j, k) == 0.0 ? 0.0 : std::pow(std::abs(X(j, k)), pv - 2.0);
    }
  }
  Matrix J = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      if (i == j) {
        for (int k = 0; k < n; ++k) J(row, i * n + k) = pv * G(i, k);
      } else {
        for (int k = 0; k < n; ++k) {
          J(row, i * n + k) = G(j, k);
          J(row, j * n + k) = (pv - 1.0) * Gd(j, k) * X(i, k);
        }
      }
    }
  }
  return J;
}

/// Damped Newton (Armijo backtracking on ||F||^2) on the Auerbach system.
/// Deterministic given the seed matrix. Requires p > 2: the (1, 2) range
/// is obtained by dualizing p > 2 solutions, and p within 0.05 of 2 is
/// refused because the solution set there is a continuum.
inline SolveReport newton_solve(const BasisMatrix& seed_matrix, const ToleranceConfig& tol = {},
                                std::uint64_t seed_id = 0) {
  SolveReport rep;
  rep.seed = seed_id;
  const PExponent p = seed_matrix.p;
  if (!p.is_smooth_finite() || std::abs(p.value() - 2.0) < 0.05) {
    rep.status = SolveStatus::NearP2Refused;
    return rep;
  }
  if (p.value() < 2.0) {
    throw std::invalid_argument("newton_solve: p < 2 not solved directly; dualize from p > 2");
  }

  const int n = seed_matrix.n();
  Matrix X = seed_matrix.rows;
  Matrix F = system_residual(X, p);
  const double stop_tol = std::min(tol.residual_tol * 1e-3, 1e-13);

  for (int iter = 0; iter < tol.newton_max_iter; ++iter) {
    rep.residual = F.cwiseAbs().maxCoeff();
    if (rep.residual <= stop_tol) break;

    const Matrix J = system_jacobian(X, p);
    Eigen::FullPivLU<Matrix> lu(J);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
      rep.status = SolveStatus::SingularJacobian;
      rep.iterations = iter;
      return rep;
    }
    // F is column-major; re-pack row-major to match the equation
    // indexing of system_jacobian.
    Eigen::VectorXd fvec(n * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) fvec[i * n + j] = F(i, j);
    }
    const Eigen::VectorXd step = lu.solve(-fvec);

    const double phi0 = fvec.squaredNorm();
    double alpha = 1.0;
    Matrix Xn;
    Matrix Fn;
    bool accepted = false;
    while (alpha >= 1e-12) {
      Xn = X;
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) Xn(i, k) += alpha * step[i * n + k];
      }
      Fn = system_residual(Xn, p);
      if (Fn.squaredNorm() <= (1.0 - 2e-4 * alpha) * phi0) { accepted = true; break; }
      alpha *= 0.5;
    }
    rep.iterations = iter + 1;
    if (!accepted) break;
    X = std::move(Xn);
    F = std::move(Fn);
  }

  rep.residual = F.cwiseAbs().maxCoeff();
  if (rep.residual <= tol.residual_tol) {
    BasisMatrix sol(X, p);
    if (is_auerbach(sol, tol).auerbach) {
      rep.solution = std::move(sol);
      rep.status = SolveStatus::Converged;
      return rep;
    }
  }
  rep.status = SolveStatus::Diverged;
  return rep;
}

namespace detail {

/// Known constructions for a given dimension, used both as seed templates
/// and as labels for the census output.
inline std::vector<std::pair<BasisMatrix, std::string>> known_constructions(int n,
                                                                            const PExponent& p) {
  std::vector<std::pair<BasisMatrix, std::string>> known;
  known.emplace_back(identity_basis(n, p), "IDENTITY");
  if (n == 2) {
    known.emplace_back(hadamard2_basis(p), "BLOCK_H2");
  } else if (n == 3) {
    known.emplace_back(block_basis({identity_basis(1, p), hadamard2_basis(p)}), "BLOCK_H2");
    known.emplace_back(jp_basis(p), "JP");
    known.emplace_back(twisted_block_basis(p), "OTHER");
  } else if (n == 4) {
    known.emplace_back(block_basis({identity_basis(2, p), hadamard2_basis(p)}), "BLOCK_H2");
    known.emplace_back(block_basis({hadamard2_basis(p), hadamard2_basis(p)}), "BLOCK_H2");
    known.emplace_back(block_basis({identity_basis(1, p), jp_basis(p)}), "OTHER");
    known.emplace_back(sylvester_double(hadamard2_basis(p)), "OTHER");
    known.emplace_back(block_basis({identity_basis(1, p), twisted_block_basis(p)}), "OTHER");
  }
  return known;
}

inline Matrix random_signed_perm(int n, std::mt19937_64& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix P = Matrix::Zero(n, n);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int j = 0; j < n; ++j) P(perm[j], j) = coin(rng) ? 1.0 : -1.0;
  return P;
}

inline void normalize_rows_to_unit(Matrix& m, const PExponent& p) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double nr = p_norm(m.row(i).transpose(), p);
    if (nr > 0) m.row(i) /= nr;
  }
}

}  // namespace detail

/// Multistart census: Newton from random row-normalized seeds plus
/// perturbed known constructions and their signed permutations (random
/// starts alone rarely land in the J_p basin at large p). Best effort:
/// monotone in num_seeds, deterministic for a fixed rng_seed.
inline std::vector<CanonicalClass> multistart_enumerate(int n, const PExponent& p, int num_seeds,
                                                        std::uint64_t rng_seed,
                                                        const ToleranceConfig& tol = {}) {
  if (!p.is_smooth_finite() || p.value() <= 2.0) {
    throw std::invalid_argument("multistart_enumerate: finite p > 2 required");
  }
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.05);

  const auto known = detail::known_constructions(n, p);
  std::vector<Matrix> seeds;
  for (const auto& [k, label] : known) {
    seeds.push_back(k.rows);
    for (int rep = 0; rep < 8; ++rep) {
      Matrix m = k.rows * detail::random_signed_perm(n, rng);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] += noise(rng);
      detail::normalize_rows_to_unit(m, p);
      seeds.push_back(std::move(m));
    }
  }
  // Stationary bases ({0, +-1} patterns) are Auerbach for every p but some
  // have tiny random basins (the weighing patterns in particular), so seed
  // the whole stationary census deterministically.
  if (n <= 5) {
    for (const auto& st : enumerate_stationary(n, tol)) {
      Matrix m = st.representative;
      detail::normalize_rows_to_unit(m, p);
      seeds.push_back(std::move(m));
    }
  }
  while (static_cast<int>(seeds.size()) < num_seeds) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = unit(rng);
    detail::normalize_rows_to_unit(m, p);
    seeds.push_back(std::move(m));
  }

  std::vector<CanonicalClass> classes;
  std::uint64_t id = 0;
  for (const auto& s : seeds) {
    const SolveReport rep = newton_solve(BasisMatrix(s, p), tol, id++);
    if (rep.status != SolveStatus::Converged) continue;
    CanonicalClass c = canonical_form(*rep.solution, tol);
    c.residual = is_auerbach(*rep.solution, tol).worst();
    bool seen = false;
    for (const auto& existing : classes) {
      if (same_class(existing, c, tol)) { seen = true; break; }
    }
    if (!seen) classes.push_back(std::move(c));
  }

  for (auto& c : classes) {
    c.label = "OTHER";
    for (const auto& [k, label] : known) {
      if (same_class(c, canonical_form(k, tol), tol)) {
        c.label = label;
        break;
      }
    }
  }
  std::sort(classes.begin(), classes.end(), [](const CanonicalClass& a, const CanonicalClass& b) {
    return detail::lex_less(a.representative, b.representative);
  });
  return classes;
}

struct ContinuationTrace {
  std::vector<double> p_grid;
  std::vector<int> class_counts;          // distinct surviving classes per grid point
  std::vector<bool> survived;             // per input class
  std::vector<double> max_path_residual;  // per input class
  std::vector<CanonicalClass> endpoints;  // per surviving class, at p1
};

/// Tracks each class from p0 to p1 along a geometric grid, Newton-
/// correcting at every step. Broken paths are reported, never dropped.
inline ContinuationTrace continuation_track(const std::vector<CanonicalClass>& classes, double p0,
                                            double p1, int steps,
                                            const ToleranceConfig& tol = {}) {
  if (p0 <= 2.0 || p1 <= 2.0) throw std::invalid_argument("continuation_track: p0, p1 > 2");
  if (steps < 1) throw std::invalid_argument("continuation_track: steps >= 1");

  ContinuationTrace trace;
  for (int k = 0; k <= steps; ++k) {
    trace.p_grid.push_back(p0 * std::pow(p1 / p0, double(k) / steps));
  }
  trace.class_counts.assign(steps + 1, 0);

  std::vector<std::vector<CanonicalClass>> per_point(steps + 1);
  for (const auto& cls : classes) {
    Matrix X = cls.representative;
    bool alive = true;
    double worst = 0.0;
    CanonicalClass end;
    for (int k = 0; k <= steps && alive; ++k) {
      const PExponent pk = PExponent::finite(trace.p_grid[k]);
      const SolveReport rep = newton_solve(BasisMatrix(X, pk), tol);
      if (rep.status != SolveStatus::Converged) {
        alive = false;
        break;
      }
      worst = std::max(worst, rep.residual);
      X = rep.solution->rows;
      CanonicalClass here = canonical_form(*rep.solution, tol);
      bool seen = false;
      for (const auto& e : per_point[k]) {
        if (same_class(e, here, tol)) { seen = true; break; }
      }
      if (!seen) {
        per_point[k].push_back(here);
        ++trace.class_counts[k];
      }
      if (k == steps) end = std::move(here);
    }
    trace.survived.push_back(alive);
    trace.max_path_residual.push_back(worst);
    if (alive) trace.endpoints.push_back(std::move(end));
  }
  return trace;
}

/// The duality map: an Auerbach basis of l^n_p yields one of l^n_q via the
/// biorthogonal functionals. This is how every 1 < p < 2 result is produced.
inline BasisMatrix dualize_solution(const BasisMatrix& B, const ToleranceConfig& tol = {}) {
  if (!is_auerbach(B, tol).auerbach) {
    throw std::invalid_argument("dualize_solution: input is not a verified Auerbach basis");
  }
  BasisMatrix D = dual_basis(B, tol);
  if (!is_auerbach(D, tol).auerbach) {
    throw std::logic_error("dualize_solution: dual failed verification");
  }
  return D;
}

}  // namespace auerbach
