#pragma once

// Quantum relative entropy and the entropy-minimization Mazur map
// F_X(rho) = argmin_{sigma in B(X)^+} D(rho || sigma), its inverse
// G(A) = |J_X(A)| A, and their polar extensions to non-positive arguments.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "gauge.hpp"
#include "matnorm.hpp"

namespace spectral_mazur {

/// Positive semidefinite, trace-one matrix. Stored Hermitian-symmetrized.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorCode::NotState, "state must be a nonempty square matrix");
    if (!m.allFinite()) throw Error(ErrorCode::NotState, "state has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw Error(ErrorCode::NotState, "state is not Hermitian");
    const Complex tr = m.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > 1e-12) {
      throw Error(ErrorCode::NotState, "state trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    if (!is_psd(m)) throw Error(ErrorCode::NotState, "state is not positive semidefinite");
    mat_ = hermitian_part(m);
  }

  /// Rescales a nonzero PSD matrix to unit trace.
  static DensityMatrix normalized(const Matrix& psd) {
    const double tr = psd.trace().real();
    if (!(tr > 0.0)) throw Error(ErrorCode::NotState, "cannot normalize a matrix with nonpositive trace");
    return DensityMatrix(hermitian_part(psd) / tr);
  }

  const Matrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Matrix mat_;
};

/// D(rho || sigma), or the +infinity sentinel when supp(rho) is not inside
/// supp(sigma).
class RelativeEntropy {
 public:
  static RelativeEntropy infinite() { return RelativeEntropy(); }
  explicit RelativeEntropy(double value) : value_(value), finite_(true) {}

  bool finite() const { return finite_; }
  double value() const {
    if (!finite_) throw Error(ErrorCode::InvalidArgument, "relative entropy is +infinity");
    return value_;
  }

 private:
  RelativeEntropy() = default;
  double value_ = 0.0;
  bool finite_ = false;
};

inline constexpr double kSupportMassTolerance = 1e-10;

inline RelativeEntropy rel_entropy(const DensityMatrix& rho, const Matrix& sigma) {
  if (sigma.rows() != rho.dim() || sigma.cols() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "rel_entropy: rho and sigma differ in size");
  }
  const Eigh es = psd_eigh(sigma);  // eigenvalues at or below n*eps*lmax are exactly 0
  const Eigh er = psd_eigh(rho.mat());

  double entropy_term = 0.0;
  for (Eigen::Index i = 0; i < er.values.size(); ++i) {
    const double r = er.values[i];
    if (r > 0.0) entropy_term += r * std::log(r);
  }

  double cross = 0.0;
  double outside = 0.0;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    const auto b = es.vectors.col(j);
    const double q = (b.adjoint() * rho.mat() * b)(0, 0).real();
    if (es.values[j] > 0.0) {
      cross += q * std::log(es.values[j]);
    } else {
      outside += q;
    }
  }
  if (outside > kSupportMassTolerance) return RelativeEntropy::infinite();
  return RelativeEntropy(entropy_term - cross);
}

struct SeqMinResult {
  Vector y;
  int iterations = 0;
  double residual = 0.0;  // || J_E(y) o y - r ||_1
};

inline constexpr double kKktTolerance = 1e-8;

namespace detail {

inline Vector validate_probability(const Vector& r) {
  if (r.size() == 0) throw Error(ErrorCode::NotProbability, "empty probability vector");
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || r[i] < -1e-12) throw Error(ErrorCode::NotProbability, "entries must be nonnegative");
  }
  const double total = r.sum();
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotProbability, "entries sum to " + std::to_string(total) + ", expected 1");
  }
  Vector q = r.cwiseMax(0.0);
  return q / q.sum();
}

inline bool is_l1(const Gauge& g) { return g.kind() == Gauge::Kind::Lp && g.exponent() == 1.0; }

inline double kkt_residual(const Gauge& g, const Vector& y, const Vector& r) {
  const Vector nu = norming_vector(g, y);
  return (y.cwiseProduct(nu) * (g(y) == 0.0 ? 0.0 : 1.0 / g(y)) - r).cwiseAbs().sum();
}

}  // namespace detail

/// Minimizes -sum_j r_j log y_j over the nonnegative part of the unit ball of
/// g. Coordinates with r_j = 0 are frozen at 0. Frank-Wolfe (linear oracle:
/// norming functional of the dual gauge) brings the iterate near the optimum,
/// then Newton steps in log coordinates drive the KKT residual
/// ||J_E(y) o y - r||_1 to rounding level.
inline SeqMinResult solve_entropy_min_seq(const Gauge& g, const Vector& r_in) {
  const Vector r = detail::validate_probability(r_in);
  const Eigen::Index n = r.size();

  if (detail::is_l1(g)) return SeqMinResult{r, 0, 0.0};  // Gibbs: y = r
  if (!g.strictly_convex()) throw Error(ErrorCode::NotStrictlyConvex, g.to_string() + " is not strictly convex");
  if (!g.smooth()) throw Error(ErrorCode::NotSmooth, g.to_string() + " is not smooth");

  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r[i] > 0.0) support.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(support.size());
  if (m == 1) {
    Vector y = Vector::Zero(n);
    y[support[0]] = 1.0;
    y /= g(y);
    return SeqMinResult{y, 0, detail::kkt_residual(g, y, r)};
  }

  Vector rs(m);
  for (Eigen::Index k = 0; k < m; ++k) rs[k] = r[support[k]];

  auto embed = [&](const Vector& ys) {
    Vector y = Vector::Zero(n);
    for (Eigen::Index k = 0; k < m; ++k) y[support[k]] = ys[k];
    return y;
  };
  auto objective = [&](const Vector& ys) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) acc -= rs[k] * std::log(ys[k]);
    return acc;
  };

  int iterations = 0;

  // Frank-Wolfe on the support coordinates.
  const Gauge dual = dual_gauge(g);
  Vector ys = rs / g(embed(rs));
  constexpr int kMaxFrankWolfe = 500;
  constexpr double kFrankWolfeGap = 1e-3;
  for (; iterations < kMaxFrankWolfe; ++iterations) {
    Vector c = Vector::Zero(n);
    for (Eigen::Index k = 0; k < m; ++k) c[support[k]] = rs[k] / ys[k];
    const Vector s_full = norming_vector(dual, c).cwiseAbs();
    Vector s(m);
    for (Eigen::Index k = 0; k < m; ++k) s[k] = s_full[support[k]];
    const Vector cs = c(support);
    const double gap = cs.dot(s - ys);
    if (gap <= kFrankWolfeGap) break;
    const double f0 = objective(ys);
    double step = 1.0;
    Vector next = ys + step * (s - ys);
    while (step > 1e-12 && ((next.array() <= 0.0).any() || objective(next) > f0 - 0.5 * step * gap)) {
      step *= 0.5;
      next = ys + step * (s - ys);
    }
    if (step <= 1e-12) break;
    ys = next;
  }

  // Newton in z = log y on the scale-invariant objective
  // phi(z) = -<r, z> + log g(e^z), whose gradient is the KKT residual.
  Vector z = ys.array().log();
  auto phi = [&](const Vector& zz) {
    const Vector y = embed(zz.array().exp());
    return -rs.dot(zz) + std::log(g(y));
  };
  auto grad = [&](const Vector& zz) {
    const Vector y = embed(zz.array().exp());
    const Vector nu = norming_vector(g, y);
    const double ny = g(y);
    Vector out(m);
    for (Eigen::Index k = 0; k < m; ++k) out[k] = -rs[k] + y[support[k]] * nu[support[k]] / ny;
    return out;
  };
  auto relative_size = [&](const Vector& gr) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) worst = std::max(worst, std::abs(gr[k]) / rs[k]);
    return worst;
  };

  constexpr int kMaxNewton = 200;
  constexpr double kMaxLogStep = 2.0;
  constexpr double kFdStep = 1e-5;
  Vector gz = grad(z);
  int stalled = 0;
  // phi is constant along the all-ones direction: the heaviest coordinate is
  // held fixed. Hessian rows are scaled by 1/r_j and left unsymmetrized.
  Eigen::Index anchor = 0;
  for (Eigen::Index k = 1; k < m; ++k) {
    if (rs[k] > rs[anchor]) anchor = k;
  }
  std::vector<Eigen::Index> free_idx;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (k != anchor) free_idx.push_back(k);
  }
  const auto mf = static_cast<Eigen::Index>(free_idx.size());
  for (int it = 0; it < kMaxNewton && relative_size(gz) > 1e-14; ++it, ++iterations) {
    Eigen::MatrixXd h(mf, mf);
    Vector rhs(mf);
    for (Eigen::Index c = 0; c < mf; ++c) {
      Vector zp = z, zm = z;
      zp[free_idx[c]] += kFdStep;
      zm[free_idx[c]] -= kFdStep;
      const Vector col = (grad(zp) - grad(zm)) / (2.0 * kFdStep);
      for (Eigen::Index rrow = 0; rrow < mf; ++rrow) h(rrow, c) = col[free_idx[rrow]] / rs[free_idx[rrow]];
    }
    for (Eigen::Index rrow = 0; rrow < mf; ++rrow) rhs[rrow] = -gz[free_idx[rrow]] / rs[free_idx[rrow]];
    const Vector df = h.partialPivLu().solve(rhs);
    Vector d = Vector::Zero(m);
    for (Eigen::Index c = 0; c < mf; ++c) d[free_idx[c]] = df[c];
    if (!d.allFinite() || gz.dot(d) >= 0.0) {
      d = -gz.cwiseQuotient(rs);
      d[anchor] = 0.0;
    }
    // Cap moves in log space.
    const double longest = d.cwiseAbs().maxCoeff();
    if (longest > kMaxLogStep) d *= kMaxLogStep / longest;

    const double f0 = phi(z);
    const double g0 = gz.cwiseAbs().sum();
    double step = 1.0;
    Vector zn = z + d;
    Vector gn = grad(zn);
    double fn = phi(zn);
    while (step > 1e-10 && !(fn <= f0 + 1e-4 * step * gz.dot(d) || gn.cwiseAbs().sum() < g0)) {
      step *= 0.5;
      zn = z + step * d;
      gn = grad(zn);
      fn = phi(zn);
    }
    if (fn < f0 || gn.cwiseAbs().sum() < g0) {
      stalled = 0;
    } else if (++stalled >= 2) {
      break;
    }
    if (step <= 1e-10) break;
    z = zn;
    gz = gn;
  }

  Vector y = embed(z.array().exp());
  y /= g(y);
  const double residual = detail::kkt_residual(g, y, r);
  if (!(residual <= kKktTolerance)) {
    throw NoConvergenceError("entropy minimization did not reach the KKT tolerance", residual);
  }
  return SeqMinResult{y, iterations, residual};
}

inline Vector entropy_min_seq(const Gauge& g, const Vector& r) { return solve_entropy_min_seq(g, r).y; }

/// G(A) = |J_X(A)| A = U diag(J_E(s) o s) V^* for A = U diag(s) V^*.
inline Matrix G_map(const Gauge& g, const Matrix& a) {
  if (!g.smooth()) throw Error(ErrorCode::NotSmooth, "G needs a smooth gauge, got " + g.to_string());
  const Svd d = compute_svd(a);
  const double norm = g(d.s);
  if (std::abs(norm - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotUnitNorm, "G needs ||A|| = 1, got " + std::to_string(norm));
  }
  const Vector t = duality_map_seq(g, d.s);
  return d.u * t.cwiseProduct(d.s).cast<Complex>().asDiagonal() * d.v.adjoint();
}

struct EntropyMinReport {
  Matrix minimizer;
  double objective = 0.0;
  double fixed_point_residual = 0.0;  // || G(sigma) - rho ||_1
  int iterations = 0;
};

/// Spectral reduction: rho = W diag(r) W^*, sigma = W diag(y) W^* with y the
/// sequence-space minimizer. sigma commutes with rho.
inline EntropyMinReport entropy_min_mat(const Gauge& g, const DensityMatrix& rho) {
  const Eigh e = psd_eigh(rho.mat());
  Vector r = e.values;
  r /= r.sum();
  const SeqMinResult seq = solve_entropy_min_seq(g, r);
  Matrix sigma = hermitian_part(e.vectors * seq.y.cast<Complex>().asDiagonal() * e.vectors.adjoint());

  EntropyMinReport report;
  report.objective = rel_entropy(rho, sigma).value();
  report.iterations = seq.iterations;
  // On the positive part of the S_1 sphere G is the identity.
  const Matrix back = detail::is_l1(g) ? sigma : G_map(g, sigma);
  report.fixed_point_residual = trace_norm(back - rho.mat());
  report.minimizer = std::move(sigma);
  return report;
}

/// Polar extension F_X(A) = U F_X(|A|) for ||A||_1 = 1.
inline Matrix entropy_min_general(const Gauge& g, const Matrix& a) {
  const double tn = trace_norm(a);
  if (std::abs(tn - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotUnitTraceNorm, "F needs ||A||_1 = 1, got " + std::to_string(tn));
  }
  const PolarParts pp = polar(a);
  const DensityMatrix modulus = DensityMatrix::normalized(pp.modulus);
  return pp.isometry * entropy_min_mat(g, modulus).minimizer;
}

struct BruteForceResult {
  Matrix minimizer;
  double objective = 0.0;
  double pitch = 0.0;  // final grid spacing along each free coordinate
};

/// Grid-search oracle for diagonal states in dimension <= 3. The coordinate
/// carrying the largest weight is solved from ||y|| = 1 by bisection; the
/// others run over a 0.01 grid on [0, 1] and then a 1e-4 grid around the best
/// coarse point.
inline BruteForceResult entropy_min_bruteforce(const Gauge& g, const DensityMatrix& rho) {
  const Eigen::Index n = rho.dim();
  if (n > 3) throw Error(ErrorCode::DimensionTooLarge, "brute-force oracle supports dim <= 3");
  const Matrix& m = rho.mat();
  const Matrix off = m - Matrix(m.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > 1e-12) throw Error(ErrorCode::InvalidArgument, "brute-force oracle needs a diagonal state");

  Vector r = m.diagonal().real().cwiseMax(0.0);
  r /= r.sum();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r[i] > 0.0) support.push_back(i);
  }
  Eigen::Index pivot = support.front();
  for (auto i : support) {
    if (r[i] > r[pivot]) pivot = i;
  }
  std::vector<Eigen::Index> free;
  for (auto i : support) {
    if (i != pivot) free.push_back(i);
  }

  double neg_entropy = 0.0;
  for (auto i : support) neg_entropy += r[i] * std::log(r[i]);

  // Completes the free coordinates to a point on the unit sphere, or returns
  // false when no nonnegative completion exists.
  auto complete = [&](const std::vector<double>& vals, Vector& y) {
    y = Vector::Zero(n);
    for (std::size_t k = 0; k < free.size(); ++k) y[free[k]] = vals[k];
    if (g(y) > 1.0) return false;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
      y[pivot] = 0.5 * (lo + hi);
      (g(y) > 1.0 ? hi : lo) = y[pivot];
    }
    y[pivot] = lo;
    return true;
  };
  auto objective = [&](const Vector& y) {
    double acc = neg_entropy;
    for (auto i : support) {
      if (y[i] <= 0.0) return std::numeric_limits<double>::infinity();
      acc -= r[i] * std::log(y[i]);
    }
    return acc;
  };

  Vector best = Vector::Zero(n);
  double best_value = std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<double>& centre, double half_width, double pitch) {
    const int steps = static_cast<int>(std::lround(2.0 * half_width / pitch));
    std::vector<int> idx(free.size(), 0);
    const auto total = static_cast<long>(std::pow(steps + 1, static_cast<double>(free.size())));
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      std::vector<double> vals(free.size());
      bool inside = true;
      for (std::size_t k = 0; k < free.size(); ++k) {
        const long i = rem % (steps + 1);
        rem /= (steps + 1);
        vals[k] = centre[k] - half_width + static_cast<double>(i) * pitch;
        if (vals[k] < 0.0 || vals[k] > 1.0) inside = false;
      }
      if (!inside) continue;
      Vector y;
      if (!complete(vals, y)) continue;
      const double value = objective(y);
      if (value < best_value) {
        best_value = value;
        best = y;
      }
    }
  };

  constexpr double kCoarse = 1e-2;
  constexpr double kFine = 1e-4;
  if (free.empty()) {
    Vector y;
    complete({}, y);
    best = y;
    best_value = objective(y);
  } else {
    scan(std::vector<double>(free.size(), 0.5), 0.5, kCoarse);
    std::vector<double> centre;
    for (auto i : free) centre.push_back(best[i]);
    scan(centre, kCoarse, kFine);
  }

  return BruteForceResult{Matrix(best.cast<Complex>().asDiagonal()), best_value, kFine};
}

}  // namespace spectral_mazur
