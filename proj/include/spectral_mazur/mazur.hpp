#pragma once

// The p-convexification Mazur map G_p(x) = u |x|^p between the unit spheres
// of S_{E^(p)} and S_E, its inverse, and the 2x2 block constructions used to
// reduce estimates to self-adjoint elements and commutators.

#include <cmath>
#include <utility>

#include "error.hpp"
#include "gauge.hpp"
#include "matnorm.hpp"

namespace spectral_mazur {

struct MazurParams {
  Gauge gauge;  // the base space E; the domain is E^(p)
  double p;

  MazurParams(Gauge g, double exponent) : gauge(std::move(g)), p(exponent) {
    if (!std::isfinite(p) || p < 1.0) throw Error(ErrorCode::InvalidArgument, "Mazur exponent must be >= 1");
  }

  Gauge domain_gauge() const { return convexify(gauge, p); }
};

namespace detail {

// u diag(s^q) v^*. Singular values at or below the rank cutoff of polar()
// count as zero.
inline Matrix singular_power(const Matrix& a, double q) {
  const Svd d = compute_svd(a);
  const double tol = spectral_tolerance(a.rows(), d.s.size() ? d.s[0] : 0.0);
  Vector sq = d.s;
  for (Eigen::Index i = 0; i < sq.size(); ++i) sq[i] = d.s[i] > tol ? std::pow(d.s[i], q) : 0.0;
  return d.u * sq.cast<Complex>().asDiagonal() * d.v.adjoint();
}

}  // namespace detail

inline Matrix mazur_forward(const MazurParams& mp, const Matrix& a) {
  if (mp.p == 1.0) return a;
  return detail::singular_power(a, mp.p);
}

/// Inverse map v |B|^{1/p}, computed from a fresh polar decomposition of B.
inline Matrix mazur_inverse(const MazurParams& mp, const Matrix& b) {
  if (mp.p == 1.0) return b;
  return detail::singular_power(b, 1.0 / mp.p);
}

/// [[0, x], [x^*, 0]]: self-adjoint, singular values those of x, each twice.
inline Matrix tilde_selfadjoint(const Matrix& x) {
  detail::require_square(x, "tilde_selfadjoint");
  const Eigen::Index n = x.rows();
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = x;
  out.bottomLeftCorner(n, n) = x.adjoint();
  return out;
}

struct TildePair {
  Matrix x;  // diag(x, y)
  Matrix b;  // [[0, I], [0, 0]]
};

/// Commutator reduction: ||[x~, b~]|| = ||x - y|| and
/// ||[G_p(x~), b~]|| = ||G_p(x) - G_p(y)||.
inline TildePair tilde_pair(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "tilde_pair needs square matrices of equal size");
  }
  const Eigen::Index n = x.rows();
  Matrix b = Matrix::Zero(2 * n, 2 * n);
  b.topRightCorner(n, n) = Matrix::Identity(n, n);
  return TildePair{block_diagonal(x, y), b};
}

}  // namespace spectral_mazur
