#pragma once

// Unitarily invariant norms on M_n: ||A|| = g(s(A)) for a symmetric gauge g,
// together with the spectral machinery the maps need (SVD, Hermitian
// eigendecomposition, polar decomposition, spectral powers, duality map).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "error.hpp"
#include "gauge.hpp"

namespace spectral_mazur {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Nonincreasing, nonnegative singular values.
struct SingularSpectrum {
  Vector values;
};

struct Svd {
  Matrix u;
  Vector s;  // nonincreasing
  Matrix v;  // A = u * diag(s) * v^*
};

struct Eigh {
  Vector values;  // ascending
  Matrix vectors;
};

/// A = isometry * modulus, isometry vanishing on ker(modulus).
struct PolarParts {
  Matrix isometry;
  Matrix modulus;
};

namespace detail {

inline void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": matrix is not square");
}

inline void require_finite(const Matrix& a) {
  if (!a.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
}

}  // namespace detail

/// Rank cutoff n * eps * scale used for supports, PSD clamping and polar parts.
inline double spectral_tolerance(Eigen::Index n, double scale) {
  return static_cast<double>(std::max<Eigen::Index>(n, 1)) * std::numeric_limits<double>::epsilon() * scale;
}

inline Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline bool is_hermitian(const Matrix& a, double rel_tol = 1e-10) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

// Jacobi rather than BDCSVD: Eigen 3.4 BDCSVD returns wrong singular values
// on some block-diagonal inputs of size >= 16.
inline Svd compute_svd(const Matrix& a) {
  detail::require_square(a, "svd");
  detail::require_finite(a);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "SVD did not converge");
  return Svd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// Eigendecomposition of the Hermitian part of h.
inline Eigh eigh(const Matrix& h) {
  detail::require_square(h, "eigh");
  detail::require_finite(h);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigensolver did not converge");
  return Eigh{es.eigenvalues(), es.eigenvectors()};
}

inline SingularSpectrum singular_values(const Matrix& a) {
  detail::require_square(a, "singular_values");
  detail::require_finite(a);
  Eigen::JacobiSVD<Matrix> svd(a);
  if (svd.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "SVD did not converge");
  Vector s = svd.singularValues().cwiseMax(0.0);
  return SingularSpectrum{s};
}

/// Singular values of a Hermitian matrix as sorted |eigenvalues|. The
/// eigensolver is much cheaper than an SVD and equally accurate here.
inline SingularSpectrum singular_values_hermitian(const Matrix& h) {
  Vector s = eigh(h).values.cwiseAbs();
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return SingularSpectrum{s};
}

inline double norm_ui(const Gauge& g, const Matrix& a) { return g(singular_values(a).values); }

inline double trace_norm(const Matrix& a) { return singular_values(a).values.sum(); }

inline double operator_norm(const Matrix& a) {
  const auto s = singular_values(a).values;
  return s.size() ? s[0] : 0.0;
}

/// V diag(f(lambda)) V^* for a Hermitian eigendecomposition.
inline Matrix spectral_apply(const Eigh& e, const std::function<double(double)>& f) {
  Vector fl(e.values.size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl[i] = f(e.values[i]);
  return e.vectors * fl.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

/// Eigendecomposition of a PSD matrix with eigenvalues below the spectral
/// tolerance clamped to zero; throws NotPositive on genuinely negative ones.
inline Eigh psd_eigh(const Matrix& p) {
  if (!is_hermitian(p)) throw Error(ErrorCode::NotPositive, "matrix is not Hermitian");
  Eigh e = eigh(p);
  const double lmax = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
  const double tol = spectral_tolerance(p.rows(), lmax);
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values[i] < -tol) {
      throw Error(ErrorCode::NotPositive, "eigenvalue " + std::to_string(e.values[i]) + " below PSD tolerance");
    }
    if (e.values[i] <= tol) e.values[i] = 0.0;
  }
  return e;
}

inline bool is_psd(const Matrix& p) {
  try {
    psd_eigh(p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

/// Spectral power P^p of a PSD matrix, p > 0.
inline Matrix matrix_power(const Matrix& p, double exponent) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::InvalidArgument, "matrix_power exponent must be finite and > 0");
  }
  if (exponent == 1.0) {
    psd_eigh(p);
    return hermitian_part(p);
  }
  const Eigh e = psd_eigh(p);
  return spectral_apply(e, [exponent](double l) { return l > 0.0 ? std::pow(l, exponent) : 0.0; });
}

inline PolarParts polar(const Matrix& a) {
  const Svd d = compute_svd(a);
  const Eigen::Index n = a.rows();
  const double tol = spectral_tolerance(n, n ? d.s[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < n && d.s[rank] > tol) ++rank;
  Matrix isometry = d.u.leftCols(rank) * d.v.leftCols(rank).adjoint();
  Matrix modulus =
      d.v.leftCols(rank) * d.s.head(rank).cast<Complex>().asDiagonal() * d.v.leftCols(rank).adjoint();
  return PolarParts{isometry, hermitian_part(modulus)};
}

/// Duality map J_X of S_E^n under the trace pairing <J, A> = tr(J A):
/// J(A) = V diag(J_E(s)) U^* for A = U diag(s) V^*. On PSD A this is the
/// simultaneously diagonal PSD functional; in general J(A) = J(|A|) u^*.
inline Matrix duality_map_mat(const Gauge& g, const Matrix& a) {
  if (!g.smooth()) throw Error(ErrorCode::NotSmooth, "duality map needs a smooth gauge, got " + g.to_string());
  const Svd d = compute_svd(a);
  if (d.s.size() == 0 || d.s[0] == 0.0) throw Error(ErrorCode::ZeroMatrix, "duality map of the zero matrix");
  const Vector t = duality_map_seq(g, d.s);
  return d.v * t.cast<Complex>().asDiagonal() * d.u.adjoint();
}

inline Matrix commutator(const Matrix& x, const Matrix& b) { return x * b - b * x; }

inline Matrix block_diagonal(const Matrix& x, const Matrix& y) {
  Matrix out = Matrix::Zero(x.rows() + y.rows(), x.cols() + y.cols());
  out.topLeftCorner(x.rows(), x.cols()) = x;
  out.bottomRightCorner(y.rows(), y.cols()) = y;
  return out;
}

}  // namespace spectral_mazur
