#pragma once

// Deterministic random matrices. Every sample owns a generator seeded from
// (seed, stream name, dim, index) through splitmix64, so a sample does not
// depend on how the index range is split between threads.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "matnorm.hpp"

namespace spectral_mazur {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Random unital channel z -> sum_i w_i U_i z U_i^*.
struct UcptpMixture {
  std::vector<double> weights;
  std::vector<Matrix> unitaries;

  Matrix apply(const Matrix& z) const {
    Matrix out = Matrix::Zero(z.rows(), z.cols());
    for (std::size_t i = 0; i < weights.size(); ++i) out += weights[i] * unitaries[i] * z * unitaries[i].adjoint();
    return out;
  }
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  static Sampler for_sample(std::uint64_t seed, std::string_view stream, std::int64_t dim, std::uint64_t index) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ fnv1a(stream));
    h = splitmix64(h ^ static_cast<std::uint64_t>(dim));
    h = splitmix64(h ^ index);
    return Sampler(h);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return normal_(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return uniform() < 0.5; }

  /// Scale spread over several orders of magnitude.
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  Vector dirichlet(Eigen::Index k) {
    Vector w(k);
    for (Eigen::Index i = 0; i < k; ++i) w[i] = -std::log(1.0 - uniform());
    return w / w.sum();
  }

  Matrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    Matrix g(rows, cols);
    const double s = std::sqrt(0.5);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(s * normal(), s * normal());
    }
    return g;
  }
  Matrix ginibre(Eigen::Index n) { return ginibre(n, n); }

  Matrix hermitian(Eigen::Index n) { return hermitian_part(ginibre(n)); }

  /// Haar unitary: QR of a Ginibre matrix with the phases of diag(R) removed.
  Matrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(n));
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = std::abs(r(j, j));
      if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
  }

  /// G G^* with G of size n x 2n (induced measure; full rank almost surely).
  Matrix psd(Eigen::Index n) {
    const Matrix g = ginibre(n, 2 * n);
    return hermitian_part(g * g.adjoint());
  }

  /// W diag(l) W^* with a random number of exactly zero eigenvalues.
  Matrix low_rank_psd(Eigen::Index n) {
    const Eigen::Index rank = integer(1, static_cast<int>(n));
    Vector l = Vector::Zero(n);
    for (Eigen::Index i = 0; i < rank; ++i) l[i] = uniform(0.05, 1.0);
    const Matrix w = unitary(n);
    return hermitian_part(w * l.cast<Complex>().asDiagonal() * w.adjoint());
  }

  Matrix state(Eigen::Index n) {
    const Matrix p = psd(n);
    return hermitian_part(p / p.trace().real());
  }

  Matrix low_rank_state(Eigen::Index n) {
    const Matrix p = low_rank_psd(n);
    return hermitian_part(p / p.trace().real());
  }

  /// U P with P a random orthogonal projection.
  Matrix partial_isometry(Eigen::Index n) {
    const Eigen::Index rank = integer(0, static_cast<int>(n));
    const Matrix w = unitary(n);
    return unitary(n) * w.leftCols(rank) * w.leftCols(rank).adjoint();
  }

  /// Ginibre scaled to operator norm one.
  Matrix contraction(Eigen::Index n) {
    const Matrix g = ginibre(n);
    return g / operator_norm(g);
  }

  UcptpMixture ucptp_mixture(Eigen::Index n) {
    const int terms = integer(1, 4);
    const Vector w = dirichlet(terms);
    UcptpMixture m;
    for (int i = 0; i < terms; ++i) {
      m.weights.push_back(w[i]);
      m.unitaries.push_back(unitary(n));
    }
    return m;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spectral_mazur
