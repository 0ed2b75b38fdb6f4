#include <catch_amalgamated.hpp>

#include <cmath>

#include "spectral_mazur/matnorm.hpp"
#include "spectral_mazur/random.hpp"

using namespace spectral_mazur;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix diag(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v.cast<Complex>().asDiagonal();
}

double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

std::vector<Gauge> gauges() {
  std::vector<Gauge> out;
  for (const char* s : {"lp:1", "lp:1.5", "lp:2", "lp:4", "lp:inf", "kyfan:1", "kyfan:2", "conv:2:lp:1",
                        "conv:3:lp:2", "conv:2:kyfan:2", "dual:kyfan:2"}) {
    out.push_back(Gauge::parse(s));
  }
  return out;
}

// sqrt of the eigenvalues of A^* A, descending.
Vector singular_values_oracle(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a);
  Vector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return s.reverse();
}

}  // namespace

TEST_CASE("singular value examples") {
  const Vector s1 = singular_values(diag({3, -4})).values;
  CHECK(s1[0] == 4.0);
  CHECK(s1[1] == 3.0);
  const Vector s2 = singular_values(mat2(0, 2, 0, 0)).values;
  CHECK_THAT(s2[0], WithinAbs(2.0, 1e-15));
  CHECK_THAT(s2[1], WithinAbs(0.0, 1e-15));
}

TEST_CASE("singular values agree with the eigenvalues of A^*A") {
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 1 + t % 12;
    Sampler rng = Sampler::for_sample(5, "svd-oracle", n, t);
    const Matrix a = rng.ginibre(n);
    const Vector s = singular_values(a).values;
    const Vector o = singular_values_oracle(a);
    CHECK((s - o).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, o[0]));
    const Svd d = compute_svd(a);
    CHECK(max_abs(d.u * d.s.cast<Complex>().asDiagonal() * d.v.adjoint() - a) <= 1e-12 * std::max(1.0, o[0]));
  }
}

TEST_CASE("block-diagonal PSD inputs of size 16 keep correct singular values") {
  for (int t = 0; t < 300; ++t) {
    Sampler rng = Sampler::for_sample(9, "block16", 16, t);
    const Matrix a = block_diagonal(rng.psd(8), rng.psd(8));
    const Vector s = singular_values(a).values;
    const Vector o = singular_values_oracle(a);
    CHECK((s - o).cwiseAbs().maxCoeff() <= 1e-9 * o[0]);
    const Svd d = compute_svd(a);
    CHECK(max_abs(d.u * d.s.cast<Complex>().asDiagonal() * d.v.adjoint() - a) <= 1e-11 * o[0]);
  }
}

TEST_CASE("norm examples") {
  CHECK_THAT(norm_ui(Gauge::lp(1), diag({3, -4})), WithinRel(7.0, 1e-15));
  Sampler rng(3);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = rng.ginibre(1 + t % 6);
    CHECK_THAT(norm_ui(Gauge::kyfan(1), a), WithinRel(singular_values_oracle(a)[0], 1e-10));
    CHECK_THAT(norm_ui(Gauge::parse("conv:2:lp:1"), a), WithinRel(std::sqrt(a.cwiseAbs2().sum()), 1e-12));
  }
}

TEST_CASE("polar decomposition examples") {
  Sampler rng(4);
  const Matrix u = rng.unitary(4);
  const PolarParts pu = polar(u);
  CHECK(max_abs(pu.isometry - u) < 1e-12);
  CHECK(max_abs(pu.modulus - Matrix::Identity(4, 4)) < 1e-12);

  const Matrix n = mat2(0, 1, 0, 0);
  const PolarParts pn = polar(n);
  CHECK(max_abs(pn.isometry - n) < 1e-15);
  CHECK(max_abs(pn.modulus - diag({0, 1})) < 1e-15);
  CHECK(max_abs(pn.isometry * pn.modulus - n) < 1e-15);

  const PolarParts ps = polar(diag({-2}));
  CHECK_THAT(ps.isometry(0, 0).real(), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(ps.modulus(0, 0).real(), WithinAbs(2.0, 1e-15));

  for (int t = 0; t < 50; ++t) {
    const Eigen::Index d = 1 + t % 8;
    const Matrix a = t % 2 ? rng.ginibre(d) : rng.partial_isometry(d) * rng.psd(d);
    const PolarParts p = polar(a);
    CHECK(max_abs(p.isometry * p.modulus - a) < 1e-10 * std::max(1.0, max_abs(a)));
    CHECK(is_psd(p.modulus));
  }
}

TEST_CASE("matrix power examples") {
  const Matrix r = matrix_power(diag({4, 9}), 0.5);
  CHECK(max_abs(r - diag({2, 3})) < 1e-14);
  Sampler rng(5);
  for (int t = 0; t < 30; ++t) {
    const Matrix p = rng.psd(1 + t % 8);
    CHECK(max_abs(matrix_power(p, 1.0) - p) < 1e-14 * max_abs(p));
    CHECK(max_abs(matrix_power(p, 2.0) - p * p) < 1e-12 * max_abs(p * p));
  }
  CHECK_THROWS_AS(matrix_power(diag({1, -1}), 0.5), Error);
  CHECK_THROWS_AS(matrix_power(diag({1, 1}), 0.0), Error);
}

TEST_CASE("duality map examples on matrices") {
  Sampler rng(6);
  const Matrix a0 = rng.ginibre(3);
  const Matrix a = a0 / std::sqrt(a0.cwiseAbs2().sum());
  const Matrix j = duality_map_mat(Gauge::lp(2), a);
  CHECK(max_abs(j - a.adjoint()) < 1e-12);
  CHECK_THAT((j * a).trace().real(), WithinAbs(1.0, 1e-12));
  CHECK(max_abs(duality_map_mat(Gauge::lp(2), 2.5 * a) - 2.5 * j) < 1e-12);

  const Matrix n = mat2(0, 1, 0, 0);
  const Matrix j4 = duality_map_mat(Gauge::lp(4), n);
  CHECK(max_abs(j4 - mat2(0, 0, 1, 0)) < 1e-14);
  CHECK_THAT((j4 * n).trace().real(), WithinAbs(1.0, 1e-14));
  CHECK_THAT(norm_ui(dual_gauge(Gauge::lp(4)), j4), WithinAbs(1.0, 1e-14));

  CHECK_THROWS_AS(duality_map_mat(Gauge::kyfan(1), n), Error);
  CHECK_THROWS_AS(duality_map_mat(Gauge::lp(2), Matrix::Zero(2, 2)), Error);
}

TEST_CASE("unitary invariance, ideal property and trace duality") {
  for (const auto& g : gauges()) {
    const Gauge d = dual_gauge(g);
    for (int t = 0; t < 60; ++t) {
      const Eigen::Index n = 1 + t % 8;
      Sampler rng = Sampler::for_sample(7, "ui:" + g.to_string(), n, t);
      const Matrix a = rng.ginibre(n), b = rng.ginibre(n), c = rng.ginibre(n);
      const Matrix u = rng.unitary(n), v = rng.unitary(n);
      CHECK_THAT(norm_ui(g, u * a * v), WithinRel(norm_ui(g, a), 1e-10));
      CHECK(norm_ui(g, a * b * c) <= operator_norm(a) * norm_ui(g, b) * operator_norm(c) + 1e-9);
      CHECK(std::abs((b * a).trace()) <= norm_ui(d, b) * norm_ui(g, a) + 1e-9);
    }
  }
}

TEST_CASE("Holder inequality for the library gauges") {
  const double triples[][3] = {{2, 2, 1}, {3, 1.5, 1}, {4, 4, 2}};
  for (const auto& g : gauges()) {
    for (int t = 0; t < 40; ++t) {
      const Eigen::Index n = 1 + t % 6;
      Sampler rng = Sampler::for_sample(8, "holder:" + g.to_string(), n, t);
      const Matrix a = rng.ginibre(n), b = rng.ginibre(n);
      for (const auto& pqr : triples) {
        const double p = pqr[0], q = pqr[1], r = pqr[2];
        auto power_norm = [&](const Matrix& x, double e) {
          Vector s = singular_values(x).values.array().pow(e).matrix();
          return std::pow(g(s), 1.0 / e);
        };
        CHECK(power_norm(a * b, r) <= power_norm(a, p) * power_norm(b, q) + 1e-9);
      }
    }
  }
}

TEST_CASE("J(s) s separates distinct unit PSD matrices") {
  for (const char* name : {"lp:1.5", "lp:2", "lp:4", "conv:2:lp:1", "conv:3:lp:2"}) {
    const Gauge g = Gauge::parse(name);
    for (int t = 0; t < 100; ++t) {
      const Eigen::Index n = 1 + t % 6;
      Sampler rng = Sampler::for_sample(10, name, n, t);
      Matrix s1 = rng.psd(n), s2 = t % 10 == 0 ? s1 : rng.psd(n);
      s1 /= norm_ui(g, s1);
      s2 /= norm_ui(g, s2);
      const double prod_gap = trace_norm(duality_map_mat(g, s1) * s1 - duality_map_mat(g, s2) * s2);
      const double input_gap = trace_norm(s1 - s2);
      if (prod_gap < 1e-12) {
        CHECK(input_gap < 1e-6);
      } else {
        CHECK(input_gap > 0.0);
      }
    }
  }
}

TEST_CASE("PSD helpers") {
  CHECK(is_psd(diag({0, 1})));
  CHECK_FALSE(is_psd(diag({-1e-3, 1})));
  CHECK_FALSE(is_psd(mat2(1, 1, 0, 1)));
  CHECK(is_hermitian(mat2(1, Complex(0, 1), Complex(0, -1), 2)));
  const Matrix c = commutator(mat2(0, 1, 0, 0), mat2(0, 0, 1, 0));
  CHECK(max_abs(c - diag({1, -1})) == 0.0);
  CHECK_THROWS_AS(singular_values(Matrix(2, 3)), Error);
}
