#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "spectral_mazur/gauge.hpp"

using namespace spectral_mazur;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector random_vector(std::mt19937_64& eng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = nd(eng);
  return v;
}

std::vector<Gauge> library_gauges() {
  std::vector<Gauge> out;
  for (const char* s : {"lp:1", "lp:1.5", "lp:2", "lp:4", "lp:inf", "kyfan:1", "kyfan:2", "kyfan:3", "conv:2:lp:1",
                        "conv:3:lp:2", "conv:2:kyfan:2", "dual:kyfan:2", "dual:conv:2:kyfan:2"}) {
    out.push_back(Gauge::parse(s));
  }
  return out;
}

std::vector<Gauge> smooth_gauges() {
  std::vector<Gauge> out;
  for (const auto& g : library_gauges()) {
    if (g.smooth()) out.push_back(g);
  }
  return out;
}

// Gradient of v -> ||v||^2 / 2 by central differences.
Vector fd_half_square_gradient(const Gauge& g, const Vector& v, double h) {
  Vector grad(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Vector up = v, dn = v;
    up[i] += h;
    dn[i] -= h;
    grad[i] = (0.5 * std::pow(g(up), 2) - 0.5 * std::pow(g(dn), 2)) / (2.0 * h);
  }
  return grad;
}

}  // namespace

TEST_CASE("gauge evaluation examples") {
  CHECK_THAT(Gauge::lp(2)(vec({3, 4})), WithinRel(5.0, 1e-15));
  CHECK_THAT(Gauge::kyfan(2)(vec({3, 2, 1})), WithinRel(5.0, 1e-15));
  CHECK_THAT(convexify(Gauge::lp(1), 2)(vec({3, 4})), WithinRel(5.0, 1e-15));
  CHECK_THAT(Gauge::lp(1)(vec({3, -4})), WithinRel(7.0, 1e-15));
  CHECK(Gauge::parse("lp:inf")(vec({3, -4, 1})) == 4.0);
}

TEST_CASE("dual descriptors") {
  const Gauge d3 = dual_gauge(Gauge::lp(3));
  CHECK(d3.kind() == Gauge::Kind::Lp);
  CHECK_THAT(d3.exponent(), WithinRel(1.5, 1e-15));
  CHECK(std::isinf(dual_gauge(Gauge::lp(1)).exponent()));
  CHECK(dual_gauge(Gauge::parse("lp:inf")).exponent() == 1.0);
  CHECK(dual_gauge(dual_gauge(Gauge::kyfan(2))).to_string() == "kyfan:2");
}

TEST_CASE("dual of kyfan:2 at (1,1,1) matches a grid search over the unit ball") {
  // sup <v, w> over ||w||_(2) <= 1, the ball scanned on a 0.05 grid in [-1, 1]^3.
  const Vector v = vec({1, 1, 1});
  double best = 0.0;
  for (int i = -20; i <= 20; ++i) {
    for (int j = -20; j <= 20; ++j) {
      for (int k = -20; k <= 20; ++k) {
        double a[3] = {std::abs(i * 0.05), std::abs(j * 0.05), std::abs(k * 0.05)};
        std::sort(a, a + 3);
        if (a[1] + a[2] <= 1.0 + 1e-12) best = std::max(best, 0.05 * (i + j + k));
      }
    }
  }
  CHECK_THAT(best, WithinAbs(1.5, 1e-12));
  CHECK_THAT(dual_gauge(Gauge::kyfan(2))(v), WithinRel(best, 1e-12));
}

TEST_CASE("convexification") {
  const Gauge c = convexify(Gauge::lp(1), 3);
  CHECK(c.kind() == Gauge::Kind::Lp);
  CHECK(c.exponent() == 3.0);
  CHECK_THAT(convexify(Gauge::kyfan(2), 2)(vec({3, 2, 1})), WithinRel(std::sqrt(13.0), 1e-14));
  for (const auto& g : library_gauges()) CHECK(convexify(g, 1).to_string() == g.to_string());
  CHECK(Gauge::parse("conv:2:lp:1").to_string() == "lp:2");
  CHECK(Gauge::parse("conv:3:lp:2").to_string() == "lp:6");
  CHECK(Gauge::parse("conv:2:conv:3:kyfan:2").to_string() == Gauge::parse("conv:6:kyfan:2").to_string());

  std::mt19937_64 eng(11);
  for (const auto& g : library_gauges()) {
    for (double p : {1.5, 2.0, 3.0}) {
      const Vector v = random_vector(eng, 5);
      const double expected = std::pow(g(v.cwiseAbs().array().pow(p).matrix()), 1.0 / p);
      CHECK_THAT(convexify(g, p)(v), WithinRel(expected, 1e-12));
    }
  }
}

TEST_CASE("smoothness and strict convexity flags") {
  CHECK(Gauge::lp(2).smooth());
  CHECK(Gauge::lp(2).strictly_convex());
  CHECK(Gauge::lp(1.5).smooth());
  CHECK_FALSE(Gauge::lp(1).smooth());
  CHECK_FALSE(Gauge::lp(1).strictly_convex());
  CHECK_FALSE(Gauge::parse("lp:inf").smooth());
  CHECK_FALSE(Gauge::kyfan(1).smooth());
  CHECK_FALSE(Gauge::kyfan(2).strictly_convex());
  CHECK(Gauge::parse("conv:2:lp:1").smooth());
  CHECK_FALSE(Gauge::parse("conv:2:kyfan:2").smooth());
}

TEST_CASE("parse errors") {
  for (const char* bad : {"", "lp", "lp:", "lp:abc", "lp:0.5", "kyfan:0", "kyfan:1.5", "conv:2", "conv:inf:lp:1",
                          "dual:", "foo:1", "lp:2x"}) {
    INFO(bad);
    try {
      Gauge::parse(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
  CHECK_THROWS_AS(Gauge::lp(0.5), Error);
  CHECK_THROWS_AS(Gauge::kyfan(0), Error);
}

TEST_CASE("duality map examples") {
  const Vector u = vec({0.6, -0.8});
  const Vector j2 = duality_map_seq(Gauge::lp(2), u);
  CHECK((j2 - u).cwiseAbs().maxCoeff() < 1e-15);

  const double a = std::pow(2.0, -0.25);
  const Vector v = vec({a, a});
  const Vector j4 = duality_map_seq(Gauge::lp(4), v);
  const Vector fd = fd_half_square_gradient(Gauge::lp(4), v, 1e-6);
  CHECK_THAT(j4[0], WithinRel(std::pow(2.0, -0.75), 1e-12));
  CHECK_THAT(j4[1], WithinRel(std::pow(2.0, -0.75), 1e-12));
  CHECK((j4 - fd).cwiseAbs().maxCoeff() < 1e-8);

  for (double p : {1.5, 2.0, 3.0, 7.0}) {
    const Vector e1 = vec({1, 0, 0});
    CHECK((duality_map_seq(Gauge::lp(p), e1) - e1).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK_THROWS_AS(duality_map_seq(Gauge::kyfan(2), vec({1, 2})), Error);
  CHECK_THROWS_AS(duality_map_seq(Gauge::lp(2), vec({0, 0})), Error);
}

TEST_CASE("homogeneity and triangle inequality") {
  std::mt19937_64 eng(1);
  std::uniform_real_distribution<double> scale(-10.0, 10.0);
  for (const auto& g : library_gauges()) {
    for (int t = 0; t < 200; ++t) {
      const Eigen::Index n = 1 + t % 7;
      const Vector v = random_vector(eng, n), w = random_vector(eng, n);
      const double c = scale(eng);
      CHECK_THAT(g(c * v), WithinRel(std::abs(c) * g(v), 1e-12));
      CHECK(g(v + w) <= (g(v) + g(w)) * (1 + 1e-12));
    }
  }
}

TEST_CASE("dual consistency") {
  std::mt19937_64 eng(2);
  for (const auto& g : library_gauges()) {
    const Gauge d = dual_gauge(g);
    for (int t = 0; t < 200; ++t) {
      const Eigen::Index n = 1 + t % 7;
      const Vector v = random_vector(eng, n), w = random_vector(eng, n);
      CHECK(v.dot(w) <= g(v) * d(w) + 1e-10);
    }
  }
}

TEST_CASE("norming vectors attain the dual pairing") {
  std::mt19937_64 eng(3);
  for (const auto& g : library_gauges()) {
    const Gauge d = dual_gauge(g);
    for (int t = 0; t < 100; ++t) {
      const Vector v = random_vector(eng, 1 + t % 6);
      const Vector x = norming_vector(g, v);
      CHECK_THAT(x.dot(v), WithinRel(g(v), 1e-9));
      CHECK_THAT(d(x), WithinRel(1.0, 1e-9));
    }
  }
}

TEST_CASE("duality map contract and finite-difference gradient") {
  std::mt19937_64 eng(4);
  const auto gauges = smooth_gauges();
  REQUIRE(gauges.size() >= 4);
  for (const auto& g : gauges) {
    const Gauge d = dual_gauge(g);
    for (int t = 0; t < 100; ++t) {
      const Vector v = random_vector(eng, 1 + t % 6);
      const Vector j = duality_map_seq(g, v);
      CHECK_THAT(j.dot(v), WithinRel(std::pow(g(v), 2), 1e-9));
      CHECK_THAT(d(j), WithinRel(g(v), 1e-9));
      const Vector fd = fd_half_square_gradient(g, v, 1e-6 * std::max(1.0, v.cwiseAbs().maxCoeff()));
      CHECK((j - fd).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, j.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("lp duality map has the closed form ||v||^(2-p) sign(v)|v|^(p-1)") {
  std::mt19937_64 eng(5);
  for (double p : {1.25, 1.5, 3.0, 4.0}) {
    for (int t = 0; t < 50; ++t) {
      const Vector v = random_vector(eng, 4);
      double norm = 0.0;
      for (double x : v) norm += std::pow(std::abs(x), p);
      norm = std::pow(norm, 1.0 / p);
      const Vector j = duality_map_seq(Gauge::lp(p), v);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double expected = std::pow(norm, 2 - p) * std::copysign(std::pow(std::abs(v[i]), p - 1), v[i]);
        CHECK_THAT(j[i], WithinAbs(expected, 1e-12 * std::max(1.0, std::abs(expected))));
      }
    }
  }
}

TEST_CASE("dual of a convexified Ky Fan norm matches a grid search") {
  // Nonnegative part of the conv:2:kyfan:2 unit ball in dimension 3 on a 0.005 grid.
  const Gauge g = Gauge::parse("conv:2:kyfan:2");
  const Gauge d = dual_gauge(g);
  for (const Vector& v : {vec({1, 1, 1}), vec({3, 1, 0.5}), vec({-2, 0.1, 1.7}), vec({1, 0, 0})}) {
    double best = 0.0;
    for (int i = 0; i <= 200; ++i) {
      for (int j = 0; j <= 200; ++j) {
        for (int k = 0; k <= 200; ++k) {
          const Vector x = vec({i * 0.005, j * 0.005, k * 0.005});
          if (g(x) <= 1.0) best = std::max(best, x.dot(v.cwiseAbs()));
        }
      }
    }
    INFO(v.transpose());
    CHECK(d(v) >= best - 1e-12);
    CHECK(d(v) <= best + 0.02 * v.cwiseAbs().sum());
  }
}
