#pragma once

// The inequality suites. One case is one random sample at one dimension; every
// sample is checked against every configured gauge (and exponent, where the
// statement has one), reusing a single set of spectra per sample.

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "entropy.hpp"
#include "mazur.hpp"
#include "verify.hpp"

namespace spectral_mazur {

enum class RandomKind { Ginibre, Hermitian, Psd, State, Unitary, PartialIsometry, UcptpMixture };

inline std::string_view to_string(RandomKind k) {
  switch (k) {
    case RandomKind::Ginibre: return "ginibre";
    case RandomKind::Hermitian: return "hermitian";
    case RandomKind::Psd: return "psd";
    case RandomKind::State: return "state";
    case RandomKind::Unitary: return "unitary";
    case RandomKind::PartialIsometry: return "partial_isometry";
    case RandomKind::UcptpMixture: return "ucptp_mixture";
  }
  return "?";
}

using RandomSample = std::variant<Matrix, UcptpMixture>;

/// Sample i of the stream is a pure function of (cfg.seed, kind, dim, i).
inline std::vector<RandomSample> gen_random(const SuiteConfig& cfg, RandomKind kind, Eigen::Index dim,
                                            std::int64_t count) {
  std::vector<RandomSample> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  const std::string stream = "gen:" + std::string(to_string(kind));
  for (std::int64_t i = 0; i < count; ++i) {
    Sampler rng = Sampler::for_sample(cfg.seed, stream, dim, static_cast<std::uint64_t>(i));
    switch (kind) {
      case RandomKind::Ginibre: out.emplace_back(rng.ginibre(dim)); break;
      case RandomKind::Hermitian: out.emplace_back(rng.hermitian(dim)); break;
      case RandomKind::Psd: out.emplace_back(rng.psd(dim)); break;
      case RandomKind::State: out.emplace_back(rng.state(dim)); break;
      case RandomKind::Unitary: out.emplace_back(rng.unitary(dim)); break;
      case RandomKind::PartialIsometry: out.emplace_back(rng.partial_isometry(dim)); break;
      case RandomKind::UcptpMixture: out.emplace_back(rng.ucptp_mixture(dim)); break;
    }
  }
  return out;
}

namespace suites {

inline Vector sv(const Matrix& a) { return singular_values(a).values; }
inline Vector sv_h(const Matrix& h) { return singular_values_hermitian(h).values; }

/// ||s||_{E^(p)} = ||s^p||_E^{1/p}.
inline double conv_norm(const Gauge& g, const Vector& s, double p) {
  if (p == 1.0) return g(s);
  return std::pow(g(s.array().pow(p).matrix()), 1.0 / p);
}

inline Matrix psd_power(const Eigh& e, double p) {
  return spectral_apply(e, [p](double l) { return l > 0.0 ? std::pow(l, p) : 0.0; });
}

/// sign(x)|x|^p on a Hermitian eigendecomposition.
inline Matrix signed_power(const Eigh& e, double p) {
  return spectral_apply(e, [p](double l) { return l == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(l), p), l); });
}

inline Matrix log_on_support(const Matrix& m) {
  const Eigh e = psd_eigh(m);
  return spectral_apply(e, [](double l) { return l > 0.0 ? std::log(l) : 0.0; });
}

inline std::vector<Gauge> smooth_strict(const std::vector<Gauge>& gs) {
  std::vector<Gauge> out;
  for (const auto& g : gs) {
    if (g.smooth() && g.strictly_convex()) out.push_back(g);
  }
  return out;
}

inline Json mat(const Matrix& a) { return matrix_to_json(a); }

/// Random PSD operand with scale spread over four decades.
inline Matrix scaled_psd(Sampler& rng, Eigen::Index n) {
  const double scale = rng.log_uniform(1e-2, 1e2);
  const Matrix p = rng.coin() ? rng.psd(n) / static_cast<double>(2 * n) : rng.low_rank_psd(n);
  return hermitian_part(scale * p);
}

struct Pair {
  Matrix x;
  Matrix y;
};

/// Independent, nearby, zero and identical PSD pairs.
inline Pair psd_pair(Sampler& rng, Eigen::Index n) {
  Matrix x = scaled_psd(rng, n);
  switch (rng.integer(0, 5)) {
    case 0:
    case 1: return Pair{x, scaled_psd(rng, n)};
    case 2:
    case 3: {
      const double eta = rng.log_uniform(1e-6, 1.0) * x.trace().real() / static_cast<double>(n);
      Matrix y = hermitian_part(x + eta * rng.psd(n) / static_cast<double>(2 * n));
      return rng.coin() ? Pair{x, y} : Pair{y, x};
    }
    case 4: return Pair{x, Matrix::Zero(n, n)};
    default: return Pair{x, x};
  }
}

/// Operator-norm contraction: Ginibre at norm one or scaled into (0, 1].
inline Matrix contraction_operand(Sampler& rng, Eigen::Index n) {
  Matrix b = rng.contraction(n);
  if (rng.coin()) b *= rng.uniform(1e-3, 1.0);
  return b;
}

// ---------------------------------------------------------------- section 3

inline void holder(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  Matrix a = rng.log_uniform(1e-2, 1e2) * rng.ginibre(n);
  Matrix b = rng.log_uniform(1e-2, 1e2) * rng.ginibre(n);
  if (rng.coin()) a = a * rng.partial_isometry(n);
  if (rng.coin()) b = rng.hermitian(n);
  const Vector sa = sv(a), sb = sv(b), sab = sv(a * b);
  constexpr std::array<std::array<double, 3>, 3> triples{{{2.0, 2.0, 1.0}, {3.0, 1.5, 1.0}, {4.0, 4.0, 2.0}}};
  for (const auto& g : cfg.gauges) {
    for (const auto& [p, q, r] : triples) {
      const double lhs = conv_norm(g, sab, r);
      const double rhs = conv_norm(g, sa, p) * conv_norm(g, sb, q);
      log.check("holder", lhs, rhs, [&] {
        return Json{{"gauge", g.to_string()}, {"pqr", {p, q, r}}, {"A", mat(a)}, {"B", mat(b)}};
      });
    }
  }
}

inline Matrix ideal_factor(Sampler& rng, Eigen::Index n) {
  switch (rng.integer(0, 3)) {
    case 0: return rng.log_uniform(1e-2, 1e2) * rng.ginibre(n);
    case 1: return rng.contraction(n);
    case 2: return rng.unitary(n);
    default: return rng.partial_isometry(n);
  }
}

inline void ideal(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const Matrix a = ideal_factor(rng, n);
  const Matrix b = rng.log_uniform(1e-2, 1e2) * rng.ginibre(n);
  const Matrix c = ideal_factor(rng, n);
  const Vector s_abc = sv(a * b * c), sb = sv(b);
  const double na = operator_norm(a), nc = operator_norm(c);
  for (const auto& g : cfg.gauges) {
    log.check("ideal", g(s_abc), na * g(sb) * nc, [&] {
      return Json{{"gauge", g.to_string()}, {"A", mat(a)}, {"B", mat(b)}, {"C", mat(c)}};
    });
  }
}

inline Matrix transfer_input(Sampler& rng, Eigen::Index n) {
  switch (rng.integer(0, 2)) {
    case 0: return rng.log_uniform(1e-2, 1e2) * rng.ginibre(n);
    case 1: return rng.hermitian(n);
    default: return scaled_psd(rng, n);
  }
}

inline void contraction_transfer(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const UcptpMixture phi = rng.ucptp_mixture(n);
  const Matrix x = transfer_input(rng, n);
  const Vector sx = sv(x), sphi = sv(phi.apply(x));
  for (const auto& g : cfg.gauges) {
    log.check("contraction", g(sphi), g(sx), [&] {
      Json us = Json::array();
      for (const auto& u : phi.unitaries) us.push_back(mat(u));
      return Json{{"gauge", g.to_string()}, {"weights", phi.weights}, {"unitaries", us}, {"X", mat(x)}};
    });
  }
}

inline void fan_dominance(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const Matrix b = transfer_input(rng, n);
  const Vector sb = sv(b);
  Matrix a;
  switch (rng.integer(0, 2)) {
    case 0: a = rng.ucptp_mixture(n).apply(b); break;
    case 1: {
      // s_A = c * D s_B with D a random convex combination of permutations.
      const int terms = rng.integer(1, 3);
      const Vector w = rng.dirichlet(terms);
      Vector sa = Vector::Zero(n);
      for (int t = 0; t < terms; ++t) {
        Vector perm = sb;
        std::shuffle(perm.data(), perm.data() + n, rng.engine());
        sa += w[t] * perm;
      }
      sa *= rng.uniform(0.5, 1.0);
      a = rng.unitary(n) * sa.cast<Complex>().asDiagonal() * rng.unitary(n);
      break;
    }
    default: a = rng.unitary(n) * b * rng.unitary(n); break;
  }
  const Vector sa = sv(a);

  double ka = 0.0, kb = 0.0;
  bool dominated = true;
  for (Eigen::Index k = 0; k < n; ++k) {
    ka += sa[k];
    kb += sb[k];
    if (ka > kb * (1.0 + 1e-12)) dominated = false;
  }
  if (!dominated) {
    log.observe("precondition_failed", 1.0, 0.0);
    return;
  }
  for (const auto& g : cfg.gauges) {
    log.check("fan_dominance", g(sa), g(sb),
              [&] { return Json{{"gauge", g.to_string()}, {"A", mat(a)}, {"B", mat(b)}}; });
  }
}

// ---------------------------------------------------------------- section 4

inline void lemma41(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const auto [x, y] = psd_pair(rng, n);
  const Eigh ex = psd_eigh(x), ey = psd_eigh(y);
  const Vector sd = sv_h(x - y);
  for (double p : cfg.p_grid) {
    const Vector spd = sv_h(psd_power(ex, p) - psd_power(ey, p));
    for (const auto& g : cfg.gauges) {
      log.check("lemma41", std::pow(conv_norm(g, sd, p), p), g(spd), [&] {
        return Json{{"gauge", g.to_string()}, {"p", p}, {"x", mat(x)}, {"y", mat(y)}};
      });
    }
  }
}

inline void lemma42(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const auto [x, y] = psd_pair(rng, n);
  const Eigh ex = psd_eigh(x), ey = psd_eigh(y);
  const Vector sx = ex.values.cwiseAbs(), sy = ey.values.cwiseAbs();
  const Vector sd = sv_h(x - y);
  for (double theta : {0.25, 0.5, 0.75, 1.0}) {
    const double q = 1.0 + theta;
    const Vector spd = sv_h(psd_power(ex, q) - psd_power(ey, q));
    for (const auto& g : cfg.gauges) {
      const double m = std::max(conv_norm(g, sx, q), conv_norm(g, sy, q));
      log.check("lemma42", g(spd), 3.0 * conv_norm(g, sd, q) * std::pow(m, theta), [&] {
        return Json{{"gauge", g.to_string()}, {"theta", theta}, {"x", mat(x)}, {"y", mat(y)}};
      });
    }
  }
}

inline void cor43(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const auto [x, y] = psd_pair(rng, n);
  const Eigh ex = psd_eigh(x), ey = psd_eigh(y);
  const Vector sx = ex.values.cwiseAbs(), sy = ey.values.cwiseAbs();
  const Vector sd = sv_h(x - y);
  for (double p : cfg.p_grid) {
    const Vector spd = sv_h(psd_power(ex, p) - psd_power(ey, p));
    for (const auto& g : cfg.gauges) {
      const double base = conv_norm(g, sd, p) * std::pow(std::max(conv_norm(g, sx, p), conv_norm(g, sy, p)), p - 1.0);
      log.check("cor43", g(spd), 3.0 * p * base, [&] {
        return Json{{"gauge", g.to_string()}, {"p", p}, {"x", mat(x)}, {"y", mat(y)}};
      });
      if (p == std::floor(p)) log.observe("integer_p_constant_p", g(spd), p * base);
    }
  }
}

/// x PSD and b a contraction, or the block pair diag(x1, x2), [[0, I], [0, 0]].
inline Pair commutator_operands(Sampler& rng, Eigen::Index n) {
  if (rng.integer(0, 2) == 0) {
    const Eigen::Index m = std::max<Eigen::Index>(1, n / 2);
    const TildePair t = tilde_pair(scaled_psd(rng, m), scaled_psd(rng, m));
    return Pair{t.x, t.b};
  }
  return Pair{scaled_psd(rng, n), contraction_operand(rng, n)};
}

inline void lemma44(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const auto [x, b] = commutator_operands(rng, n);
  const Eigh ex = psd_eigh(x);
  const Vector sx = ex.values.cwiseAbs();
  const Vector sc = sv(commutator(x, b));
  for (double p : cfg.p_grid) {
    const Vector scp = sv(commutator(psd_power(ex, p), b));
    auto payload = [&, p] { return Json{{"p", p}, {"x", mat(x)}, {"b", mat(b)}}; };
    for (const auto& g : cfg.gauges) {
      const double c_xb = conv_norm(g, sc, p);
      const double c_xpb = g(scp);
      log.check("bound1", c_xb, 4.0 * std::pow(2.0, 1.0 / p) * std::pow(c_xpb, 1.0 / p), [&] {
        Json j = payload();
        j["gauge"] = g.to_string();
        return j;
      });
      log.check("bound2", c_xpb, 24.0 * p * std::pow(conv_norm(g, sx, p), p - 1.0) * c_xb, [&] {
        Json j = payload();
        j["gauge"] = g.to_string();
        return j;
      });
    }
  }
}

inline void lemma45(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const auto [x, y] = psd_pair(rng, n);
  const Matrix b = rng.coin() ? contraction_operand(rng, n) : rng.log_uniform(1e-2, 1e2) * rng.ginibre(n);
  const Eigh ex = psd_eigh(x), ey = psd_eigh(y);
  Vector sxy(2 * n);
  sxy << ex.values.cwiseAbs(), ey.values.cwiseAbs();
  const double nb = operator_norm(b);
  const Vector s1 = sv(x * b + b * y);
  for (double p : cfg.p_grid) {
    const Vector sp = sv(psd_power(ex, p) * b + b * psd_power(ey, p));
    for (const auto& g : cfg.gauges) {
      auto payload = [&] { return Json{{"gauge", g.to_string()}, {"p", p}, {"x", mat(x)}, {"y", mat(y)}, {"b", mat(b)}}; };
      const double n1 = conv_norm(g, s1, p);
      const double np = g(sp);
      log.check("bound1", np, 3.0 * std::pow(conv_norm(g, sxy, p), p - 1.0) * n1, payload);
      const double rhs2 = std::pow(2.0, 1.0 - 1.0 / p) * std::pow(nb, 1.0 - 1.0 / p) * std::pow(np, 1.0 / p);
      if (p >= 3.0) {
        log.check("bound2", n1, rhs2, payload);
      } else {
        log.observe("bound2_p_below_3", n1, rhs2);
      }
    }
  }
}

inline void schur(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const Matrix a = scaled_psd(rng, n), bm = scaled_psd(rng, n);
  const Matrix x = rng.log_uniform(1e-2, 1e2) * rng.ginibre(n);
  const Eigh ea = psd_eigh(a), eb = psd_eigh(bm);
  const Vector srhs = sv(a * x + x * bm);
  auto power = [](const Eigh& e, double al) {
    if (al == 0.0) return Matrix(Matrix::Identity(e.values.size(), e.values.size()));
    return psd_power(e, al);
  };
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Vector slhs = sv(power(ea, 1.0 - alpha) * x * power(eb, alpha) + power(ea, alpha) * x * power(eb, 1.0 - alpha));
    for (const auto& g : cfg.gauges) {
      log.check("schur", g(slhs), g(srhs), [&] {
        return Json{{"gauge", g.to_string()}, {"alpha", alpha}, {"A", mat(a)}, {"B", mat(bm)}, {"X", mat(x)}};
      });
    }
  }
}

/// Constant for the second commutator inequality built from the e_+/e_-
/// decomposition: two diagonal blocks at 4 * 2^{1/p}, two off-diagonal blocks
/// at 2^{1-1/p}, with ||b||_inf <= 1.
inline double lemma47_constant(double p) { return 8.0 * std::pow(2.0, 1.0 / p) + std::pow(2.0, 2.0 - 1.0 / p); }

inline void lemma47(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  Matrix x, b;
  if (rng.integer(0, 2) == 0) {
    const Eigen::Index m = std::max<Eigen::Index>(1, n / 2);
    const double s1 = rng.log_uniform(1e-2, 1e2), s2 = rng.log_uniform(1e-2, 1e2);
    const TildePair t = tilde_pair(s1 * rng.hermitian(m), s2 * rng.hermitian(m));
    x = t.x;
    b = t.b;
  } else {
    x = rng.log_uniform(1e-2, 1e2) * rng.hermitian(n);
    b = contraction_operand(rng, n);
  }
  const Eigh ex = eigh(x);
  const Vector sx = ex.values.cwiseAbs();
  const Vector sc = sv(commutator(x, b));
  for (double p : cfg.p_grid) {
    const Vector sg = sv(commutator(signed_power(ex, p), b));
    for (const auto& g : cfg.gauges) {
      const double c_xb = conv_norm(g, sc, p);
      const double c_gb = g(sg);
      log.observe("ineq1_constant", c_gb, std::pow(conv_norm(g, sx, p), p - 1.0) * c_xb);
      if (p >= 3.0) {
        log.check("ineq2", c_xb, lemma47_constant(p) * std::pow(c_gb, 1.0 / p), [&] {
          return Json{{"gauge", g.to_string()}, {"p", p}, {"x", mat(x)}, {"b", mat(b)}};
        });
      } else if (p > 1.0) {
        log.observe("ineq2_p_below_3", c_xb, lemma47_constant(p) * std::pow(c_gb, 1.0 / p));
      }
    }
  }
}

// ---------------------------------------------------------------- section 5

inline double finite_entropy(const DensityMatrix& rho, const Matrix& sigma, bool& finite) {
  const RelativeEntropy d = rel_entropy(rho, sigma);
  finite = d.finite();
  return finite ? d.value() : 0.0;
}

inline Matrix random_state(Sampler& rng, Eigen::Index n) { return rng.coin() ? rng.state(n) : rng.low_rank_state(n); }

inline void entropy_props(const SuiteConfig&, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const DensityMatrix rho(random_state(rng, n));
  bool f1 = false, f2 = false;

  // (a) monotonicity, normalized so that tr(sigma') = 1.
  {
    const Matrix s0 = rng.coin() ? rng.psd(n) : rng.low_rank_psd(n);
    const Matrix sp0 = s0 + rng.log_uniform(1e-3, 1e1) * (rng.coin() ? rng.psd(n) : rng.low_rank_psd(n));
    const double t = sp0.trace().real();
    const Matrix sigma = hermitian_part(s0 / t), sigma_p = hermitian_part(sp0 / t);
    const double d = finite_entropy(rho, sigma, f1);
    const double dp = finite_entropy(rho, sigma_p, f2);
    if (f1) {
      log.check("monotonicity", f2 ? dp : std::numeric_limits<double>::infinity(), d, [&] {
        return Json{{"rho", mat(rho.mat())}, {"sigma", mat(sigma)}, {"sigma_prime", mat(sigma_p)}};
      });
    } else {
      log.observe("monotonicity_infinite_rhs", 0.0, 1.0);
    }
  }

  // (b) scalar rule and nonnegativity.
  {
    const Matrix sigma = rng.coin() ? rng.state(n) : Matrix(rho.mat());
    const double c = rng.log_uniform(1e-3, 1e3);
    const double d = finite_entropy(rho, sigma, f1);
    const double dc = finite_entropy(rho, c * sigma, f2);
    if (f1 && f2) {
      log.check("scalar_rule", std::abs(dc - d + std::log(c)), 0.0, [&] {
        return Json{{"rho", mat(rho.mat())}, {"sigma", mat(sigma)}, {"c", c}};
      });
      log.check("nonnegativity", -d, 0.0, [&] { return Json{{"rho", mat(rho.mat())}, {"sigma", mat(sigma)}}; });
    }
  }

  // (c) joint convexity over up to three pairs with tr(sigma_j) <= 1.
  {
    const int m = rng.integer(1, 3);
    const Vector w = rng.dirichlet(m);
    std::vector<Matrix> rhos, sigmas;
    Matrix rho_mix = Matrix::Zero(n, n), sigma_mix = Matrix::Zero(n, n);
    double rhs = 0.0;
    bool finite = true;
    for (int j = 0; j < m; ++j) {
      rhos.push_back(j == 0 ? rho.mat() : random_state(rng, n));
      sigmas.push_back(rng.uniform(0.1, 1.0) * rng.state(n));
      rhs += w[j] * finite_entropy(DensityMatrix(rhos.back()), sigmas.back(), f1);
      finite = finite && f1;
      rho_mix += w[j] * rhos.back();
      sigma_mix += w[j] * sigmas.back();
    }
    const double lhs = finite_entropy(DensityMatrix::normalized(rho_mix), hermitian_part(sigma_mix), f2);
    if (finite) {
      log.check("joint_convexity", f2 ? lhs : std::numeric_limits<double>::infinity(), rhs, [&] {
        Json rs = Json::array(), ss = Json::array();
        for (int j = 0; j < m; ++j) {
          rs.push_back(mat(rhos[j]));
          ss.push_back(mat(sigmas[j]));
        }
        return Json{{"weights", std::vector<double>(w.data(), w.data() + m)}, {"rhos", rs}, {"sigmas", ss}};
      });
    }
  }
}

inline void lemma53(const SuiteConfig&, Sampler& rng, Eigen::Index n, CaseLog& log) {
  Matrix a, b;
  switch (rng.integer(0, 3)) {
    case 0:
      a = rng.psd(n);
      b = rng.psd(n);
      break;
    case 1:
      a = rng.low_rank_psd(n);
      b = rng.low_rank_psd(n);
      break;
    case 2:
      a = rng.log_uniform(1e-3, 1e3) * rng.psd(n);
      b = Matrix::Zero(n, n);
      break;
    default:
      a = rng.psd(n);
      b = rng.log_uniform(1e-6, 1e-1) * a + rng.low_rank_psd(n);
      break;
  }
  if (rng.coin()) std::swap(a, b);
  for (double eps : {0.5, 0.1, 0.01}) {
    const Matrix diff = log_on_support(hermitian_part(a + eps * b)) - log_on_support(hermitian_part(b + eps * a));
    log.check("log_difference", sv_h(diff)[0], std::abs(std::log(eps)), [&] {
      return Json{{"epsilon", eps}, {"A", mat(a)}, {"B", mat(b)}};
    });
  }

  // Equality at (A, B) = (c I, 0).
  const double c = rng.coin() ? 1.0 : rng.log_uniform(1e-3, 1e3);
  const Matrix id = c * Matrix::Identity(n, n);
  const Matrix zero = Matrix::Zero(n, n);
  for (double eps : {0.5, 0.1, 0.01}) {
    const Matrix diff = log_on_support(id + eps * zero) - log_on_support(zero + eps * id);
    log.check_within("equality_case", std::abs(sv_h(diff)[0] - std::abs(std::log(eps))), 1e-12,
                     [&] { return Json{{"epsilon", eps}, {"c", c}, {"dim", n}}; });
  }
}

inline void lemma54(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const Matrix r1 = random_state(rng, n);
  Matrix r2;
  switch (rng.integer(0, 2)) {
    case 0: r2 = r1; break;
    case 1: {
      const double t = rng.uniform() < 0.5 ? rng.log_uniform(1e-6, 0.5) : rng.uniform(0.0, 0.5);
      r2 = hermitian_part((1.0 - t) * r1 + t * random_state(rng, n));
      break;
    }
    default: r2 = random_state(rng, n); break;
  }
  const double dist = trace_norm(r1 - r2);
  if (dist > 1.0) {
    log.observe("pair_outside_hypothesis", dist, 1.0);
    return;
  }
  const DensityMatrix rho1(r1), rho2 = DensityMatrix::normalized(r2);
  for (const auto& g : smooth_strict(cfg.gauges)) {
    const Matrix f1 = entropy_min_mat(g, rho1).minimizer;
    const Matrix f2 = entropy_min_mat(g, rho2).minimizer;
    const double mean = g(sv_h(0.5 * (f1 + f2)));
    log.check("midpoint", 1.0 - std::sqrt(dist), mean, [&] {
      return Json{{"gauge", g.to_string()}, {"rho1", mat(r1)}, {"rho2", mat(r2)}};
    });
  }
}

inline constexpr double kFixedPointTolerance = 1e-6;
inline constexpr double kInverseFixedPointTolerance = 1e-5;

inline void roundtrip(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const DensityMatrix rho(random_state(rng, n));
  const Matrix p = rng.coin() ? rng.psd(n) : rng.low_rank_psd(n);
  const Matrix u = rng.unitary(n);
  for (const auto& g : smooth_strict(cfg.gauges)) {
    const EntropyMinReport rep = entropy_min_mat(g, rho);
    log.check("G_of_F", rep.fixed_point_residual, kFixedPointTolerance, [&] {
      return Json{{"gauge", g.to_string()}, {"rho", mat(rho.mat())}};
    });

    const Matrix a = hermitian_part(p / g(sv_h(p)));
    const DensityMatrix ga(hermitian_part(G_map(g, a)));
    const double r2 = trace_norm(entropy_min_mat(g, ga).minimizer - a);
    log.check("F_of_G", r2, kInverseFixedPointTolerance, [&] { return Json{{"gauge", g.to_string()}, {"A", mat(a)}}; });

    // Polar extension on a non-positive element with the same spectrum.
    const Matrix ua = u * a;
    const double r3 = trace_norm(entropy_min_general(g, G_map(g, ua)) - ua);
    log.check("F_of_G_general", r3, kInverseFixedPointTolerance,
              [&] { return Json{{"gauge", g.to_string()}, {"A", mat(ua)}}; });
  }
}

inline std::vector<double> mazur_entropy_exponents(const SuiteConfig& cfg) {
  std::set<double> ps;
  for (double p : cfg.p_grid) {
    if (p > 1.0) ps.insert(p);
  }
  for (const auto& g : cfg.gauges) {
    if (g.kind() == Gauge::Kind::Lp && g.exponent() > 1.0 && std::isfinite(g.exponent())) ps.insert(g.exponent());
  }
  return {ps.begin(), ps.end()};
}

inline void mazur_entropy(const SuiteConfig& cfg, Sampler& rng, Eigen::Index n, CaseLog& log) {
  const DensityMatrix rho(random_state(rng, n));
  for (double p : mazur_entropy_exponents(cfg)) {
    const Matrix f = entropy_min_mat(Gauge::lp(p), rho).minimizer;
    const Matrix ref = mazur_inverse(MazurParams(Gauge::lp(1.0), p), rho.mat());
    log.check("F_equals_Gp_inverse", trace_norm(f - ref), kFixedPointTolerance,
              [&] { return Json{{"p", p}, {"rho", mat(rho.mat())}}; });
  }
}

}  // namespace suites

using SuiteFn = void (*)(const SuiteConfig&, Sampler&, Eigen::Index, CaseLog&);

struct SuiteEntry {
  std::string_view name;
  SuiteFn fn;
};

inline const std::vector<SuiteEntry>& suite_registry() {
  static const std::vector<SuiteEntry> registry{
      {"holder", suites::holder},
      {"ideal", suites::ideal},
      {"contraction_transfer", suites::contraction_transfer},
      {"fan_dominance", suites::fan_dominance},
      {"lemma41", suites::lemma41},
      {"lemma42", suites::lemma42},
      {"cor43", suites::cor43},
      {"lemma44", suites::lemma44},
      {"lemma45", suites::lemma45},
      {"schur", suites::schur},
      {"lemma47", suites::lemma47},
      {"entropy_props", suites::entropy_props},
      {"lemma53", suites::lemma53},
      {"lemma54", suites::lemma54},
      {"roundtrip", suites::roundtrip},
      {"mazur_entropy", suites::mazur_entropy},
  };
  return registry;
}

inline std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& e : suite_registry()) out.emplace_back(e.name);
  return out;
}

inline SuiteReport run_inequality_suite(std::string_view name, const SuiteConfig& cfg, int threads = 1) {
  const SuiteEntry* entry = nullptr;
  for (const auto& e : suite_registry()) {
    if (e.name == name) entry = &e;
  }
  if (!entry) throw Error(ErrorCode::UnknownSuite, "unknown suite '" + std::string(name) + "'");
  cfg.validate();

  const std::int64_t per_dim = cfg.samples_per_case;
  const std::int64_t total = per_dim * static_cast<std::int64_t>(cfg.dims.size());
  CaseLog log = run_partitioned(total, threads, cfg.rel_tol, cfg.abs_tol,
                                [&](std::int64_t first, std::int64_t last, CaseLog& out) {
                                  for (std::int64_t i = first; i < last; ++i) {
                                    const int dim = cfg.dims[static_cast<std::size_t>(i / per_dim)];
                                    Sampler rng = Sampler::for_sample(cfg.seed, entry->name, dim,
                                                                      static_cast<std::uint64_t>(i % per_dim));
                                    entry->fn(cfg, rng, dim, out);
                                    out.count_case();
                                  }
                                });

  SuiteReport r;
  r.suite_name = std::string(name);
  r.cases_run = log.cases();
  r.violation_count = log.violation_count();
  r.violations = log.violations();
  r.worst_ratio = log.worst_ratio();
  r.passed = log.violation_count() == 0;
  r.checks = log.checks();
  r.observations = log.observations();
  r.config = cfg;
  return r;
}

}  // namespace spectral_mazur
