#pragma once

// Empirical moduli of continuity for G_p, G_p^{-1}, F_X and F_X^{-1} = G.
// Pairs of points on the relevant unit sphere are binned by input distance t;
// each bin keeps the largest output distance, and omega is reported as the
// running maximum over bins so that it is nondecreasing in t.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "entropy.hpp"
#include "mazur.hpp"
#include "suites.hpp"
#include "verify.hpp"

namespace spectral_mazur {

enum class ModulusMap { Gp, GpInv, FX, FXInv };

inline ModulusMap parse_modulus_map(std::string_view s) {
  if (s == "Gp") return ModulusMap::Gp;
  if (s == "Gp_inv") return ModulusMap::GpInv;
  if (s == "FX") return ModulusMap::FX;
  if (s == "FX_inv") return ModulusMap::FXInv;
  throw Error(ErrorCode::InvalidArgument, "unknown map '" + std::string(s) + "' (expected Gp, Gp_inv, FX, FX_inv)");
}

inline std::string_view to_string(ModulusMap m) {
  switch (m) {
    case ModulusMap::Gp: return "Gp";
    case ModulusMap::GpInv: return "Gp_inv";
    case ModulusMap::FX: return "FX";
    case ModulusMap::FXInv: return "FX_inv";
  }
  return "?";
}

struct ModulusBin {
  double t = 0.0;        // upper edge of the bin
  double omega = 0.0;    // monotone envelope
  double raw_max = 0.0;  // largest output distance inside the bin
  std::int64_t count = 0;
  std::optional<double> bound;
};

struct ModulusProfile {
  std::string map_name;
  std::string gauge;
  double p = 1.0;
  bool positive = true;
  std::string bound_name;  // empty when no closed-form curve applies
  std::vector<ModulusBin> bins;
  std::int64_t samples = 0;
  std::int64_t exceedances = 0;
  double worst_bound_ratio = 0.0;
  std::vector<Json> exceeding;  // first few offending pairs
  SuiteConfig config;
  bool passed() const { return exceedances == 0; }
};

struct ModulusOptions {
  bool positive = true;  // positive part of the sphere, or the whole sphere
  int threads = 1;
  int bins = 40;
  double t_max = 2.0;
  double slack = 1e-9;
};

namespace detail {

struct ModulusSample {
  double t = 0.0;
  double omega = 0.0;
  Json payload;  // filled only when the bound is exceeded
};

/// Bound curve omega <= b(t) and its name, when one is available.
struct BoundCurve {
  std::string name;
  std::function<double(double)> f;
};

inline std::optional<BoundCurve> bound_curve(ModulusMap map, const MazurParams& mp, bool positive) {
  if (!positive) return std::nullopt;
  const double p = mp.p;
  const Gauge& g = mp.gauge;
  const bool lp = g.kind() == Gauge::Kind::Lp && std::isfinite(g.exponent());
  switch (map) {
    case ModulusMap::Gp:
      return BoundCurve{"3p*t", [p](double t) { return 3.0 * p * t; }};
    case ModulusMap::GpInv:
      return BoundCurve{"t^(1/p)", [p](double t) { return std::pow(t, 1.0 / p); }};
    case ModulusMap::FX: {
      // Midpoint bound 1 - ||(F1 + F2)/2|| <= sqrt(t) with Clarkson's modulus
      // of convexity for S_q, q >= 2.
      if (!lp || g.exponent() < 2.0) return std::nullopt;
      const double q = g.exponent();
      return BoundCurve{"2*(1-(1-sqrt(t))^q)^(1/q)", [q](double t) {
                          if (t >= 1.0) return 2.0;
                          return 2.0 * std::pow(1.0 - std::pow(1.0 - std::sqrt(t), q), 1.0 / q);
                        }};
    }
    case ModulusMap::FXInv: {
      // G(A) = A^q on the positive S_q sphere; the power bound with E = S_1.
      if (!lp || g.exponent() <= 1.0) return std::nullopt;
      const double q = g.exponent();
      return BoundCurve{"3q*t", [q](double t) { return 3.0 * q * t; }};
    }
  }
  return std::nullopt;
}

inline Matrix normalize_to(const Gauge& g, const Matrix& a) {
  const double nrm = g(singular_values(a).values);
  if (!(nrm > 0.0)) throw Error(ErrorCode::ZeroMatrix, "cannot normalize the zero matrix");
  return a / nrm;
}

/// A pair of points before normalization: independent, nearby, or built
/// from the 2x2 block constructions.
inline suites::Pair raw_pair(Sampler& rng, Eigen::Index n, bool positive) {
  auto fresh = [&] {
    if (positive) return Matrix(rng.coin() ? rng.psd(n) : rng.low_rank_psd(n));
    return Matrix(rng.ginibre(n));
  };
  const Matrix x = fresh();
  switch (rng.integer(0, 3)) {
    case 0: return suites::Pair{x, fresh()};
    case 1:
    case 2: {
      const double eta = rng.log_uniform(1e-5, 1.0) * x.norm() / std::sqrt(static_cast<double>(n));
      Matrix y = x + eta * fresh();
      if (positive) y = hermitian_part(y);
      return suites::Pair{x, y};
    }
    default: {
      if (positive) {
        const Eigen::Index m = std::max<Eigen::Index>(1, n / 2);
        const Matrix a = rng.psd(m), b = rng.psd(m);
        return suites::Pair{block_diagonal(a, b), block_diagonal(b, a)};
      }
      const Eigen::Index m = std::max<Eigen::Index>(1, n / 2);
      const Matrix a = rng.ginibre(m);
      const Matrix b = a + rng.log_uniform(1e-4, 1.0) * rng.ginibre(m);
      return suites::Pair{tilde_selfadjoint(a), tilde_selfadjoint(b)};
    }
  }
}

inline ModulusSample modulus_sample(ModulusMap map, const MazurParams& mp, const Gauge& dom, Sampler& rng,
                                    Eigen::Index n, bool positive) {
  const suites::Pair raw = raw_pair(rng, n, positive);
  const Gauge& e = mp.gauge;
  ModulusSample out;
  Matrix x, y, fx, fy;
  switch (map) {
    case ModulusMap::Gp: {
      x = normalize_to(dom, raw.x);
      y = normalize_to(dom, raw.y);
      fx = mazur_forward(mp, x);
      fy = mazur_forward(mp, y);
      out.t = norm_ui(dom, x - y);
      out.omega = norm_ui(e, fx - fy);
      break;
    }
    case ModulusMap::GpInv: {
      x = normalize_to(e, raw.x);
      y = normalize_to(e, raw.y);
      fx = mazur_inverse(mp, x);
      fy = mazur_inverse(mp, y);
      out.t = norm_ui(e, x - y);
      out.omega = norm_ui(dom, fx - fy);
      break;
    }
    case ModulusMap::FX: {
      x = raw.x / trace_norm(raw.x);
      y = raw.y / trace_norm(raw.y);
      if (positive) {
        fx = entropy_min_mat(e, DensityMatrix(hermitian_part(x))).minimizer;
        fy = entropy_min_mat(e, DensityMatrix(hermitian_part(y))).minimizer;
      } else {
        fx = entropy_min_general(e, x);
        fy = entropy_min_general(e, y);
      }
      out.t = trace_norm(x - y);
      out.omega = norm_ui(e, fx - fy);
      break;
    }
    case ModulusMap::FXInv: {
      x = normalize_to(e, raw.x);
      y = normalize_to(e, raw.y);
      fx = G_map(e, x);
      fy = G_map(e, y);
      out.t = norm_ui(e, x - y);
      out.omega = trace_norm(fx - fy);
      break;
    }
  }
  out.payload = Json{{"x", matrix_to_json(x)}, {"y", matrix_to_json(y)}};
  return out;
}

}  // namespace detail

/// Samples cfg.samples_per_case pairs; pair i lives in dimension
/// cfg.dims[i mod |dims|].
inline ModulusProfile estimate_modulus(ModulusMap map, const SuiteConfig& cfg, const MazurParams& mp,
                                       const ModulusOptions& opt = {}) {
  cfg.validate();
  if (opt.bins < 1 || !(opt.t_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "modulus: bad binning");
  if (map == ModulusMap::FX || map == ModulusMap::FXInv) {
    if (!mp.gauge.smooth()) throw Error(ErrorCode::NotSmooth, mp.gauge.to_string() + " is not smooth");
    if (!mp.gauge.strictly_convex()) {
      throw Error(ErrorCode::NotStrictlyConvex, mp.gauge.to_string() + " is not strictly convex");
    }
  }
  const Gauge dom = mp.domain_gauge();
  const auto curve = detail::bound_curve(map, mp, opt.positive);
  const std::string stream = "modulus:" + std::string(to_string(map));

  const std::int64_t total = cfg.samples_per_case;
  const auto samples = map_partitioned<detail::ModulusSample>(total, opt.threads, [&](std::int64_t i) {
    const int dim = cfg.dims[static_cast<std::size_t>(i) % cfg.dims.size()];
    Sampler rng = Sampler::for_sample(cfg.seed, stream, dim, static_cast<std::uint64_t>(i));
    detail::ModulusSample s = detail::modulus_sample(map, mp, dom, rng, dim, opt.positive);
    if (!(curve && s.omega > curve->f(s.t) * (1.0 + opt.slack) + opt.slack)) s.payload = nullptr;
    return s;
  });

  ModulusProfile prof;
  prof.map_name = std::string(to_string(map));
  prof.gauge = mp.gauge.to_string();
  prof.p = mp.p;
  prof.positive = opt.positive;
  prof.samples = total;
  prof.config = cfg;
  if (curve) prof.bound_name = curve->name;

  // Bin 0 holds t == 0 exactly; bins 1..B split (0, t_max]; larger t goes to
  // the last bin.
  const double width = opt.t_max / opt.bins;
  prof.bins.resize(static_cast<std::size_t>(opt.bins) + 1);
  for (int b = 0; b <= opt.bins; ++b) prof.bins[b].t = b * width;
  for (const auto& s : samples) {
    std::size_t b = 0;
    if (s.t > 0.0) b = std::min<std::size_t>(opt.bins, static_cast<std::size_t>(std::ceil(s.t / width)));
    b = std::max<std::size_t>(b, s.t > 0.0 ? 1 : 0);
    ModulusBin& bin = prof.bins[b];
    ++bin.count;
    bin.raw_max = std::max(bin.raw_max, s.omega);
    if (curve) {
      const double bound = curve->f(s.t);
      prof.worst_bound_ratio = std::max(prof.worst_bound_ratio, s.omega / (bound + opt.slack));
      if (!s.payload.is_null()) {
        ++prof.exceedances;
        if (prof.exceeding.size() < 20) {
          Json j = s.payload;
          j["t"] = s.t;
          j["omega"] = s.omega;
          j["bound"] = bound;
          prof.exceeding.push_back(std::move(j));
        }
      }
    }
  }
  double env = 0.0;
  for (auto& bin : prof.bins) {
    env = std::max(env, bin.raw_max);
    bin.omega = env;
    if (curve) bin.bound = curve->f(bin.t);
  }
  return prof;
}

inline Json to_json(const ModulusProfile& m) {
  Json bins = Json::array();
  for (const auto& b : m.bins) {
    Json j{{"t", b.t}, {"omega", b.omega}, {"raw_max", b.raw_max}, {"count", b.count}};
    j["bound"] = b.bound ? Json(*b.bound) : Json(nullptr);
    bins.push_back(std::move(j));
  }
  return Json{{"map_name", m.map_name},
              {"gauge", m.gauge},
              {"p", m.p},
              {"domain", m.positive ? "positive" : "general"},
              {"bound_curve", m.bound_name.empty() ? Json(nullptr) : Json(m.bound_name)},
              {"bins", bins},
              {"samples", m.samples},
              {"exceedances", m.exceedances},
              {"worst_bound_ratio", m.worst_bound_ratio},
              {"exceeding_pairs", m.exceeding},
              {"passed", m.passed()},
              {"config", to_json(m.config)}};
}

inline std::string to_csv(const ModulusProfile& m) {
  std::ostringstream out;
  out.precision(17);
  out << "t,omega,count,bound\n";
  for (const auto& b : m.bins) {
    out << b.t << ',' << b.omega << ',' << b.count << ',';
    if (b.bound) out << *b.bound;
    out << '\n';
  }
  return out.str();
}

}  // namespace spectral_mazur
