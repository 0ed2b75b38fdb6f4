#pragma once

// Symmetric gauge functions (1-symmetric norms on R^n): l_p, Ky Fan k-norms,
// p-convexifications and trace duals, with evaluation, norming functionals
// and the sequence-space duality map.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace spectral_mazur {

using Vector = Eigen::VectorXd;

class Gauge;
Gauge convexify(const Gauge& g, double p);
Gauge dual_gauge(const Gauge& g);

/// Immutable descriptor of a symmetric gauge function. Cheap to copy; nodes
/// are shared. Construct through `lp`, `kyfan`, `convexify`, `dual_gauge` or
/// `parse`; all of them return the canonical form (l_p absorbs
/// convexifications, double duals cancel).
class Gauge {
 public:
  enum class Kind { Lp, KyFan, Convexified, Dual };

  static Gauge lp(double p) {
    if (std::isnan(p) || p < 1.0) {
      throw Error(ErrorCode::InvalidArgument, "l_p exponent must be >= 1, got " + std::to_string(p));
    }
    return Gauge(std::make_shared<const Node>(Node{Kind::Lp, p, 0, nullptr}));
  }

  static Gauge kyfan(int k) {
    if (k < 1) {
      throw Error(ErrorCode::InvalidArgument, "Ky Fan index must be >= 1, got " + std::to_string(k));
    }
    return Gauge(std::make_shared<const Node>(Node{Kind::KyFan, 0.0, k, nullptr}));
  }

  /// Parses `lp:2`, `lp:inf`, `kyfan:3`, `conv:<p>:<base>`, `dual:<base>`.
  static Gauge parse(std::string_view text);

  Kind kind() const { return node_->kind; }
  /// l_p exponent for Lp, convexification exponent for Convexified.
  double exponent() const { return node_->p; }
  int k() const { return node_->k; }
  Gauge base() const { return Gauge(node_->base); }

  bool smooth() const { return smooth(*node_); }
  bool strictly_convex() const { return strictly_convex(*node_); }

  double operator()(const Vector& v) const { return eval(*node_, v); }

  std::string to_string() const { return to_string(*node_); }

  friend Gauge convexify(const Gauge& g, double p);
  friend Gauge dual_gauge(const Gauge& g);
  friend Vector norming_vector(const Gauge& g, const Vector& v);

 private:
  struct Node {
    Kind kind;
    double p;  // Lp exponent or convexification exponent
    int k;     // Ky Fan index
    std::shared_ptr<const Node> base;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Gauge(NodePtr node) : node_(std::move(node)) {}

  static double conjugate_exponent(double p) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(p)) return 1.0;
    return 1.0 / (1.0 - 1.0 / p);
  }

  static bool smooth(const Node& n) {
    switch (n.kind) {
      case Kind::Lp: return n.p > 1.0 && std::isfinite(n.p);
      case Kind::KyFan: return false;
      case Kind::Convexified: return smooth(*n.base);
      case Kind::Dual: return strictly_convex(*n.base);
    }
    return false;
  }

  static bool strictly_convex(const Node& n) {
    switch (n.kind) {
      case Kind::Lp: return n.p > 1.0 && std::isfinite(n.p);
      case Kind::KyFan: return false;
      case Kind::Convexified: return strictly_convex(*n.base);
      case Kind::Dual: return smooth(*n.base);
    }
    return false;
  }

  static std::string format_number(double x) {
    if (std::isinf(x)) return "inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
  }

  static std::string to_string(const Node& n) {
    switch (n.kind) {
      case Kind::Lp: return "lp:" + format_number(n.p);
      case Kind::KyFan: return "kyfan:" + std::to_string(n.k);
      case Kind::Convexified: return "conv:" + format_number(n.p) + ":" + to_string(*n.base);
      case Kind::Dual: return "dual:" + to_string(*n.base);
    }
    return {};
  }

  static double eval_lp(double p, const Vector& v) {
    if (v.size() == 0) return 0.0;
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0 || std::isinf(p)) return m;
    if (p == 1.0) return v.cwiseAbs().sum();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / m, p);
    return m * std::pow(acc, 1.0 / p);
  }

  static double eval_kyfan(int k, const Vector& v) {
    std::vector<double> a(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) a[i] = std::abs(v[i]);
    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), a.size());
    std::partial_sort(a.begin(), a.begin() + kk, a.end(), std::greater<>());
    return std::accumulate(a.begin(), a.begin() + kk, 0.0);
  }

  static double eval(const Node& n, const Vector& v) {
    switch (n.kind) {
      case Kind::Lp: return eval_lp(n.p, v);
      case Kind::KyFan: return eval_kyfan(n.k, v);
      case Kind::Convexified: {
        if (v.size() == 0) return 0.0;
        const double m = v.cwiseAbs().maxCoeff();
        if (m == 0.0) return 0.0;
        Vector u = (v.cwiseAbs() / m).array().pow(n.p);
        return m * std::pow(eval(*n.base, u), 1.0 / n.p);
      }
      case Kind::Dual: return eval_dual(*n.base, v);
    }
    return 0.0;
  }

  // Norm of v in the trace dual of `base`.
  static double eval_dual(const Node& base, const Vector& v) {
    switch (base.kind) {
      case Kind::Lp: return eval_lp(conjugate_exponent(base.p), v);
      case Kind::KyFan: {
        const auto kk = std::min<Eigen::Index>(base.k, v.size());
        if (kk == 0) return 0.0;
        return std::max(v.cwiseAbs().maxCoeff(), v.cwiseAbs().sum() / static_cast<double>(kk));
      }
      case Kind::Dual: return eval(*base.base, v);
      case Kind::Convexified: {
        Vector x = dual_convexified_maximizer(base, v);
        return x.dot(v.cwiseAbs());
      }
    }
    return 0.0;
  }

  static double sign(double x) { return (x > 0.0) - (x < 0.0); }

  // A functional x with dual norm 1 and <x, v> = ||v|| (a subgradient of the
  // norm at v). For nonnegative v the result is nonnegative.
  static Vector norming(const Node& n, const Vector& v) {
    const Eigen::Index dim = v.size();
    Vector x = Vector::Zero(dim);
    if (dim == 0) return x;
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) throw Error(ErrorCode::ZeroVector, "norming functional of the zero vector");

    switch (n.kind) {
      case Kind::Lp: {
        if (n.p == 1.0) {
          for (Eigen::Index i = 0; i < dim; ++i) x[i] = sign(v[i]);
        } else if (std::isinf(n.p)) {
          Eigen::Index imax = 0;
          v.cwiseAbs().maxCoeff(&imax);
          x[imax] = sign(v[imax]);
        } else {
          const double scaled_norm = eval_lp(n.p, v) / m;
          const double denom = std::pow(scaled_norm, n.p - 1.0);
          for (Eigen::Index i = 0; i < dim; ++i) {
            x[i] = sign(v[i]) * std::pow(std::abs(v[i]) / m, n.p - 1.0) / denom;
          }
        }
        return x;
      }
      case Kind::KyFan: {
        std::vector<Eigen::Index> idx(dim);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](auto a, auto b) { return std::abs(v[a]) > std::abs(v[b]); });
        const auto kk = std::min<Eigen::Index>(n.k, dim);
        for (Eigen::Index j = 0; j < kk; ++j) x[idx[j]] = sign(v[idx[j]]);
        return x;
      }
      case Kind::Convexified: {
        Vector u = (v.cwiseAbs() / m).array().pow(n.p);
        Vector y = norming(*n.base, u);
        const double nb = eval(*n.base, u);
        const double denom = std::pow(nb, (n.p - 1.0) / n.p);
        for (Eigen::Index i = 0; i < dim; ++i) {
          x[i] = sign(v[i]) * std::abs(y[i]) * std::pow(std::abs(v[i]) / m, n.p - 1.0) / denom;
        }
        return x;
      }
      case Kind::Dual: return norming_dual(*n.base, v);
    }
    return x;
  }

  // argmax of <v, x> over the unit ball of `base`.
  static Vector norming_dual(const Node& base, const Vector& v) {
    const Eigen::Index dim = v.size();
    Vector x = Vector::Zero(dim);
    switch (base.kind) {
      case Kind::Lp: {
        Node conj{Kind::Lp, conjugate_exponent(base.p), 0, nullptr};
        return norming(conj, v);
      }
      case Kind::KyFan: {
        const auto kk = std::min<Eigen::Index>(base.k, dim);
        Eigen::Index imax = 0;
        const double vmax = v.cwiseAbs().maxCoeff(&imax);
        if (vmax == 0.0) throw Error(ErrorCode::ZeroVector, "norming functional of the zero vector");
        if (vmax >= v.cwiseAbs().sum() / static_cast<double>(kk)) {
          x[imax] = sign(v[imax]);
        } else {
          for (Eigen::Index i = 0; i < dim; ++i) x[i] = sign(v[i]) / static_cast<double>(kk);
        }
        return x;
      }
      case Kind::Dual: return norming(*base.base, v);
      case Kind::Convexified: {
        Vector a = dual_convexified_maximizer(base, v);
        for (Eigen::Index i = 0; i < dim; ++i) x[i] = sign(v[i]) * a[i];
        return x;
      }
    }
    return x;
  }

  // Maximizes <|v|, x> over the nonnegative part of the unit ball of
  // conv = Convexified(b, p). Substituting u = x^p turns this into maximizing
  // the concave sum_i |v_i| u_i^{1/p} over {u >= 0, b(u) <= 1}, solved by
  // Frank-Wolfe with the norming functional of dual(b) as linear oracle.
  // Closed form for base Ky Fan(k), c >= 0: the maximizer keeps the largest
  // r < k coordinates free and ties all the others at one level t. Each
  // consistent r is an l_p-ball problem with coefficients
  // (c_1, ..., c_r, a, ..., a), a = (sum of the rest) / (k - r).
  static Vector kyfan_convexified_maximizer(int k, double p, const Vector& c) {
    const Eigen::Index dim = c.size();
    std::vector<Eigen::Index> idx(dim);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return c[a] > c[b]; });
    const Eigen::Index kk = std::min<Eigen::Index>(k, dim);
    const double q = conjugate_exponent(p);

    std::vector<double> tail(dim + 1, 0.0);
    for (Eigen::Index j = dim - 1; j >= 0; --j) tail[j] = tail[j + 1] + c[idx[j]];

    double best = -1.0, best_a = 0.0;
    Eigen::Index best_r = 0;
    double head = 0.0;  // sum of c^q over the free coordinates
    for (Eigen::Index r = 0; r < kk; ++r) {
      if (r > 0) head += std::pow(c[idx[r - 1]], q);
      const double a = tail[r] / static_cast<double>(kk - r);
      if (r > 0 && c[idx[r - 1]] < a) continue;
      const double value = head + static_cast<double>(kk - r) * std::pow(a, q);
      if (value > best) {
        best = value;
        best_r = r;
        best_a = a;
      }
    }
    const double norm = std::pow(best, 1.0 / q);
    Vector x(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double coef = j < best_r ? c[idx[j]] : best_a;
      x[idx[j]] = std::pow(coef / norm, q - 1.0);
    }
    return x;
  }

  static Vector dual_convexified_maximizer(const Node& conv, const Vector& v) {
    const Eigen::Index dim = v.size();
    const double p = conv.p;
    const Node& b = *conv.base;
    Vector c = v.cwiseAbs();
    if (dim == 0 || c.maxCoeff() == 0.0) return Vector::Zero(dim);
    const double cmax = c.maxCoeff();
    c /= cmax;
    if (b.kind == Kind::KyFan) return kyfan_convexified_maximizer(b.k, p, c);

    auto objective = [&](const Vector& u) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (c[i] > 0.0) acc += c[i] * std::pow(u[i], 1.0 / p);
      }
      return acc;
    };

    // Start from the l_1-optimal profile u ~ c^{p'}, rescaled onto the sphere.
    const double pc = conjugate_exponent(p);
    Vector u(dim);
    for (Eigen::Index i = 0; i < dim; ++i) u[i] = c[i] > 0.0 ? std::pow(c[i], pc) : 0.0;
    u /= eval(b, u);

    constexpr int kMaxIterations = 4000;
    for (int it = 0; it < kMaxIterations; ++it) {
      Vector grad = Vector::Zero(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (c[i] > 0.0 && u[i] > 0.0) grad[i] = c[i] / p * std::pow(u[i], 1.0 / p - 1.0);
      }
      Vector s = norming_dual(b, grad).cwiseAbs();
      const double value = objective(u);
      const double gap = grad.dot(s - u);
      if (gap <= 1e-15 * std::max(1.0, value)) break;

      // Golden-section search on the concave restriction to [u, s].
      double lo = 0.0, hi = 1.0;
      const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
      double a1 = hi - ratio * (hi - lo), a2 = lo + ratio * (hi - lo);
      double f1 = objective(u + a1 * (s - u)), f2 = objective(u + a2 * (s - u));
      for (int j = 0; j < 80; ++j) {
        if (f1 < f2) {
          lo = a1;
          a1 = a2;
          f1 = f2;
          a2 = lo + ratio * (hi - lo);
          f2 = objective(u + a2 * (s - u));
        } else {
          hi = a2;
          a2 = a1;
          f2 = f1;
          a1 = hi - ratio * (hi - lo);
          f1 = objective(u + a1 * (s - u));
        }
      }
      const double step = 0.5 * (lo + hi);
      Vector next = u + step * (s - u);
      if (objective(next) <= value) break;
      u = next;
    }
    Vector x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x[i] = std::pow(std::max(u[i], 0.0), 1.0 / p);
    return x;
  }

  NodePtr node_;
};

inline Gauge convexify(const Gauge& g, double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw Error(ErrorCode::InvalidArgument, "convexification exponent must be finite and >= 1");
  }
  if (p == 1.0) return g;
  switch (g.kind()) {
    case Gauge::Kind::Lp: return Gauge::lp(g.exponent() * p);
    case Gauge::Kind::Convexified:
      return Gauge(std::make_shared<const Gauge::Node>(
          Gauge::Node{Gauge::Kind::Convexified, g.exponent() * p, 0, g.node_->base}));
    default:
      return Gauge(
          std::make_shared<const Gauge::Node>(Gauge::Node{Gauge::Kind::Convexified, p, 0, g.node_}));
  }
}

inline Gauge dual_gauge(const Gauge& g) {
  switch (g.kind()) {
    case Gauge::Kind::Lp: return Gauge::lp(Gauge::conjugate_exponent(g.exponent()));
    case Gauge::Kind::Dual: return g.base();
    default:
      return Gauge(
          std::make_shared<const Gauge::Node>(Gauge::Node{Gauge::Kind::Dual, 0.0, 0, g.node_}));
  }
}

inline Gauge Gauge::parse(std::string_view text) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::ParseError, "bad gauge '" + std::string(text) + "': " + why);
  };
  auto parse_real = [&](std::string_view tok) {
    if (tok == "inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw fail("expected a number, got '" + std::string(tok) + "'");
    }
    return value;
  };

  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw fail("missing ':'");
  const auto head = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  try {
    if (head == "lp") return lp(parse_real(rest));
    if (head == "kyfan") {
      int k = 0;
      auto res = std::from_chars(rest.data(), rest.data() + rest.size(), k);
      if (rest.empty() || res.ec != std::errc() || res.ptr != rest.data() + rest.size()) {
        throw fail("expected an integer Ky Fan index");
      }
      return kyfan(k);
    }
    if (head == "conv") {
      const auto c2 = rest.find(':');
      if (c2 == std::string_view::npos) throw fail("conv needs conv:<p>:<base>");
      const double p = parse_real(rest.substr(0, c2));
      if (std::isinf(p)) throw fail("convexification exponent must be finite");
      return convexify(parse(rest.substr(c2 + 1)), p);
    }
    if (head == "dual") return dual_gauge(parse(rest));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw fail(e.what());
  }
  throw fail("unknown kind '" + std::string(head) + "'");
}

inline double eval_gauge(const Gauge& g, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw Error(ErrorCode::InvalidArgument, "non-finite sequence entry");
  }
  return g(v);
}

/// Subgradient of the norm at v: x with ||x||_{g*} = 1 and <x, v> = ||v||_g.
inline Vector norming_vector(const Gauge& g, const Vector& v) { return Gauge::norming(*g.node_, v); }

/// Duality map J_E(v) = ||v|| * (norming functional). Requires a smooth gauge.
inline Vector duality_map_seq(const Gauge& g, const Vector& v) {
  if (!g.smooth()) throw Error(ErrorCode::NotSmooth, "duality map needs a smooth gauge, got " + g.to_string());
  if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorCode::ZeroVector, "duality map of the zero vector");
  }
  return g(v) * norming_vector(g, v);
}

}  // namespace spectral_mazur
