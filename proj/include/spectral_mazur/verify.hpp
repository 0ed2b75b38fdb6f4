#pragma once

// Property-suite plumbing: configuration, the per-check accumulator, the
// report, and a runner that splits the sample index range into contiguous
// chunks and merges chunk logs in index order, so the report does not depend
// on the thread count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "error.hpp"
#include "gauge.hpp"
#include "json_io.hpp"
#include "random.hpp"

namespace spectral_mazur {

inline std::vector<Gauge> default_gauges() {
  std::vector<Gauge> out;
  for (const char* s : {"lp:1", "lp:1.5", "lp:2", "lp:4", "kyfan:1", "kyfan:2", "conv:2:lp:1", "conv:3:lp:2"}) {
    out.push_back(Gauge::parse(s));
  }
  return out;
}

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::vector<int> dims{2, 3, 5, 8, 16};
  int samples_per_case = 500;
  std::vector<Gauge> gauges = default_gauges();
  std::vector<double> p_grid{1.0, 1.5, 2.0, 3.0, 4.0, 5.0};
  double rel_tol = 1e-9;
  double abs_tol = 1e-10;

  void validate() const {
    auto bad = [](const std::string& why) { return Error(ErrorCode::InvalidArgument, "config: " + why); };
    if (dims.empty()) throw bad("dims is empty");
    for (int d : dims) {
      if (d < 1) throw bad("dims must be >= 1");
    }
    if (samples_per_case < 1) throw bad("samples must be >= 1");
    if (gauges.empty()) throw bad("gauges is empty");
    for (double p : p_grid) {
      if (!std::isfinite(p) || p < 1.0) throw bad("p_grid entries must be finite and >= 1");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw bad("tolerances must be > 0");
  }
};

inline Json to_json(const SuiteConfig& c) {
  Json gauges = Json::array();
  for (const auto& g : c.gauges) gauges.push_back(g.to_string());
  return Json{{"seed", c.seed},       {"dims", c.dims},       {"samples_per_case", c.samples_per_case},
              {"gauges", gauges},     {"p_grid", c.p_grid},   {"rel_tol", c.rel_tol},
              {"abs_tol", c.abs_tol}};
}

/// Fields absent from j keep their value from base.
inline SuiteConfig config_from_json(const Json& j, SuiteConfig base = {}) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "dims") {
        base.dims = value.get<std::vector<int>>();
      } else if (key == "samples_per_case" || key == "samples") {
        base.samples_per_case = value.get<int>();
      } else if (key == "gauges") {
        base.gauges.clear();
        for (const auto& s : value) base.gauges.push_back(Gauge::parse(s.get<std::string>()));
      } else if (key == "p_grid") {
        base.p_grid = value.get<std::vector<double>>();
      } else if (key == "rel_tol") {
        base.rel_tol = value.get<double>();
      } else if (key == "abs_tol") {
        base.abs_tol = value.get<double>();
      } else {
        throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  return base;
}

struct Violation {
  std::string check;
  Json payload;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct CheckStats {
  std::int64_t count = 0;
  std::int64_t violations = 0;
  double worst_ratio = 0.0;
};

inline constexpr std::size_t kMaxStoredViolations = 100;

/// Accumulates checks for a contiguous range of samples.
///
/// check(): asserted, lhs <= rhs * (1 + rel_tol) + abs_tol with rhs >= 0.
/// observe(): ratio recorded, never a violation.
/// The ratio is lhs / (rhs + abs_tol), which stays <= 1 + rel_tol exactly
/// when the check passes.
class CaseLog {
 public:
  CaseLog(double rel_tol, double abs_tol) : rel_tol_(rel_tol), abs_tol_(abs_tol) {}

  void check(std::string_view label, double lhs, double rhs, const std::function<Json()>& payload) {
    CheckStats& st = slot(checks_, label);
    ++st.count;
    const double ratio = lhs / (rhs + abs_tol_);
    const bool violated = !(lhs <= rhs + rel_tol_ * std::abs(rhs) + abs_tol_);
    st.worst_ratio = std::max(st.worst_ratio, ratio);
    worst_ratio_ = std::max(worst_ratio_, ratio);
    if (violated) {
      ++st.violations;
      ++violation_count_;
      if (violations_.size() < kMaxStoredViolations) {
        violations_.push_back(Violation{std::string(label), payload ? payload() : Json::object(), lhs, rhs, ratio});
      }
    }
  }

  /// Fails when value exceeds tol, with no extra slack.
  void check_within(std::string_view label, double value, double tol, const std::function<Json()>& payload) {
    CheckStats& st = slot(checks_, label);
    ++st.count;
    const double ratio = value / tol;
    st.worst_ratio = std::max(st.worst_ratio, ratio);
    worst_ratio_ = std::max(worst_ratio_, ratio);
    if (!(value <= tol)) {
      ++st.violations;
      ++violation_count_;
      if (violations_.size() < kMaxStoredViolations) {
        violations_.push_back(Violation{std::string(label), payload ? payload() : Json::object(), value, tol, ratio});
      }
    }
  }

  void observe(std::string_view label, double lhs, double rhs) {
    CheckStats& st = slot(observations_, label);
    ++st.count;
    const double ratio = lhs / (rhs + abs_tol_);
    st.worst_ratio = std::max(st.worst_ratio, ratio);
  }

  void count_case() { ++cases_; }

  /// Appends a log covering the samples right after ours.
  void merge(const CaseLog& next) {
    cases_ += next.cases_;
    violation_count_ += next.violation_count_;
    worst_ratio_ = std::max(worst_ratio_, next.worst_ratio_);
    for (const auto& v : next.violations_) {
      if (violations_.size() >= kMaxStoredViolations) break;
      violations_.push_back(v);
    }
    merge_stats(checks_, next.checks_);
    merge_stats(observations_, next.observations_);
  }

  std::int64_t cases() const { return cases_; }
  std::int64_t violation_count() const { return violation_count_; }
  double worst_ratio() const { return worst_ratio_; }
  const std::vector<Violation>& violations() const { return violations_; }
  const std::map<std::string, CheckStats, std::less<>>& checks() const { return checks_; }
  const std::map<std::string, CheckStats, std::less<>>& observations() const { return observations_; }

 private:
  using StatMap = std::map<std::string, CheckStats, std::less<>>;

  static CheckStats& slot(StatMap& m, std::string_view label) {
    auto it = m.find(label);
    if (it == m.end()) it = m.emplace(std::string(label), CheckStats{}).first;
    return it->second;
  }

  static void merge_stats(StatMap& into, const StatMap& from) {
    for (const auto& [k, v] : from) {
      CheckStats& st = slot(into, k);
      st.count += v.count;
      st.violations += v.violations;
      st.worst_ratio = std::max(st.worst_ratio, v.worst_ratio);
    }
  }

  double rel_tol_;
  double abs_tol_;
  std::int64_t cases_ = 0;
  std::int64_t violation_count_ = 0;
  double worst_ratio_ = 0.0;
  std::vector<Violation> violations_;
  StatMap checks_;
  StatMap observations_;
};

struct SuiteReport {
  std::string suite_name;
  std::int64_t cases_run = 0;
  std::int64_t violation_count = 0;
  std::vector<Violation> violations;  // first kMaxStoredViolations in sample order
  double worst_ratio = 0.0;
  bool passed = true;
  std::map<std::string, CheckStats, std::less<>> checks;
  std::map<std::string, CheckStats, std::less<>> observations;
  SuiteConfig config;
};

namespace detail {

inline Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json stats_to_json(const std::map<std::string, CheckStats, std::less<>>& m, bool with_violations) {
  Json out = Json::object();
  for (const auto& [k, v] : m) {
    Json e{{"count", v.count}, {"worst_ratio", finite_or_null(v.worst_ratio)}};
    if (with_violations) e["violations"] = v.violations;
    out[k] = e;
  }
  return out;
}

}  // namespace detail

inline Json to_json(const SuiteReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back(Json{{"check", v.check},
                              {"input", v.payload},
                              {"lhs", detail::finite_or_null(v.lhs)},
                              {"rhs", detail::finite_or_null(v.rhs)},
                              {"ratio", detail::finite_or_null(v.ratio)}});
  }
  return Json{{"suite_name", r.suite_name},
              {"cases_run", r.cases_run},
              {"passed", r.passed},
              {"worst_ratio", detail::finite_or_null(r.worst_ratio)},
              {"violation_count", r.violation_count},
              {"violations", violations},
              {"checks", detail::stats_to_json(r.checks, true)},
              {"observations", detail::stats_to_json(r.observations, false)},
              {"config", to_json(r.config)}};
}

/// Runs body(first, last, log) over [0, total) split into at most `threads`
/// contiguous chunks, returning the chunk logs merged in order.
inline CaseLog run_partitioned(std::int64_t total, int threads, double rel_tol, double abs_tol,
                               const std::function<void(std::int64_t, std::int64_t, CaseLog&)>& body) {
  const int workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(total, 1)));
  std::vector<CaseLog> logs(workers, CaseLog(rel_tol, abs_tol));
  std::vector<std::exception_ptr> errors(workers);
  auto bounds = [&](int w) { return total * w / workers; };
  if (workers == 1) {
    body(0, total, logs[0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          body(bounds(w), bounds(w + 1), logs[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (int w = 1; w < workers; ++w) logs[0].merge(logs[w]);
  return std::move(logs[0]);
}

/// Evaluates out[i] = f(i) for i in [0, total) with contiguous chunks.
template <class T>
std::vector<T> map_partitioned(std::int64_t total, int threads, const std::function<T(std::int64_t)>& f) {
  std::vector<T> out(static_cast<std::size_t>(total));
  const int workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(total, 1)));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](int w) {
    try {
      for (std::int64_t i = total * w / workers; i < total * (w + 1) / workers; ++i) out[i] = f(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace spectral_mazur
