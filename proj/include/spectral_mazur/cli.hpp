#pragma once

// Command-line front end. run() is the whole program; tools/ only wraps it so
// tests can drive the commands in-process.
//
// Exit codes: 0 pass, 1 violation, 2 usage/config/parse, 3 numerical,
// 4 precondition.

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entropy.hpp"
#include "error.hpp"
#include "gauge.hpp"
#include "json_io.hpp"
#include "matnorm.hpp"
#include "mazur.hpp"
#include "modulus.hpp"
#include "suites.hpp"
#include "verify.hpp"

namespace spectral_mazur::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSeedEnv = "SPECTRAL_MAZUR_SEED";
inline constexpr double kSphereTolerance = 1e-9;

enum Exit : int { kPass = 0, kViolation = 1, kUsage = 2, kNumerical = 3, kPrecondition = 4 };

inline int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownSuite:
      return kUsage;
    case ErrorCode::NumericalFailure:
    case ErrorCode::NoConvergence:
      return kNumerical;
    default:
      return kPrecondition;
  }
}

inline std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(ErrorCode::ParseError, "bad --dims entry '" + item + "'");
    dims.push_back(d);
  }
  if (dims.empty()) throw Error(ErrorCode::ParseError, "--dims is empty");
  return dims;
}

inline std::uint64_t parse_seed(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || s.front() == '-') throw Error(ErrorCode::ParseError, "bad " + what + " '" + s + "'");
  return v;
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Options {
  std::optional<std::string> seed;
  std::optional<std::string> dims;
  std::optional<int> samples;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  int threads = 1;
  std::string out;
  std::string timestamp;

  std::string gauge;
  double p = 1.0;
  bool project = false;
  bool general = false;
  int bins = 40;
  std::string target;  // map kind, suite name or modulus map
  std::string input;
  std::string config_file;
};

/// defaults < SPECTRAL_MAZUR_SEED < config file < flags
inline SuiteConfig build_config(const Options& o) {
  SuiteConfig cfg;
  if (const char* env = std::getenv(kSeedEnv); env && *env) cfg.seed = parse_seed(env, kSeedEnv);
  if (!o.config_file.empty()) cfg = config_from_json(read_json_file(o.config_file), cfg);
  if (o.seed) cfg.seed = parse_seed(*o.seed, "--seed");
  if (o.dims) cfg.dims = parse_dims(*o.dims);
  if (o.samples) cfg.samples_per_case = *o.samples;
  if (o.rel_tol) cfg.rel_tol = *o.rel_tol;
  if (o.abs_tol) cfg.abs_tol = *o.abs_tol;
  cfg.validate();
  return cfg;
}

inline Json manifest(const Options& o, const std::string& command, Json config, std::vector<std::string> inputs,
                     const std::string& output) {
  return Json{{"command", command},
              {"config", std::move(config)},
              {"input_paths", std::move(inputs)},
              {"output_path", output},
              {"version", kVersion},
              {"timestamp", o.timestamp}};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
}

inline std::string format_norm(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline int cmd_norm(const Options& o, std::ostream& out) {
  const Gauge g = Gauge::parse(o.gauge);
  const Matrix a = read_matrix_file(o.input);
  const double v = norm_ui(g, a);
  if (!std::isfinite(v)) throw Error(ErrorCode::NumericalFailure, "norm is not finite");
  out << format_norm(v) << '\n';
  return kPass;
}

namespace detail {

inline Matrix on_sphere(const Gauge& g, const Matrix& a, bool project, const char* which) {
  const double n = norm_ui(g, a);
  if (project) {
    if (!(n > 0.0)) throw Error(ErrorCode::ZeroMatrix, "cannot project the zero matrix onto a sphere");
    return a / n;
  }
  if (std::abs(n - 1.0) > kSphereTolerance) {
    throw Error(ErrorCode::NotUnitNorm, std::string(which) + " needs ||A||_" + g.to_string() +
                                            " = 1, got " + std::to_string(n) + " (use --project)");
  }
  return a;
}

inline Json report_json(const EntropyMinReport& r) {
  return Json{{"minimizer", matrix_to_json(r.minimizer)},
              {"objective", r.objective},
              {"fixed_point_residual", r.fixed_point_residual},
              {"iterations", r.iterations}};
}

}  // namespace detail

inline int cmd_map(const Options& o, std::ostream& out) {
  const Gauge g = Gauge::parse(o.gauge);
  const Matrix a = read_matrix_file(o.input);
  Json params{{"map", o.target}, {"gauge", g.to_string()}, {"project", o.project}};
  Json doc;
  std::optional<Json> report;

  if (o.target == "mazur" || o.target == "mazur-inv") {
    const MazurParams mp(g, o.p);
    params["p"] = o.p;
    if (o.target == "mazur") {
      doc = matrix_to_json(mazur_forward(mp, detail::on_sphere(mp.domain_gauge(), a, o.project, "mazur")));
    } else {
      doc = matrix_to_json(mazur_inverse(mp, detail::on_sphere(g, a, o.project, "mazur-inv")));
    }
  } else if (o.target == "gmap") {
    if (!g.smooth()) throw Error(ErrorCode::NotSmooth, "gmap needs a smooth gauge, got " + g.to_string());
    doc = matrix_to_json(G_map(g, detail::on_sphere(g, a, o.project, "gmap")));
  } else if (o.target == "entropy-min") {
    if (!spectral_mazur::detail::is_l1(g)) {
      if (!g.smooth()) throw Error(ErrorCode::NotSmooth, "entropy-min needs a smooth gauge, got " + g.to_string());
      if (!g.strictly_convex()) {
        throw Error(ErrorCode::NotStrictlyConvex, "entropy-min needs a strictly convex gauge, got " + g.to_string());
      }
    }
    Matrix x = a;
    if (o.project) {
      const double tn = trace_norm(a);
      if (!(tn > 0.0)) throw Error(ErrorCode::ZeroMatrix, "cannot project the zero matrix onto a sphere");
      x = a / tn;
    }
    if (is_hermitian(x) && is_psd(x)) {
      const EntropyMinReport r = entropy_min_mat(g, DensityMatrix(x));
      doc = matrix_to_json(r.minimizer);
      report = detail::report_json(r);
    } else {
      const Matrix y = entropy_min_general(g, x);
      const EntropyMinReport r = entropy_min_mat(g, DensityMatrix::normalized(polar(x).modulus));
      doc = matrix_to_json(y);
      report = detail::report_json(r);
      (*report)["minimizer"] = doc;
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown map '" + o.target + "' (mazur, mazur-inv, entropy-min, gmap)");
  }

  doc["manifest"] = manifest(o, "map " + o.target, params, {o.input}, o.out);
  if (report) doc["report"] = *report;
  if (o.out.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    write_json_file(o.out, doc);
  }
  return kPass;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const SuiteConfig cfg = build_config(o);
  std::vector<std::string> names;
  if (o.target == "all") {
    names = suite_names();
  } else {
    const auto known = suite_names();
    if (std::find(known.begin(), known.end(), o.target) == known.end()) {
      throw Error(ErrorCode::UnknownSuite, "unknown suite '" + o.target + "'");
    }
    names.push_back(o.target);
  }
  const std::string dir = o.out.empty() ? "verify_reports" : o.out;
  std::filesystem::create_directories(dir);
  std::vector<std::string> inputs;
  if (!o.config_file.empty()) inputs.push_back(o.config_file);

  bool all_passed = true;
  for (const auto& name : names) {
    const SuiteReport r = run_inequality_suite(name, cfg, o.threads);
    const std::string path = (std::filesystem::path(dir) / (name + ".json")).string();
    Json doc = to_json(r);
    doc["manifest"] = manifest(o, "verify " + name, to_json(cfg), inputs, path);
    write_json_file(path, doc);
    all_passed = all_passed && r.passed;
    out << name << (r.passed ? " PASS" : " FAIL") << " cases " << r.cases_run << " violations "
        << r.violation_count << " worst_ratio " << format_norm(r.worst_ratio) << '\n';
  }
  return all_passed ? kPass : kViolation;
}

inline int cmd_modulus(const Options& o, std::ostream& out) {
  const ModulusMap map = parse_modulus_map(o.target);
  SuiteConfig cfg = build_config(o);
  const MazurParams mp(Gauge::parse(o.gauge), o.p);
  ModulusOptions opt;
  opt.positive = !o.general;
  opt.threads = o.threads;
  opt.bins = o.bins;
  const ModulusProfile prof = estimate_modulus(map, cfg, mp, opt);

  const std::string prefix = o.out.empty() ? "modulus_" + std::string(to_string(map)) : o.out;
  Json params = to_json(cfg);
  params["map"] = prof.map_name;
  params["gauge"] = prof.gauge;
  params["p"] = prof.p;
  params["domain"] = opt.positive ? "positive" : "general";
  params["bins"] = opt.bins;
  Json doc = to_json(prof);
  doc["manifest"] = manifest(o, "modulus " + prof.map_name, params, {}, prefix + ".json");
  write_json_file(prefix + ".json", doc);
  write_text(prefix + ".csv", to_csv(prof));
  out << prof.map_name << (prof.passed() ? " PASS" : " FAIL") << " samples " << prof.samples << " exceedances "
      << prof.exceedances << " worst_bound_ratio " << format_norm(prof.worst_bound_ratio) << '\n';
  return prof.passed() ? kPass : kViolation;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Unitarily invariant norms, generalized Mazur maps and their property suites", "spectral_mazur"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  app.add_option("--seed", o.seed, "RNG seed (default $SPECTRAL_MAZUR_SEED or 0)");
  app.add_option("--dims", o.dims, "comma-separated dimensions, e.g. 2,3,5");
  app.add_option("--samples", o.samples, "samples per case");
  app.add_option("--rel-tol", o.rel_tol, "relative slack of a check");
  app.add_option("--abs-tol", o.abs_tol, "absolute slack of a check");
  app.add_option("--threads", o.threads, "worker cap")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output file, directory (verify) or prefix (modulus)");
  app.add_option("--timestamp", o.timestamp, "manifest timestamp (default: now, UTC)");

  auto* norm = app.add_subcommand("norm", "print ||A|| for a gauge")->fallthrough();
  norm->add_option("--gauge", o.gauge, "gauge descriptor")->required();
  norm->add_option("matrix", o.input, "matrix JSON file")->required();

  auto* map = app.add_subcommand("map", "apply mazur, mazur-inv, entropy-min or gmap")->fallthrough();
  map->add_option("kind", o.target, "mazur | mazur-inv | entropy-min | gmap")->required();
  map->add_option("matrix", o.input, "matrix JSON file")->required();
  map->add_option("--gauge", o.gauge, "gauge descriptor")->required();
  map->add_option("--p", o.p, "Mazur exponent");
  map->add_flag("--project", o.project, "rescale the input onto the unit sphere first");

  auto* verify = app.add_subcommand("verify", "run one property suite or all")->fallthrough();
  verify->add_option("suite", o.target, "suite name or 'all'")->required();
  verify->add_option("--config", o.config_file, "SuiteConfig JSON");

  auto* modulus = app.add_subcommand("modulus", "estimate a modulus of continuity")->fallthrough();
  modulus->add_option("map", o.target, "Gp | Gp_inv | FX | FX_inv")->required();
  modulus->add_option("--gauge", o.gauge, "gauge descriptor")->required();
  modulus->add_option("--p", o.p, "Mazur exponent");
  modulus->add_option("--bins", o.bins, "number of distance bins");
  modulus->add_flag("--general", o.general, "sample the whole sphere, not only positives");
  modulus->add_option("--config", o.config_file, "SuiteConfig JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }
  if (o.timestamp.empty()) o.timestamp = utc_now();

  try {
    if (*norm) return cmd_norm(o, out);
    if (*map) return cmd_map(o, out);
    if (*verify) return cmd_verify(o, out);
    return cmd_modulus(o, out);
  } catch (const NoConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    const int code = exit_code(e.code());
    err << (code == kPrecondition ? "precondition failed: " : "error: ") << e.what() << '\n';
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace spectral_mazur::cli
