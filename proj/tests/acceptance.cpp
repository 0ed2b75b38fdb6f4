// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spectral_mazur.hpp"

using namespace spectral_mazur;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

int hardware_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

const std::vector<std::string> kCriterionOneSuites{
    "holder", "ideal",   "contraction_transfer", "fan_dominance", "lemma41",       "lemma42",  "cor43",
    "lemma44", "lemma45", "schur",                "lemma47",       "entropy_props", "lemma53", "lemma54"};

std::vector<Gauge> fixed_point_gauges() {
  std::vector<Gauge> out;
  for (const auto& g : default_gauges()) {
    if (g.smooth() && g.strictly_convex()) out.push_back(g);
  }
  return out;
}

// rho^{1/p} straight from an eigendecomposition.
Matrix root_oracle(const Matrix& rho, double p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  Vector l = es.eigenvalues();
  // Eigenvalues below the numerical rank cutoff are kernel roundoff.
  const double cutoff = static_cast<double>(l.size()) * std::numeric_limits<double>::epsilon() * l.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < l.size(); ++i) l[i] = l[i] > cutoff ? std::pow(l[i], 1.0 / p) : 0.0;
  return es.eigenvectors() * l.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix random_state(Sampler& rng, Eigen::Index n) { return rng.coin() ? rng.state(n) : rng.low_rank_state(n); }

std::map<std::uint64_t, std::map<std::string, SuiteReport>> g_reports;

Outcome criterion1() {
  Outcome o;
  std::int64_t cases = 0, violations = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    SuiteConfig cfg;
    cfg.seed = seed;
    for (const auto& name : kCriterionOneSuites) {
      SuiteReport r = run_inequality_suite(name, cfg, hardware_threads());
      cases += r.cases_run;
      violations += r.violation_count;
      if (!r.passed) {
        o.pass = false;
        o.detail += " " + name + "@seed" + std::to_string(seed) + ":" + std::to_string(r.violation_count);
      }
      g_reports[seed][name] = std::move(r);
    }
  }
  o.detail = std::to_string(kCriterionOneSuites.size()) + " suites x seeds {1,2,3}, " + std::to_string(cases) +
             " cases, " + std::to_string(violations) + " violations" + o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  struct Item {
    const char* suite;
    const char* check;
    const char* label;
  };
  const Item items[] = {{"cor43", "cor43", "Cor 4.3 (3p)"},
                        {"lemma44", "bound1", "Lemma 4.4 first bound (4*2^(1/p))"},
                        {"lemma45", "bound2", "Lemma 4.5 second bound (2^(1-1/p), p in {3,4,5})"},
                        {"lemma53", "equality_case", "Lemma 5.3 equality at (I,0) within 1e-12"}};
  std::vector<std::string> parts;
  for (const auto& it : items) {
    std::int64_t count = 0, bad = 0;
    double worst = 0.0;
    for (const auto& [seed, reports] : g_reports) {
      const auto& checks = reports.at(it.suite).checks;
      const auto found = checks.find(it.check);
      if (found == checks.end()) continue;
      count += found->second.count;
      bad += found->second.violations;
      worst = std::max(worst, found->second.worst_ratio);
    }
    const bool ok = count > 0 && bad == 0;
    o.pass = o.pass && ok;
    parts.push_back(std::string(it.label) + ": " + std::to_string(count) + " checks, worst ratio " + fmt(worst) +
                    (ok ? "" : " FAILED"));
  }
  for (std::size_t i = 0; i < parts.size(); ++i) o.detail += (i ? "; " : "") + parts[i];
  return o;
}

Outcome criterion3() {
  Outcome o;
  int instances = 0;
  double worst = 0.0;
  for (const char* name : {"lp:1.5", "lp:2", "lp:3", "conv:2:lp:2"}) {
    const Gauge g = Gauge::parse(name);
    for (int i = 0; i < 50; ++i) {
      const Eigen::Index n = 2 + i % 2;
      Sampler rng = Sampler::for_sample(2024, std::string("oracle:") + name, n, i);
      Vector r = rng.dirichlet(n);
      const DensityMatrix rho(Matrix(r.cast<Complex>().asDiagonal()));
      const BruteForceResult b = entropy_min_bruteforce(g, rho);
      const Matrix f = entropy_min_mat(g, rho).minimizer;
      const double gap = (f - b.minimizer).cwiseAbs().maxCoeff();
      worst = std::max(worst, gap / (2.0 * b.pitch));
      if (!(gap <= 2.0 * b.pitch)) o.pass = false;
      ++instances;
    }
  }
  o.detail = std::to_string(instances) + " diagonal instances (50 per gauge), worst gap / (2 * pitch) = " + fmt(worst);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const int dims[] = {2, 3, 5, 8, 16};
  double worst_gf = 0.0, worst_fg = 0.0;
  const auto gauges = fixed_point_gauges();
  for (const auto& g : gauges) {
    for (int i = 0; i < 200; ++i) {
      const int n = dims[i % 5];
      Sampler rng = Sampler::for_sample(77, "fixed:" + g.to_string(), n, i);
      const DensityMatrix rho(random_state(rng, n));
      const Matrix f = entropy_min_mat(g, rho).minimizer;
      worst_gf = std::max(worst_gf, trace_norm(G_map(g, f) - rho.mat()));

      Matrix a = rng.coin() ? rng.psd(n) : rng.low_rank_psd(n);
      a /= norm_ui(g, a);
      const Matrix back = entropy_min_mat(g, DensityMatrix::normalized(G_map(g, a))).minimizer;
      worst_fg = std::max(worst_fg, trace_norm(back - a));
    }
  }
  o.pass = worst_gf <= 1e-6 && worst_fg <= 1e-5;
  o.detail = std::to_string(gauges.size()) + " gauges x 200, max ||G(F(rho)) - rho||_1 = " + fmt(worst_gf) +
             " (<= 1e-6), max ||F(G(A)) - A||_1 = " + fmt(worst_fg) + " (<= 1e-5)";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const int dims[] = {2, 3, 5, 8, 16};
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (int i = 0; i < 200; ++i) {
      const int n = dims[i % 5];
      Sampler rng = Sampler::for_sample(78, "consistency", n, static_cast<std::uint64_t>(i + 1000 * p));
      const DensityMatrix rho(random_state(rng, n));
      const Matrix f = entropy_min_mat(Gauge::lp(p), rho).minimizer;
      worst = std::max(worst, trace_norm(f - root_oracle(rho.mat(), p)));
    }
  }
  o.pass = worst <= 1e-6;
  o.detail = "p in {1.5,2,3,4} x 200 states, max ||F(rho) - rho^(1/p)||_1 = " + fmt(worst) + " (<= 1e-6)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const SuiteConfig cfg;
  double worst = 0.0;
  int pairs = 0;
  for (const auto& g : cfg.gauges) {
    for (double p : cfg.p_grid) {
      const MazurParams mp(g, p);
      for (int i = 0; i < 500; ++i) {
        const int n = cfg.dims[i % cfg.dims.size()];
        Sampler rng = Sampler::for_sample(79, "roundtrip:" + g.to_string(), n, static_cast<std::uint64_t>(i + 1000 * p));
        Matrix b = rng.coin() ? rng.ginibre(n) : Matrix(rng.partial_isometry(n) * rng.psd(n));
        if (norm_ui(g, b) == 0.0) b = rng.ginibre(n);
        b /= norm_ui(g, b);
        worst = std::max(worst, trace_norm(mazur_forward(mp, mazur_inverse(mp, b)) - b));
      }
      ++pairs;
    }
  }
  o.pass = worst <= 1e-8;
  o.detail = std::to_string(pairs) + " (gauge, p) pairs x 500, max ||G_p(G_p^-1(B)) - B||_1 = " + fmt(worst) + " (<= 1e-8)";
  return o;
}

Outcome criterion7() {
  Outcome o;
  SuiteConfig cfg;
  cfg.seed = 1;
  cfg.samples_per_case = 2000;
  ModulusOptions opt;
  opt.threads = hardware_threads();
  opt.slack = 1e-9;
  const MazurParams mp(Gauge::lp(1), 3);
  const ModulusProfile fwd = estimate_modulus(ModulusMap::Gp, cfg, mp, opt);
  const ModulusProfile inv = estimate_modulus(ModulusMap::GpInv, cfg, mp, opt);
  o.pass = fwd.samples == 2000 && inv.samples == 2000 && fwd.exceedances == 0 && inv.exceedances == 0 &&
           fwd.bound_name == "3p*t" && inv.bound_name == "t^(1/p)";
  o.detail = "G_3 vs 9t: " + std::to_string(fwd.exceedances) + " exceedances, worst ratio " + fmt(fwd.worst_bound_ratio) +
             "; G_3^-1 vs t^(1/3): " + std::to_string(inv.exceedances) + " exceedances, worst ratio " +
             fmt(inv.worst_bound_ratio);
  return o;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(SPECTRAL_MAZUR_CLI) + " " + args + " > /dev/null 2>&1";
  const int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    files[e.path().filename().string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

Outcome criterion8() {
  Outcome o;
  const fs::path dir = fs::current_path() / "acceptance_determinism";
  const std::string base = "verify all --seed 7 --timestamp 2024-01-01T00:00:00Z --out " + dir.string();
  std::vector<std::map<std::string, std::string>> runs;
  std::vector<int> codes;
  for (const char* threads : {"1", "1", "8"}) {
    fs::remove_all(dir);
    codes.push_back(run_binary(base + " --threads " + threads));
    runs.push_back(snapshot(dir));
  }
  const bool same_runs = runs[0] == runs[1];
  const bool same_threads = runs[0] == runs[2];
  o.pass = runs[0].size() == suite_names().size() && same_runs && same_threads;
  o.detail = std::to_string(runs[0].size()) + " report files; run vs rerun " + (same_runs ? "identical" : "DIFFER") +
             ", threads 1 vs 8 " + (same_threads ? "identical" : "DIFFER") + "; exit codes " +
             std::to_string(codes[0]) + "," + std::to_string(codes[1]) + "," + std::to_string(codes[2]);
  return o;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"1 inequality suites", criterion1},        {"2 paper constants", criterion2},
      {"3 oracle equivalence", criterion3},       {"4 fixed-point identities", criterion4},
      {"5 mazur-entropy consistency", criterion5}, {"6 roundtrip G_p o G_p^-1", criterion6},
      {"7 modulus profiles", criterion7},         {"8 determinism", criterion8},
  };
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    all = all && o.pass;
    std::cout << "criterion " << name << ": " << (o.pass ? "PASS" : "FAIL") << " | " << o.detail << " ["
              << fmt(secs) << "s]" << std::endl;
  }
  return all ? 0 : 1;
}
