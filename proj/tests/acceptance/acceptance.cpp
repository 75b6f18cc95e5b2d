// Acceptance run: one line per criterion, exit status 1 if any fails.
//
//   acceptance [--threads N] [--only k[,k...]]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ldl/experiments.hpp"
#include "ldl/record.hpp"
#include "ldl/tsp.hpp"
#include "ldl/uncrossing.hpp"
#include "ldl/wreath.hpp"
#include "support.hpp"

using namespace ldl;
using namespace ldl::testing;

namespace {

constexpr double kPi = 3.141592653589793;

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned g_threads = 1;
// Criterion 9 reuses the alpha estimate of criterion 5.
std::optional<RunRecord> g_alpha_half;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RunRecord run(ExperimentKind kind, std::vector<std::int64_t> sizes, std::int64_t trials,
              std::uint64_t seed, const std::function<void(ExperimentSpec&)>& tweak = {}) {
  ExperimentSpec s;
  s.kind = kind;
  s.sizes = std::move(sizes);
  s.trials = trials;
  s.seed = seed;
  if (tweak) tweak(s);
  return run_experiment(s, {g_threads});
}

std::int64_t pow2(int k) { return std::int64_t{1} << k; }

// ---------------------------------------------------------------- 1 - 4

Outcome word_metric_sandwich() {
  const WreathGroup g(2, LampGroup::cyclic(2));
  const auto ball = cayley_ball(g, GeneratingSet::standard(g), 8);
  std::size_t ok = 0;
  for (const auto& [e, l] : ball) {
    const auto b = word_length_bounds(g, e);
    ok += b.exact_tsp && b.lower <= l && l <= b.upper;
  }
  return {ok == ball.size(), fmt("%zu / %zu elements of the radius-8 ball", ok, ball.size())};
}

Outcome tsp1_exact() {
  Rng rng(derive_seed(1, {2}));
  int ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto v = random_connected_set(rng, 2 + rng.below(13));
    const double n = static_cast<double>(v.size());
    const double bound =
        n * (1.0 + 8.0 * std::cbrt(static_cast<double>(inner_boundary_size(v)) / n));
    const double len = static_cast<double>(exact_tsp(v).length);
    ok += len <= bound;
    worst = std::max(worst, len / bound);
  }
  return {ok == 200, fmt("%d / 200 sets, max l / bound = %.3f", ok, worst)};
}

Outcome strip_bound() {
  Rng rng(derive_seed(1, {3}));
  int ok = 0, compared = 0;
  for (int t = 0; t < 500; ++t) {
    const auto side = static_cast<std::int64_t>(2 + rng.below(40));
    const auto cap = static_cast<std::size_t>(std::min<std::int64_t>(side * side, 60));
    const auto n = 1 + rng.below(cap);
    const auto pts = random_points(rng, n, side);
    const auto r = strip_heuristic(pts, {0, 0}, side);
    const double root = std::ceil(std::sqrt(static_cast<double>(pts.size())));
    bool good = static_cast<double>(r.length) <= 2.0 * side * root + 2.0 * side;
    if (pts.size() <= 14) {
      ++compared;
      good = good && r.length >= exact_tsp(pts).length;
    }
    ok += good;
  }
  return {ok == 500, fmt("%d / 500 instances (%d compared with exact)", ok, compared)};
}

Outcome uncrossing_pipeline() {
  Rng rng(derive_seed(1, {4}));
  int grid_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    const BoxDomain d({0, 0}, static_cast<std::int64_t>(4 + rng.below(9)));
    const auto paths = random_collection(rng, d, 2 + rng.below(7));
    const auto norm = normalize_endpoints(paths, d);
    const auto r = uncross_all(norm, d);
    std::int64_t total = 0;
    for (const auto& p : r.paths) total += p.length();
    const auto joined = join_noncrossing(r.paths, d);
    const bool good = !any_essential_crossing(r.paths, d) &&
                      r.uncross_count <= static_cast<std::int64_t>(norm.size()) &&
                      image(r.paths) == image(paths) &&
                      2 * joined.length() <= 3 * d.perimeter() + 2 * total;
    grid_ok += good;
  }

  const WreathGroup g(2, LampGroup::cyclic(2));
  const BoxDomain d({0, 0}, 8);
  std::vector<std::pair<std::string, GeneratingSet>> sets{
      {"standard", GeneratingSet::standard(g)}, {"walk_toggle", named_generators(g, "walk_toggle")}};
  int s_ok = 0;
  std::string logged;
  for (auto& [name, s] : sets) {
    SPathUncrosser u(g, s, d);
    const auto c = u.constant();
    double empirical = 0.0;
    std::int64_t swaps = 0;
    for (int t = 0; t < 100; ++t) {
      std::vector<SPath> paths;
      for (int i = 0; i < 6; ++i) paths.push_back(random_s_path(rng, g, s, d, 1));
      const auto tau0 = total_tau(g, s, paths);
      const auto r = u.uncross_all(u.normalize_endpoints(paths));
      bool crossing = false;
      for (std::size_t i = 0; i < r.paths.size(); ++i)
        for (std::size_t k = i + 1; k < r.paths.size(); ++k)
          crossing = crossing || u.crossing(r.paths[i], r.paths[k]);
      const bool good = total_tau(g, s, r.paths) == tau0 && !crossing &&
                        r.added_length <= c * d.perimeter();
      s_ok += good;
      swaps += r.uncross_count;
      empirical = std::max(empirical, static_cast<double>(r.added_length) /
                                          static_cast<double>(d.perimeter()));
    }
    logged += fmt(" c[%s] = %lld (%lld uncrossings, max overhead / |dD| = %.3f)", name.c_str(),
                  static_cast<long long>(c), static_cast<long long>(swaps), empirical);
  }
  return {grid_ok == 1000 && s_ok == 200,
          fmt("grid %d / 1000, S-path %d / 200;", grid_ok, s_ok) + logged};
}

// --------------------------------------------------------------- 5 - 13

Outcome alpha() {
  const auto one = run(ExperimentKind::alpha, {8, 16, 32, 64, 128}, 4, 5,
                       [](ExperimentSpec& s) { s.p = 1.0; });
  const auto half = run(ExperimentKind::alpha, {8, 16, 32, 64, 128}, 50, 5,
                        [](ExperimentSpec& s) { s.p = 0.5; });
  g_alpha_half = half;
  const double a1 = one.derived.at("alpha_hat");
  const double a = half.derived.at("alpha_hat"), lo = half.derived.at("alpha_lo99"),
               hi = half.derived.at("alpha_hi99");
  const double viol = half.derived.at("recursion_violations") + one.derived.at("recursion_violations");
  const bool pass = std::abs(a1 - 1.0) <= 0.02 && lo > 0.5 && hi < 1.0 && a > 0.5 && a < 1.0 &&
                    viol == 0.0;
  return {pass, fmt("alpha_1 = %.4f; alpha_1/2 = %.4f, 99%% CI [%.4f, %.4f]; b_m recursion "
                    "violations %.0f",
                    a1, a, lo, hi, viol)};
}

Outcome range_lln() {
  const auto r = run(ExperimentKind::range_lln, {pow2(14), pow2(15), pow2(16), pow2(17), pow2(18),
                                                 pow2(19), pow2(20)},
                     50, 6);
  const double last = r.rows.back().mean;
  std::string table;
  for (const auto& row : r.rows) table += fmt(" %.4f(%.4f)", row.mean, row.std_err);
  const bool pass = last >= 0.7 && last <= 1.1 && r.derived.at("approaches_one") == 1.0;
  return {pass, "R_n / (pi n / log n) (SE) at 2^14..2^20:" + table +
                    fmt("; monotone within 99%% error %s, strictly %s",
                        r.derived.at("approaches_one") == 1.0 ? "yes" : "no",
                        r.derived.at("approaches_one_strict") == 1.0 ? "yes" : "no")};
}

Outcome boundary_lln() {
  const auto r = run(ExperimentKind::boundary_lln,
                     {pow2(14), pow2(15), pow2(16), pow2(17), pow2(18), pow2(19), pow2(20)}, 50, 7);
  const double last = r.rows.back().mean;
  std::string fol;
  for (double x : r.series.at("folner_median")) fol += fmt(" %.4f", x);
  const bool pass = last >= 2.0 && last <= 30.0 && r.derived.at("folner_decreasing") == 1.0;
  return {pass, fmt("|dR_n| log^2 n / n at 2^20 = %.3f; Folner medians:", last) + fol};
}

Outcome flatto() {
  const auto r = run(ExperimentKind::flatto, {pow2(18), pow2(20)}, 50, 8);
  const double ch = r.derived.at("relative_change_last");
  return {ch < 0.25, fmt("|T_n^1| log^2 n / n: %.4f -> %.4f, change %.1f%%", r.rows[0].mean,
                         r.rows[1].mean, 100 * ch)};
}

Outcome drift() {
  if (!g_alpha_half) alpha();
  const auto r = run(ExperimentKind::drift, {pow2(18), pow2(20)}, 30, 9);
  const double c = r.derived.at("c_hat"), clo = r.derived.at("c_hat_lo99"),
               chi = r.derived.at("c_hat_hi99");
  const double a = g_alpha_half->derived.at("alpha_hat");
  const double target = (a + 0.5) * kPi;
  const double tlo = (g_alpha_half->derived.at("alpha_lo99") + 0.5) * kPi;
  const double thi = (g_alpha_half->derived.at("alpha_hi99") + 0.5) * kPi;
  const bool within = std::abs(c - target) <= 0.2 * target;
  const bool overlap = clo <= thi && tlo <= chi;
  const bool sandwich = r.derived.at("sandwich_violations") == 0.0;
  return {within && overlap && sandwich,
          fmt("c_hat = %.4f [%.4f, %.4f] vs (alpha + 1/2) pi = %.4f [%.4f, %.4f]; "
              "rel. diff %.1f%%, correction 3 max|X| / (n / log n) = %.3f",
              c, clo, chi, target, tlo, thi, 100 * std::abs(c - target) / target,
              r.series.at("correction").back())};
}

Outcome good_update() {
  const auto r = run(ExperimentKind::good_update, {32}, 200, 10, [](ExperimentSpec& s) {
    s.good_rate = 0.5;
    s.visits = 10;
  });
  const double z = r.derived.at("miss_z"), x2 = r.derived.at("chi_square"),
               crit = r.derived.at("chi_square_critical");
  return {std::abs(z) <= 3.0 && x2 <= crit,
          fmt("miss rate %.6f vs 2^-10 = %.6f (z = %.2f); chi-square %.3f (1%% critical %.3f)",
              r.derived.at("miss_rate"), r.derived.at("expected_miss_rate"), z, x2, crit)};
}

Outcome oned_law() {
  const auto r = run(ExperimentKind::oned_dist, {pow2(16)}, 2000, 11,
                     [](ExperimentSpec& s) { s.reference_steps = pow2(16); });
  const double ks = r.derived.at("ks");
  return {ks <= 0.06,
          fmt("KS = %.4f (1%% critical %.4f); means %.4f vs reference %.4f (Brownian %.4f)", ks,
              r.derived.at("ks_critical_01"), r.derived.at("sample_mean"),
              r.derived.at("reference_mean"), r.derived.at("reference_expected"))};
}

Outcome cerny() {
  const auto r = run(ExperimentKind::local_time, {pow2(18), pow2(20)}, 50, 12);
  const double ch = r.derived.at("relative_change_last");
  return {ch < 0.10, fmt("sum l^(1/2) sqrt(log n) / n: %.4f -> %.4f, change %.1f%%",
                         r.rows[0].mean, r.rows[1].mean, 100 * ch)};
}

Outcome reproducibility() {
  std::vector<ExperimentSpec> specs;
  const auto add = [&](ExperimentKind k, std::vector<std::int64_t> sizes, std::int64_t trials) {
    ExperimentSpec s;
    s.kind = k;
    s.sizes = std::move(sizes);
    s.trials = trials;
    s.seed = 13;
    specs.push_back(s);
  };
  add(ExperimentKind::alpha, {8, 16, 32}, 8);
  add(ExperimentKind::alpha_s, {2, 3}, 8);
  add(ExperimentKind::drift, {256, 4096}, 8);
  add(ExperimentKind::range_lln, {256, 4096}, 8);
  add(ExperimentKind::boundary_lln, {256, 4096}, 8);
  add(ExperimentKind::flatto, {256, 4096}, 8);
  add(ExperimentKind::good_update, {8}, 8);
  add(ExperimentKind::oned_dist, {1024}, 64);
  specs.back().reference_steps = 1024;
  add(ExperimentKind::oned_constants, {4, 6}, 8);
  add(ExperimentKind::local_time, {256, 4096}, 8);
  add(ExperimentKind::zwrapz, {256, 4096}, 8);
  int ok = 0;
  for (const auto& s : specs) {
    const auto a = run_experiment(s, {1}), b = run_experiment(s, {1}), c = run_experiment(s, {4});
    const auto ca = record_csv(a), ja = record_to_json(a).dump();
    ok += ca == record_csv(b) && ca == record_csv(c) && ja == record_to_json(b).dump() &&
          ja == record_to_json(c).dump();
  }
  return {ok == static_cast<int>(specs.size()),
          fmt("%d / %zu kinds byte-identical across repeats and threads {1, 4}", ok, specs.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--threads", g_threads, "worker threads");
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"word-metric sandwich", word_metric_sandwich},
      {"TSP1 bound on exact values", tsp1_exact},
      {"strip heuristic bound", strip_bound},
      {"uncrossing pipeline", uncrossing_pipeline},
      {"alpha_p estimation", alpha},
      {"range LLN", range_lln},
      {"boundary statistic", boundary_lln},
      {"Flatto statistic", flatto},
      {"drift LLN", drift},
      {"good-update coupling", good_update},
      {"1-D limit law", oned_law},
      {"Cerny statistic", cerny},
      {"reproducibility", reproducibility},
  };
  const std::set<int> wanted(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.count(k)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", k, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str(), sec);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
