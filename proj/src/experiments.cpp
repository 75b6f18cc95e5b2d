#include "ldl/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "ldl/errors.hpp"
#include "ldl/record.hpp"

namespace ldl {

namespace {

constexpr double kPi = 3.141592653589793;

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::alpha, "alpha"},
    {ExperimentKind::alpha_s, "alpha_s"},
    {ExperimentKind::drift, "drift"},
    {ExperimentKind::range_lln, "range_lln"},
    {ExperimentKind::boundary_lln, "boundary_lln"},
    {ExperimentKind::flatto, "flatto"},
    {ExperimentKind::good_update, "good_update"},
    {ExperimentKind::oned_dist, "oned_dist"},
    {ExperimentKind::oned_constants, "oned_constants"},
    {ExperimentKind::local_time, "local_time"},
    {ExperimentKind::zwrapz, "zwrapz"},
};

bool is_walk_kind(ExperimentKind k) {
  return k == ExperimentKind::range_lln || k == ExperimentKind::boundary_lln ||
         k == ExperimentKind::flatto || k == ExperimentKind::local_time;
}

std::vector<std::int64_t> powers_of_two(int lo, int hi, int step = 1) {
  std::vector<std::int64_t> out;
  for (int k = lo; k <= hi; k += step) out.push_back(std::int64_t{1} << k);
  return out;
}

double dlog(std::int64_t n) { return std::log(static_cast<double>(n)); }

StepDistribution base_walk(const ExperimentSpec& s) {
  if (!s.tail) return StepDistribution::simple(s.base_dim);
  const double w = (1.0 - s.tail->weight) / (2.0 * s.base_dim);
  std::vector<Atom> atoms{{{1, 0}, w}, {{-1, 0}, w}};
  if (s.base_dim == 2) {
    atoms.push_back({{0, 1}, w});
    atoms.push_back({{0, -1}, w});
  }
  return StepDistribution(s.base_dim, std::move(atoms), MomentClass::two_plus_eps, s.tail);
}

SizeRow make_row(std::int64_t n, const std::vector<double>& xs, double statistic) {
  const auto s = summarize(xs);
  return {n, s.count, s.mean, s.std_err, statistic, s.lo99, s.hi99};
}

template <class F>
std::vector<double> run_trials(const ExperimentSpec& spec, std::int64_t n, const RunOptions& opt,
                               F f) {
  return parallel_map(static_cast<std::size_t>(spec.trials), opt.threads, [&](std::size_t t) {
    return f(trial_seed(spec.seed, n, static_cast<std::int64_t>(t)));
  });
}

double mean_of(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) m.add(x);
  return m.mean();
}

// Least-squares slope of ys against xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double mx = mean_of(xs), my = mean_of(ys);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

PointSet full_square(std::int64_t side, int dim = 2) {
  PointHashSet pts;
  for (std::int64_t x = 0; x < side; ++x) {
    if (dim == 1) {
      pts.insert({x, 0});
      continue;
    }
    for (std::int64_t y = 0; y < side; ++y) pts.insert({x, y});
  }
  return PointSet(std::move(pts));
}

void last_size_summary(RunRecord& rec, const std::string& name) {
  if (rec.rows.empty()) return;
  const auto& r = rec.rows.back();
  rec.derived[name] = r.mean;
  rec.derived[name + "_std_err"] = r.std_err;
  rec.derived[name + "_lo99"] = r.lo99;
  rec.derived[name + "_hi99"] = r.hi99;
  if (rec.rows.size() >= 2) {
    const auto& q = rec.rows[rec.rows.size() - 2];
    rec.derived["relative_change_last"] = std::abs(r.mean - q.mean) / std::abs(q.mean);
  }
}

// ------------------------------------------------------------------ kinds

void run_alpha(const ExperimentSpec& spec, const RunOptions& opt, RunRecord& rec) {
  std::vector<double> b, se;
  for (auto side : spec.sizes) {
    auto xs = run_trials(spec, side, opt, [&](std::uint64_t seed) {
      return alpha_trial(spec.p, side, seed, spec.solver, spec.box_side);
    });
    rec.rows.push_back(make_row(side, xs, median(xs)));
    b.push_back(rec.rows.back().mean);
    se.push_back(rec.rows.back().std_err);
  }
  rec.series["b"] = b;
  rec.series["std_err"] = se;
  const auto& last = rec.rows.back();
  const double m = std::floor(std::log2(static_cast<double>(last.n)));
  const double band = 9.0 * std::pow(2.0, -m - 1.0);
  rec.derived["alpha_hat"] = last.mean;
  rec.derived["alpha_std_err"] = last.std_err;
  rec.derived["tail_band"] = band;
  rec.derived["alpha_lo99"] = last.mean - kZ99 * last.std_err;
  rec.derived["alpha_hi99"] = last.mean + band + kZ99 * last.std_err;
  // b_{m+1} <= b_m + 9 2^(-m-2) + 3 (SE_m + SE_{m+1}) over consecutive doublings.
  std::int64_t checks = 0, violations = 0;
  double worst = -1e300;
  for (std::size_t i = 0; i + 1 < rec.rows.size(); ++i) {
    if (rec.rows[i + 1].n != 2 * rec.rows[i].n) continue;
    const double mi = std::floor(std::log2(static_cast<double>(rec.rows[i].n)));
    const double excess =
        b[i + 1] - b[i] - 9.0 * std::pow(2.0, -mi - 2.0) - 3.0 * (se[i] + se[i + 1]);
    ++checks;
    if (excess > 0.0) ++violations;
    worst = std::max(worst, excess);
  }
  rec.derived["recursion_checks"] = static_cast<double>(checks);
  rec.derived["recursion_violations"] = static_cast<double>(violations);
  if (checks) rec.derived["recursion_worst_excess"] = worst;
}

void run_alpha_s(const ExperimentSpec& spec, const RunOptions& opt, RunRecord& rec) {
  const WreathGroup g(spec.base_dim, LampGroup::cyclic(spec.lamp_order));
  const auto s = named_generators(g, spec.generators);
  for (auto side : spec.sizes) {
    auto xs = run_trials(spec, side, opt, [&](std::uint64_t seed) {
      return alpha_s_trial(g, s, spec.p, side, seed);
    });
    rec.rows.push_back(make_row(side, xs, median(xs)));
  }
  last_size_summary(rec, "alpha_s_hat");
  rec.derived["p"] = spec.p;
}

void run_drift(const ExperimentSpec& spec, const RunOptions& opt, RunRecord& rec) {
  const auto base = base_walk(spec);
  std::vector<double> correction, a_ratio, support, box;
  std::int64_t violations = 0;
  for (auto n : spec.sizes) {
    std::int64_t c = spec.box_side;
    if (c == 0 && spec.tail)
      c = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(long_jump_threshold(n))));
    const auto samples =
        parallel_map(static_cast<std::size_t>(spec.trials), opt.threads, [&](std::size_t t) {
          return drift_sample(base, spec.switch_prob, n,
                              trial_seed(spec.seed, n, static_cast<std::int64_t>(t)), c);
        });
    const double scale = static_cast<double>(n) / dlog(n);
    std::vector<double> xs, corr, ar, sup, bs;
    for (const auto& d : samples) {
      xs.push_back(static_cast<double>(d.length) / scale);
      corr.push_back(3.0 * static_cast<double>(d.max_norm) / scale);
      ar.push_back(static_cast<double>(d.long_jumps) / scale);
      sup.push_back(static_cast<double>(d.support));
      bs.push_back(static_cast<double>(d.box_side));
      const auto lower = d.tsp + d.support;
      if (d.length < lower || d.length > lower + 3 * d.max_norm) ++violations;
    }
    rec.rows.push_back(make_row(n, xs, median(xs)));
    correction.push_back(mean_of(corr));
    a_ratio.push_back(mean_of(ar));
    support.push_back(mean_of(sup));
    box.push_back(median(bs));
  }
  rec.series["correction"] = correction;
  rec.series["long_jump_ratio"] = a_ratio;
  rec.series["support"] = support;
  rec.series["box_side"] = box;
  last_size_summary(rec, "c_hat");
  rec.derived["sandwich_violations"] = static_cast<double>(violations);
  if (spec.tail) {
    bool decreasing = true;
    for (std::size_t i = 1; i < a_ratio.size(); ++i)
      decreasing = decreasing && a_ratio[i] < a_ratio[i - 1];
    rec.derived["long_jump_ratio_decreasing"] = decreasing ? 1.0 : 0.0;
  }
}

void run_walk_kind(const ExperimentSpec& spec, const RunOptions& opt, RunRecord& rec) {
  const auto base = base_walk(spec);
  std::vector<double> folner;
  for (auto n : spec.sizes) {
    const auto fs =
        parallel_map(static_cast<std::size_t>(spec.trials), opt.threads, [&](std::size_t t) {
          return walk_functionals(base, n, trial_seed(spec.seed, n, static_cast<std::int64_t>(t)),
                                  spec.visits);
        });
    const double dn = static_cast<double>(n), ln = dlog(n);
    std::vector<double> xs, fr;
    for (const auto& f : fs) {
      switch (spec.kind) {
        case ExperimentKind::range_lln:
          xs.push_back(static_cast<double>(f.range) / (kPi * dn / ln));
          break;
        case ExperimentKind::boundary_lln:
          xs.push_back(static_cast<double>(f.boundary) * ln * ln / dn);
          break;
        case ExperimentKind::flatto:
          xs.push_back(static_cast<double>(f.thin) * ln * ln / dn);
          break;
        default:
          xs.push_back(spec.base_dim == 1 ? f.sqrt_local / std::pow(dn, 0.75)
                                          : f.sqrt_local * std::sqrt(ln) / dn);
      }
      fr.push_back(static_cast<double>(f.boundary) / static_cast<double>(f.range));
    }
    rec.rows.push_back(make_row(n, xs, median(xs)));
    folner.push_back(median(fr));
  }
  last_size_summary(rec, "ratio");
  if (spec.kind == ExperimentKind::boundary_lln) {
    rec.series["folner_median"] = folner;
    bool decreasing = true;
    for (std::size_t i = 1; i < folner.size(); ++i)
      decreasing = decreasing && folner[i] < folner[i - 1];
    rec.derived["folner_decreasing"] = decreasing ? 1.0 : 0.0;
  }
  if (spec.kind == ExperimentKind::range_lln) {
    // Each step must move toward 1 up to a 99% allowance for the two means'
    // sampling error; the strict version is kept alongside.
    bool approaching = true, strict = true;
    for (std::size_t i = 1; i < rec.rows.size(); ++i) {
      const auto &a = rec.rows[i - 1], &b = rec.rows[i];
      const double gap = std::abs(b.mean - 1.0) - std::abs(a.mean - 1.0);
      strict = strict && gap < 0.0;
      approaching = approaching && gap < kZ99 * std::hypot(a.std_err, b.std_err);
    }
    approaching = approaching &&
                  std::abs(rec.rows.back().mean - 1.0) < std::abs(rec.rows.front().mean - 1.0);
    rec.derived["approaches_one"] = approaching ? 1.0 : 0.0;
    rec.derived["approaches_one_strict"] = strict ? 1.0 : 0.0;
  }
}

void run_good_update(const ExperimentSpec& spec, const RunOptions& opt, RunRecord& rec) {
  const double expected = std::pow(1.0 - spec.good_rate, static_cast<double>(spec.visits));
  for (auto side : spec.sizes) {
    const auto ts =
        parallel_map(static_cast<std::size_t>(spec.trials), opt.threads, [&](std::size_t t) {
          return good_update_trial(side, spec.visits, spec.good_rate, spec.switch_prob,
                                   trial_seed(spec.seed, side, static_cast<std::int64_t>(t)));
        });
    std::int64_t sites = 0, misses = 0, zero = 0, one = 0, steps = 0;
    std::vector<double> xs;
    for (const auto& t : ts) {
      sites += t.sites;
      misses += t.misses;
      zero += t.lamp_zero;
      one += t.lamp_one;
      steps += t.steps;
      xs.push_back(static_cast<double>(t.misses) / static_cast<double>(t.sites));
    }
    const double rate = static_cast<double>(misses) / static_cast<double>(sites);
    rec.rows.push_back(make_row(side, xs, rate));
    const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(sites));
    rec.derived["miss_rate"] = rate;
    rec.derived["expected_miss_rate"] = expected;
    rec.derived["miss_sigma"] = sigma;
    rec.derived["miss_z"] = sigma > 0.0 ? (rate - expected) / sigma : 0.0;
    rec.derived["sites"] = static_cast<double>(sites);
    rec.derived["mean_steps"] = static_cast<double>(steps) / static_cast<double>(ts.size());
    rec.derived["chi_square"] = chi_square_uniform({zero, one});
    rec.derived["chi_square_critical"] = chi_square_critical(1.0, 0.01);
    rec.derived["good_sites"] = static_cast<double>(zero + one);
  }
}

void run_oned_dist(const ExperimentSpec& spec, const RunOptions& opt, RunRecord& rec) {
  const auto base = base_walk(spec);
  for (auto n : spec.sizes) {
    auto xs = run_trials(spec, n, opt,
                         [&](std::uint64_t seed) { return oned_statistic(base, n, seed); });
    auto ref = parallel_map(static_cast<std::size_t>(spec.trials), opt.threads, [&](std::size_t t) {
      return brownian_reference(spec.reference_steps,
                                derive_seed(spec.seed, {0x62726f776eULL, static_cast<std::uint64_t>(n),
                                                        static_cast<std::uint64_t>(t)}));
    });
    const double ks = ks_statistic(xs, ref);
    rec.rows.push_back(make_row(n, xs, ks));
    const auto rs = summarize(ref);
    rec.derived["ks"] = ks;
    rec.derived["ks_critical_01"] = ks_critical(xs.size(), ref.size(), 0.01);
    rec.derived["reference_mean"] = rs.mean;
    rec.derived["reference_std_err"] = rs.std_err;
    rec.derived["reference_expected"] = 2.0 * std::sqrt(8.0 / kPi) - std::sqrt(2.0 / kPi);
    rec.derived["sample_mean"] = rec.rows.back().mean;
  }
}

bool has_pure_unit_move(const WreathGroup& g, const GeneratingSet& s) {
  for (const auto& [m, e] : move_table(g, s))
    if (e.lamps.empty() && e.position == Point{1, 0}) return true;
  return false;
}

void run_oned_constants(const ExperimentSpec& spec, const RunOptions& opt, RunRecord& rec) {
  const WreathGroup g(1, LampGroup::cyclic(spec.lamp_order));
  const auto s = named_generators(g, spec.generators);
  const bool splittable = has_pure_unit_move(g, s);
  struct Sample {
    OnedCosts whole, left, right;
    std::int64_t k = 0;
  };
  std::vector<double> ns, ret_means, thr_means, thr_se;
  std::int64_t checks = 0, violations = 0, paired_ge = 0, paired = 0;
  for (auto n : spec.sizes) {
    const auto samples =
        parallel_map(static_cast<std::size_t>(spec.trials), opt.threads, [&](std::size_t t) {
          Rng rng(trial_seed(spec.seed, n, static_cast<std::int64_t>(t)));
          std::vector<std::int64_t> v(static_cast<std::size_t>(n));
          for (auto& x : v) x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.lamp_order)));
          Sample out;
          out.whole = oned_costs(g, s, v);
          if (splittable && n >= 2) {
            out.k = n / 2;
            out.left = oned_costs(g, s, {v.begin(), v.begin() + out.k});
            out.right = oned_costs(g, s, {v.begin() + out.k, v.end()});
          }
          return out;
        });
    std::vector<double> ret, thr;
    for (const auto& smp : samples) {
      ret.push_back(static_cast<double>(smp.whole.return_cost) / static_cast<double>(n));
      thr.push_back(static_cast<double>(smp.whole.through_cost) / static_cast<double>(n));
      ++paired;
      if (smp.whole.return_cost >= smp.whole.through_cost) ++paired_ge;
      if (smp.k > 0) {
        // Left through-tour, one pure step, right tour, pure steps back.
        checks += 2;
        if (smp.whole.through_cost > smp.left.through_cost + 1 + smp.right.through_cost)
          ++violations;
        if (smp.whole.return_cost > smp.left.through_cost + 1 + smp.right.return_cost + smp.k)
          ++violations;
      }
    }
    const auto ts = summarize(thr);
    rec.rows.push_back(make_row(n, ret, ts.mean));
    ns.push_back(static_cast<double>(n));
    ret_means.push_back(rec.rows.back().mean * static_cast<double>(n));
    thr_means.push_back(ts.mean * static_cast<double>(n));
    thr_se.push_back(ts.std_err);
  }
  rec.series["return_cost"] = ret_means;
  rec.series["through_cost"] = thr_means;
  rec.series["through_std_err"] = thr_se;
  rec.derived["c1_hat"] = slope(ns, ret_means);
  rec.derived["c2_hat"] = slope(ns, thr_means);
  rec.derived["subadditivity_checks"] = static_cast<double>(checks);
  rec.derived["subadditivity_violations"] = static_cast<double>(violations);
  rec.derived["return_ge_through_fraction"] =
      static_cast<double>(paired_ge) / static_cast<double>(paired);
}

void run_zwrapz(const ExperimentSpec& spec, const RunOptions& opt, RunRecord& rec) {
  const auto base = base_walk(spec);
  std::vector<double> upper;
  for (auto n : spec.sizes) {
    struct Out {
      double lower = 0.0, upper = 0.0;
    };
    const double scale = static_cast<double>(n) / std::sqrt(dlog(n));
    const auto outs =
        parallel_map(static_cast<std::size_t>(spec.trials), opt.threads, [&](std::size_t t) {
          Rng rng(trial_seed(spec.seed, n, static_cast<std::int64_t>(t)));
          std::unordered_map<Point, std::int64_t, PointHash> f;
          Point x;
          for (std::int64_t i = 0; i < n; ++i) {
            f[x] += rng.below(2) ? 1 : -1;
            x = x + base.sample(rng);
          }
          std::int64_t lower = 0;
          std::vector<Point> supp;
          for (const auto& [p, v] : f) {
            if (v == 0) continue;
            lower += std::abs(v);
            supp.push_back(p);
          }
          const std::int64_t tour = supp.empty() ? 0 : strip_heuristic(supp).length;
          const auto up = lower + tour + 2 * static_cast<std::int64_t>(supp.size()) + l1_norm(x);
          return Out{static_cast<double>(lower) / scale, static_cast<double>(up) / scale};
        });
    std::vector<double> lo, up;
    for (const auto& o : outs) {
      lo.push_back(o.lower);
      up.push_back(o.upper);
    }
    rec.rows.push_back(make_row(n, lo, median(lo)));
    upper.push_back(mean_of(up));
  }
  rec.series["upper_ratio"] = upper;
  last_size_summary(rec, "lower_ratio");
}

}  // namespace

std::string kind_name(ExperimentKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& s) {
  for (const auto& e : kKinds)
    if (s == e.name) return e.kind;
  return std::nullopt;
}

std::string solver_name(Solver s) {
  switch (s) {
    case Solver::exact:
      return "exact";
    case Solver::strip:
      return "strip";
    default:
      return "box";
  }
}

std::optional<Solver> parse_solver(const std::string& s) {
  if (s == "exact") return Solver::exact;
  if (s == "strip") return Solver::strip;
  if (s == "box") return Solver::box;
  return std::nullopt;
}

ExperimentSpec normalized(ExperimentSpec s) {
  using K = ExperimentKind;
  std::vector<std::int64_t> sizes;
  std::int64_t trials = 50;
  int dim = 2;
  switch (s.kind) {
    case K::alpha:
      sizes = powers_of_two(3, 7);
      if (s.box_side == 0 && s.solver == Solver::box) s.box_side = 8;
      break;
    case K::alpha_s:
      sizes = {2, 3, 4};
      trials = 20;
      break;
    case K::drift:
      sizes = powers_of_two(12, 20, 2);
      trials = 20;
      break;
    case K::range_lln:
    case K::boundary_lln:
    case K::flatto:
      sizes = powers_of_two(14, 20);
      break;
    case K::local_time:
      sizes = powers_of_two(16, 20, 2);
      break;
    case K::good_update:
      sizes = {32};
      trials = 200;
      break;
    case K::oned_dist:
      sizes = {1 << 16};
      trials = 2000;
      dim = 1;
      break;
    case K::oned_constants:
      sizes = {4, 6, 8, 10, 12};
      dim = 1;
      break;
    case K::zwrapz:
      sizes = powers_of_two(12, 16, 2);
      trials = 20;
      break;
  }
  if (s.sizes.empty()) s.sizes = sizes;
  if (s.trials == 0) s.trials = trials;
  if (s.base_dim == 0) s.base_dim = dim;
  if (s.generators.empty()) s.generators = s.kind == K::oned_constants ? "sws" : "standard";
  if (s.visits == 0) {
    if (s.kind == K::good_update) s.visits = 10;
    if (s.kind == K::flatto) s.visits = 2;
  }
  return s;
}

std::vector<std::string> validate(const ExperimentSpec& in) {
  using K = ExperimentKind;
  const auto s = normalized(in);
  std::vector<std::string> e;
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    if (s.sizes[i] < 1) e.push_back("sizes must be positive");
    if (i > 0 && s.sizes[i] <= s.sizes[i - 1]) e.push_back("sizes must be strictly increasing");
  }
  if (s.trials < 1) e.push_back("trials must be at least 1");
  if (s.base_dim != 1 && s.base_dim != 2) e.push_back("base_dim must be 1 or 2");
  if (s.lamp_order < 2) e.push_back("lamp_order must be at least 2");
  if (s.generators != "standard" && s.generators != "sws" && s.generators != "walk_toggle")
    e.push_back("generators must be standard, sws or walk_toggle");
  if (s.box_side != 0 && s.box_side < 2) e.push_back("box_side must be 0 (policy) or at least 2");
  if (s.tail) {
    if (!(s.tail->weight > 0.0 && s.tail->weight < 1.0))
      e.push_back("tail.weight must lie in (0, 1)");
    if (!(s.tail->exponent > 2.0))
      e.push_back("tail.exponent must exceed 2 (finite second moment)");
    if (s.tail->max_jump < 1) e.push_back("tail.max_jump must be at least 1");
  }
  const bool needs_p = s.kind == K::alpha || s.kind == K::alpha_s;
  if (needs_p && !(s.p > 0.0 && s.p <= 1.0)) e.push_back("p must lie in (0, 1]");
  const bool needs_switch = s.kind == K::drift || s.kind == K::good_update;
  if (needs_switch && !(s.switch_prob > 0.0 && s.switch_prob < 1.0))
    e.push_back("switch_prob must lie in (0, 1): a degenerate switch law does not generate");
  if (is_walk_kind(s.kind) || s.kind == K::drift || s.kind == K::zwrapz) {
    for (auto n : s.sizes)
      if (n < 3) {
        e.push_back("walk lengths must be at least 3 (the scale n / log n needs log n > 1)");
        break;
      }
  }
  if ((s.kind == K::drift || s.kind == K::zwrapz || s.kind == K::boundary_lln ||
       s.kind == K::range_lln || s.kind == K::flatto) &&
      s.base_dim != 2)
    e.push_back(kind_name(s.kind) + " needs base_dim 2");
  if (s.kind == K::drift && s.lamp_order != 2) e.push_back("drift needs lamp_order 2");
  if ((s.kind == K::oned_dist || s.kind == K::oned_constants) && s.base_dim != 1)
    e.push_back(kind_name(s.kind) + " needs base_dim 1");
  if (s.generators == "sws" && s.base_dim != 1) e.push_back("sws generators need base_dim 1");
  if (s.kind == K::flatto && s.visits < 2) e.push_back("flatto needs visits (q) at least 2");
  if (s.kind == K::good_update) {
    if (!(s.good_rate > 0.0 && s.good_rate < 1.0)) e.push_back("good_rate must lie in (0, 1)");
    if (s.visits < 0) e.push_back("visits must be non-negative");
  }
  if (s.kind == K::oned_dist && s.reference_steps < 16)
    e.push_back("reference_steps must be at least 16");
  return e;
}

// ---------------------------------------------------------------- kernels

double alpha_trial(double p, std::int64_t side, std::uint64_t seed, Solver solver,
                   std::int64_t box_side) {
  const auto square = full_square(side);
  const auto kept = dilute(square, p, seed);
  const double area = static_cast<double>(side * side);
  if (kept.empty()) return 0.0;
  std::int64_t len = 0;
  switch (solver) {
    case Solver::exact:
      try {
        len = exact_tsp(kept).length;
      } catch (const ResourceError&) {
        throw ResourceError("exact solver cannot handle side " + std::to_string(side) +
                            "; use --solver box or strip");
      }
      break;
    case Solver::strip:
      len = strip_heuristic(kept.sorted(), {0, 0}, side).length;
      break;
    case Solver::box:
      len = box_tsp_diluted(kept, square, box_side < 2 ? 8 : box_side).result.length;
      break;
  }
  return static_cast<double>(len) / area;
}

double alpha_s_trial(const WreathGroup& g, const GeneratingSet& s, double p, std::int64_t side,
                     std::uint64_t seed) {
  const auto box = full_square(side, g.base_dim());
  LampConfig target;
  for (const auto& q : dilute(box, p, seed).sorted()) target.set(q, 1);
  const auto cost = s_path_tsp_exact(g, target, {0, 0}, side, s);
  return static_cast<double>(cost) / static_cast<double>(box.size());
}

GeneratingSet named_generators(const WreathGroup& g, const std::string& name) {
  if (name == "standard" || name.empty()) return GeneratingSet::standard(g);
  if (name == "sws") return GeneratingSet::sws_1d(g);
  if (name == "walk_toggle") {
    GeneratingSet s;
    s.generators.push_back({Point{1, 0}, {}});
    s.labels.push_back("s1");
    if (g.base_dim() == 2) {
      s.generators.push_back({Point{0, 1}, {}});
      s.labels.push_back("s2");
    }
    auto t = g.lamp_at({0, 0}, 1);
    t.position = {1, 0};
    s.generators.push_back(std::move(t));
    s.labels.push_back("toggle_s1");
    return s;
  }
  throw ConfigError("unknown generating set '" + name + "'");
}

double long_jump_threshold(std::int64_t n) {
  if (n < 3) return 1.0;
  const double l = dlog(n);
  return std::sqrt(l / std::max(1.0, std::log(l)));
}

std::int64_t drift_box_side(std::int64_t range, std::int64_t boundary) {
  if (boundary <= 0) return 2;
  const double c = std::ceil(std::cbrt(4.0 * static_cast<double>(range) / static_cast<double>(boundary)) - 1e-12);
  return std::max<std::int64_t>(2, static_cast<std::int64_t>(c));
}

DriftSample drift_sample(const StepDistribution& base, double switch_prob, std::int64_t n,
                         std::uint64_t seed, std::int64_t box_side) {
  if (base.dimension() != 2) throw DomainError("drift_sample needs a walk on Z^2");
  Rng rng(seed);
  PointHashSet lit, visited;
  const auto toggle = [&](const Point& p) {
    auto [it, inserted] = lit.insert(p);
    if (!inserted) lit.erase(it);
  };
  DriftSample out;
  out.n = n;
  const double cn = long_jump_threshold(n);
  Point x;
  visited.insert(x);
  for (std::int64_t t = 0; t < n; ++t) {
    if (rng.uniform() < switch_prob) toggle(x);
    const Point step = base.sample(rng);
    const auto len = l1_norm(step);
    if (static_cast<double>(len) > cn) out.long_jumps += len;
    x = x + step;
    visited.insert(x);
    out.max_norm = std::max(out.max_norm, l1_norm(x));
    if (rng.uniform() < switch_prob) toggle(x);
  }
  out.position = x;
  out.range = static_cast<std::int64_t>(visited.size());
  const PointSet supp(std::move(lit));
  out.support = static_cast<std::int64_t>(supp.size());
  if (supp.size() <= 12) {
    const auto pts = supp.sorted();
    out.tsp = pts.empty() ? 0 : exact_tsp(pts).length;
    out.length = anchored_exact_tsp(pts, {0, 0}, x).length + out.support;
    out.exact = true;
    return out;
  }
  const PointSet range(std::move(visited));
  const auto c = box_side > 0 ? box_side
                              : drift_box_side(out.range,
                                               static_cast<std::int64_t>(inner_boundary_size(range)));
  out.box_side = c;
  const auto rep = box_tsp_diluted(supp, range, c);
  const auto& order = rep.result.order;
  out.tsp = rep.result.length;
  const Point o{0, 0};
  const auto ends = std::min(l1_distance(o, order.front()) + l1_distance(order.back(), x),
                             l1_distance(o, order.back()) + l1_distance(order.front(), x));
  out.length = out.tsp + ends + out.support;
  return out;
}

WalkFunctionals walk_functionals(const StepDistribution& d, std::int64_t n, std::uint64_t seed,
                                 std::int64_t q) {
  const auto t = sample_walk(d, n, seed);
  const auto c = visit_counts(t);
  WalkFunctionals out;
  out.n = n;
  out.range = static_cast<std::int64_t>(c.range_size());
  PointHashSet pts;
  pts.reserve(c.map().size());
  for (const auto& [p, k] : c.map()) pts.insert(p);
  out.boundary = static_cast<std::int64_t>(inner_boundary_size(PointSet(std::move(pts))));
  out.thin = q >= 2 ? thin_points(c, q - 1) : 0;
  out.sqrt_local = local_time_power_sum(c, 0.5);
  for (const auto& p : t.positions) out.max_norm = std::max(out.max_norm, l1_norm(p));
  return out;
}

GoodUpdateTrial good_update_trial(std::int64_t side, std::int64_t q, double a, double switch_prob,
                                  std::uint64_t seed) {
  if (side < 1) throw DomainError("good_update_trial needs side >= 1");
  if (!(a > 0.0)) throw ConfigError("good-update rate a must be positive");
  if (a >= 1.0 && side > 1 && q > 0) throw DomainError("a = 1 never moves the walker");
  const auto sites = static_cast<std::size_t>(side * side);
  std::vector<std::int64_t> visits(sites, 0);
  std::vector<char> good(sites, 0), lamp(sites, 0);
  GoodUpdateTrial out;
  out.sites = static_cast<std::int64_t>(sites);
  std::size_t remaining = q > 0 ? sites : 0;
  Rng rng(seed);
  std::int64_t px = 0, py = 0;
  while (remaining > 0) {
    ++out.steps;
    const auto here = static_cast<std::size_t>(py * side + px);
    const bool counted = visits[here] < q;
    if (counted && ++visits[here] == q) --remaining;
    if (rng.uniform() < a) {
      if (counted) good[here] = 1;
      if (rng.below(2)) lamp[here] ^= 1;
      continue;
    }
    if (rng.uniform() < switch_prob) lamp[here] ^= 1;
    switch (rng.below(4)) {
      case 0:
        px = (px + 1) % side;
        break;
      case 1:
        px = (px + side - 1) % side;
        break;
      case 2:
        py = (py + 1) % side;
        break;
      default:
        py = (py + side - 1) % side;
    }
    if (rng.uniform() < switch_prob) lamp[static_cast<std::size_t>(py * side + px)] ^= 1;
  }
  for (std::size_t i = 0; i < sites; ++i) {
    if (!good[i]) {
      ++out.misses;
      continue;
    }
    if (lamp[i])
      ++out.lamp_one;
    else
      ++out.lamp_zero;
  }
  return out;
}

double oned_statistic(const StepDistribution& d, std::int64_t n, std::uint64_t seed) {
  if (d.dimension() != 1) throw DomainError("oned_statistic needs a walk on Z");
  if (n < 1) throw DomainError("oned_statistic needs n >= 1");
  bool nearest = !d.tail();
  for (const auto& a : d.atoms()) nearest = nearest && std::abs(a.displacement.x) <= 1;
  Rng rng(seed);
  std::int64_t x = 0, lo = 0, hi = 0;
  std::unordered_set<std::int64_t> seen;
  if (!nearest) seen.insert(0);
  for (std::int64_t t = 0; t < n; ++t) {
    x += d.sample(rng).x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    if (!nearest) seen.insert(x);
  }
  const auto range = nearest ? hi - lo + 1 : static_cast<std::int64_t>(seen.size());
  return static_cast<double>(2 * range - std::abs(x)) /
         (d.sigma_x() * std::sqrt(static_cast<double>(n)));
}

double brownian_reference(std::int64_t m, std::uint64_t seed) {
  Rng rng(seed);
  double s = 0.0, lo = 0.0, hi = 0.0;
  for (std::int64_t t = 0; t < m; ++t) {
    s += rng.normal();
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double r = std::sqrt(static_cast<double>(m));
  return (2.0 * (hi - lo) - std::abs(s)) / r;
}

OnedCosts oned_costs(const WreathGroup& g, const GeneratingSet& s,
                     const std::vector<std::int64_t>& values, std::size_t cap) {
  if (g.base_dim() != 1 || !g.lamps().is_finite())
    throw DomainError("oned_costs needs Z wr F with F finite");
  const auto n = static_cast<std::int64_t>(values.size());
  if (n < 1) throw DomainError("oned_costs needs at least one site");
  const auto& lamps = g.lamps();
  const auto order = static_cast<std::uint64_t>(lamps.order());
  for (auto v : values)
    if (!lamps.contains(v)) throw DomainError("lamp value outside the lamp group");
  const std::int64_t r = s.reach();
  const std::int64_t positions = n + 2 * r;
  std::vector<std::uint64_t> pw(static_cast<std::size_t>(n) + 1, 1);
  double configs = 1.0;
  for (std::int64_t i = 0; i < n; ++i) {
    configs *= static_cast<double>(order);
    if (configs * static_cast<double>(positions) > static_cast<double>(cap))
      throw ResourceError("oned_costs state space exceeds the cap");
    pw[static_cast<std::size_t>(i) + 1] = pw[static_cast<std::size_t>(i)] * order;
  }
  const std::uint64_t k = pw[static_cast<std::size_t>(n)];
  std::uint64_t target = 0;
  for (std::int64_t i = 0; i < n; ++i) target += static_cast<std::uint64_t>(values[static_cast<std::size_t>(i)]) * pw[static_cast<std::size_t>(i)];

  const auto moves = move_table(g, s);
  // state = (position index, config); position index 0 is site 1 - r
  const auto encode = [&](std::int64_t pos, std::uint64_t cfg) {
    return static_cast<std::uint64_t>(pos - (1 - r)) * k + cfg;
  };
  std::vector<std::int32_t> dist(static_cast<std::size_t>(positions) * k, -1);
  std::vector<std::uint64_t> frontier{encode(1, 0)}, next;
  dist[frontier[0]] = 0;
  const auto goal_return = encode(1, target), goal_through = encode(n, target);
  std::int32_t d = 0;
  while (!frontier.empty() && (dist[goal_return] < 0 || dist[goal_through] < 0)) {
    next.clear();
    for (auto st : frontier) {
      const auto pos = static_cast<std::int64_t>(st / k) + (1 - r);
      const auto cfg = st % k;
      for (const auto& [m, e] : moves) {
        const auto np = pos + e.position.x;
        if (np < 1 - r || np > n + r) continue;
        std::uint64_t nc = cfg;
        bool ok = true;
        for (const auto& [off, v] : e.lamps.entries()) {
          const auto site = pos + off.x;
          if (site < 1 || site > n) {
            ok = false;
            break;
          }
          const auto i = static_cast<std::size_t>(site - 1);
          const auto old = static_cast<std::int64_t>((nc / pw[i]) % order);
          const auto now = lamps.op(old, v);
          nc = nc - static_cast<std::uint64_t>(old) * pw[i] + static_cast<std::uint64_t>(now) * pw[i];
        }
        if (!ok) continue;
        const auto ns = encode(np, nc);
        if (dist[ns] >= 0) continue;
        dist[ns] = d + 1;
        next.push_back(ns);
      }
    }
    frontier.swap(next);
    ++d;
  }
  if (dist[goal_return] < 0 || dist[goal_through] < 0)
    throw DomainError("oned_costs: target not reachable with this generating set");
  return {dist[goal_return], dist[goal_through]};
}

RunRecord run_experiment(const ExperimentSpec& in, const RunOptions& opt) {
  const auto errors = validate(in);
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
    throw ConfigError(msg);
  }
  const auto spec = normalized(in);
  RunRecord rec;
  rec.kind = spec.kind;
  rec.seed = spec.seed;
  rec.spec_hash = spec_hash(spec);
  switch (spec.kind) {
    case ExperimentKind::alpha:
      run_alpha(spec, opt, rec);
      break;
    case ExperimentKind::alpha_s:
      run_alpha_s(spec, opt, rec);
      break;
    case ExperimentKind::drift:
      run_drift(spec, opt, rec);
      break;
    case ExperimentKind::good_update:
      run_good_update(spec, opt, rec);
      break;
    case ExperimentKind::oned_dist:
      run_oned_dist(spec, opt, rec);
      break;
    case ExperimentKind::oned_constants:
      run_oned_constants(spec, opt, rec);
      break;
    case ExperimentKind::zwrapz:
      run_zwrapz(spec, opt, rec);
      break;
    default:
      run_walk_kind(spec, opt, rec);
  }
  return rec;
}

}  // namespace ldl
