#ifndef LDL_EXPERIMENTS_HPP_
#define LDL_EXPERIMENTS_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ldl/lattice.hpp"
#include "ldl/stats.hpp"
#include "ldl/tsp.hpp"
#include "ldl/wreath.hpp"

namespace ldl {

enum class ExperimentKind {
  alpha,
  alpha_s,
  drift,
  range_lln,
  boundary_lln,
  flatto,
  good_update,
  oned_dist,
  oned_constants,
  local_time,
  zwrapz
};

std::string kind_name(ExperimentKind k);
std::optional<ExperimentKind> parse_kind(const std::string& s);

enum class Solver { exact, strip, box };

std::string solver_name(Solver s);
std::optional<Solver> parse_solver(const std::string& s);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::alpha;
  std::vector<std::int64_t> sizes;  // side lengths or walk lengths, strictly increasing
  std::int64_t trials = 0;          // 0: kind default
  std::uint64_t seed = 0;
  double p = 0.5;                   // dilution keep probability
  Solver solver = Solver::box;
  std::int64_t box_side = 0;        // 0: kind policy
  double switch_prob = 0.5;         // eta = (1 - s) id + s delta
  std::optional<PowerTail> tail;    // long jumps of the base walk
  std::int64_t lamp_order = 2;
  std::string generators;           // standard | sws | walk_toggle, empty: kind default
  double good_rate = 0.5;           // a in mu = a u + (1 - a) mu'
  std::int64_t visits = 0;          // q, 0: kind default (10 good_update, 2 flatto)
  std::int64_t reference_steps = 1 << 16;
  int base_dim = 0;                 // 0: kind default
};

// Fills kind defaults (sizes, trials, solver policy) without validating.
ExperimentSpec normalized(ExperimentSpec spec);
// Every problem found, empty when the spec can run.
std::vector<std::string> validate(const ExperimentSpec& spec);

struct SizeRow {
  std::int64_t n = 0;
  std::int64_t trials = 0;
  double mean = 0.0;
  double std_err = 0.0;
  double statistic = 0.0;  // kind-specific, see README
  double lo99 = 0.0;
  double hi99 = 0.0;
};

struct RunRecord {
  ExperimentKind kind = ExperimentKind::alpha;
  std::string spec_hash;
  std::uint64_t seed = 0;
  std::vector<SizeRow> rows;
  std::map<std::string, double> derived;
  std::map<std::string, std::vector<double>> series;
};

struct RunOptions {
  unsigned threads = 1;
};

// Trial t of size n always draws from derive_seed(seed, {n, t}).
inline std::uint64_t trial_seed(std::uint64_t seed, std::int64_t n, std::int64_t trial) {
  return derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
}

// f(0) .. f(count - 1) on up to `threads` workers; results in index order.
template <class F>
auto parallel_map(std::size_t count, unsigned threads, F f) -> std::vector<decltype(f(std::size_t{0}))> {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          out[i] = f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

RunRecord run_experiment(const ExperimentSpec& spec, const RunOptions& opt = {});

// ------------------------------------------------------------ trial kernels

// l_TS of the p-diluted side x side square divided by side^2.
double alpha_trial(double p, std::int64_t side, std::uint64_t seed, Solver solver,
                   std::int64_t box_side);

// Exact S-path cost of the p-diluted box of side `side` (lamp value 1 on kept
// sites) divided by its volume.
double alpha_s_trial(const WreathGroup& g, const GeneratingSet& s, double p, std::int64_t side,
                     std::uint64_t seed);

GeneratingSet named_generators(const WreathGroup& g, const std::string& name);

struct DriftSample {
  std::int64_t n = 0;
  Point position;
  std::int64_t support = 0;
  std::int64_t tsp = 0;         // l_TS estimate of the lamp support
  std::int64_t length = 0;      // anchored tour from 0 through supp to X_n, plus |supp|
  std::int64_t max_norm = 0;    // max_t |X_t|_1
  std::int64_t long_jumps = 0;  // A_n: sum of |step|_1 over steps longer than c_n
  std::int64_t range = 0;
  std::int64_t box_side = 0;
  bool exact = false;
};

// Walk on Z^2 wr Z/2 with step: toggle w.p. s, base step, toggle w.p. s.
DriftSample drift_sample(const StepDistribution& base, double switch_prob, std::int64_t n,
                         std::uint64_t seed, std::int64_t box_side = 0);
// Long-jump threshold sqrt(delta_{log n} log n) with delta_k = 1 / log k.
double long_jump_threshold(std::int64_t n);
// ceil((4 |R| / |dR|)^(1/3)), at least 2.
std::int64_t drift_box_side(std::int64_t range, std::int64_t boundary);

struct WalkFunctionals {
  std::int64_t n = 0;
  std::int64_t range = 0;
  std::int64_t boundary = 0;
  std::int64_t thin = 0;       // sites visited at most q - 1 times
  double sqrt_local = 0.0;     // sum_x l(n, x)^(1/2)
  std::int64_t max_norm = 0;
};

WalkFunctionals walk_functionals(const StepDistribution& d, std::int64_t n, std::uint64_t seed,
                                 std::int64_t q = 2);

struct GoodUpdateTrial {
  std::int64_t sites = 0;
  std::int64_t misses = 0;      // sites without a good update among their first q visits
  std::int64_t steps = 0;
  std::int64_t lamp_zero = 0;   // final lamp values over sites with a good update
  std::int64_t lamp_one = 0;
};

// Walk on the side x side torus with steps: w.p. a multiply by U uniform on
// {id, delta}, else an SWS step with switch probability s; runs until every
// site has at least q visits.
GoodUpdateTrial good_update_trial(std::int64_t side, std::int64_t q, double a, double switch_prob,
                                  std::uint64_t seed);

// (2 |R_n| - |X_n|) / (sigma sqrt n) for a walk on Z.
double oned_statistic(const StepDistribution& d, std::int64_t n, std::uint64_t seed);
// 2 R_1 - |B_1| from a Gaussian random walk with m steps.
double brownian_reference(std::int64_t m, std::uint64_t seed);

struct OnedCosts {
  std::int64_t return_cost = 0;   // start and end at site 1
  std::int64_t through_cost = 0;  // start at 1, end at n
};

// Exact S-path costs writing `values` on sites 1..n (lamps outside are never
// touched). Throws ResourceError above `cap` states.
OnedCosts oned_costs(const WreathGroup& g, const GeneratingSet& s,
                     const std::vector<std::int64_t>& values, std::size_t cap = 20'000'000);

}  // namespace ldl

#endif  // LDL_EXPERIMENTS_HPP_
