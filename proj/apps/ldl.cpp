// ldl: command-line front end for the experiments.
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldl/errors.hpp"
#include "ldl/experiments.hpp"
#include "ldl/record.hpp"
#include "ldl/tsp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Flags {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::vector<std::int64_t> sizes;
  double p = 0.5;
  std::string solver;
  std::int64_t box_side = 0;
  double switch_prob = 0.5;
  std::int64_t lamp_order = 2;
  std::string generators;
  double good_rate = 0.5;
  std::int64_t visits = 0;
  std::int64_t reference_steps = 0;
  int base_dim = 0;
  double tail_weight = 0.0;
  double tail_exponent = 3.0;
  std::int64_t tail_max_jump = 1024;
  unsigned threads = 0;
  bool validate_only = false;
};

struct Command {
  std::string name;
  ldl::ExperimentKind kind;
  CLI::App* app = nullptr;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Parallelism: --threads, else LDL_THREADS, else the core count, capped by LDL_THREADS.
unsigned thread_count(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LDL_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = requested ? std::min<unsigned>(n, static_cast<unsigned>(cap))
                                : static_cast<unsigned>(cap);
  }
  return n;
}

void add_spec_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON spec file; flags override its values");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "PRNG seed");
  app->add_option("--trials", f.trials, "trials per size");
  app->add_option("--sizes,--sides", f.sizes, "size schedule")->delimiter(',');
  app->add_option("--p", f.p, "dilution keep probability");
  app->add_option("--solver", f.solver, "TSP solver")->check(CLI::IsMember({"exact", "strip", "box"}));
  app->add_option("--box-side", f.box_side, "box side C (0: policy)");
  app->add_option("--switch-prob", f.switch_prob, "lamp switch probability s");
  app->add_option("--lamp-order", f.lamp_order, "order of the cyclic lamp group");
  app->add_option("--generators", f.generators, "standard | sws | walk_toggle");
  app->add_option("--good-rate", f.good_rate, "a in mu = a u + (1 - a) mu'");
  app->add_option("--visits", f.visits, "q");
  app->add_option("--reference-steps", f.reference_steps, "steps of the Gaussian reference walk");
  app->add_option("--base-dim", f.base_dim, "1 or 2");
  app->add_option("--tail-weight", f.tail_weight, "mass of the power-law jumps");
  app->add_option("--tail-exponent", f.tail_exponent, "P(k) ~ k^-(1 + exponent)");
  app->add_option("--tail-max-jump", f.tail_max_jump, "largest jump");
  app->add_option("--threads", f.threads, "worker threads (results do not depend on it)");
  app->add_flag("--validate,--dry-run", f.validate_only, "print the normalized spec and exit");
}

ldl::ExperimentSpec build_spec(const CLI::App* app, ldl::ExperimentKind kind, const Flags& f,
                               std::vector<std::string>& warnings) {
  ldl::ExperimentSpec s;
  s.kind = kind;
  const auto given = [&](const char* name) { return app->count(name) > 0; };
  bool seeded = given("--seed");
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ldl::ConfigError("cannot read config file " + f.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ldl::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    s = ldl::spec_from_json(j, s);
    seeded = seeded || j.contains("seed");
    if (s.kind != kind)
      throw ldl::ConfigError("config kind '" + ldl::kind_name(s.kind) + "' does not match the subcommand");
  }
  if (given("--seed")) s.seed = f.seed;
  if (given("--trials")) s.trials = f.trials;
  if (given("--sizes")) s.sizes = f.sizes;
  if (given("--p")) s.p = f.p;
  if (given("--solver")) s.solver = *ldl::parse_solver(f.solver);
  if (given("--box-side")) s.box_side = f.box_side;
  if (given("--switch-prob")) s.switch_prob = f.switch_prob;
  if (given("--lamp-order")) s.lamp_order = f.lamp_order;
  if (given("--generators")) s.generators = f.generators;
  if (given("--good-rate")) s.good_rate = f.good_rate;
  if (given("--visits")) s.visits = f.visits;
  if (given("--reference-steps")) s.reference_steps = f.reference_steps;
  if (given("--base-dim")) s.base_dim = f.base_dim;
  if (given("--tail-weight") || given("--tail-exponent") || given("--tail-max-jump")) {
    ldl::PowerTail t = s.tail.value_or(ldl::PowerTail{});
    if (given("--tail-weight")) t.weight = f.tail_weight;
    if (given("--tail-exponent")) t.exponent = f.tail_exponent;
    if (given("--tail-max-jump")) t.max_jump = f.tail_max_jump;
    s.tail = t;
  }
  if (!seeded) warnings.push_back("no seed given, using 0");
  return s;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ldl::ConfigError("cannot write " + p.string());
  out << text;
}

void write_manifest(const fs::path& dir, const std::string& hash, std::uint64_t seed,
                    unsigned threads, const std::string& started,
                    const std::vector<std::string>& outputs, double seconds) {
  json m;
  m["tool"] = "ldl";
  m["version"] = kVersion;
  m["spec_hash"] = hash;
  m["seed"] = seed;
  m["threads"] = threads;
  m["started"] = started;
  m["finished"] = utc_now();
  m["elapsed_seconds"] = seconds;
  m["outputs"] = outputs;
  m["deterministic"] = true;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

int run_experiment_command(const Command& c, const Flags& f) {
  std::vector<std::string> warnings;
  const auto spec = build_spec(c.app, c.kind, f, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const auto errors = ldl::validate(spec);
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
    throw ldl::ConfigError(msg);
  }
  if (f.validate_only) {
    std::cout << ldl::spec_to_json(ldl::normalized(spec)).dump(2) << "\n";
    return 0;
  }
  const unsigned threads = thread_count(f.threads);
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const auto rec = ldl::run_experiment(spec, {threads});
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path dir(f.out);
  fs::create_directories(dir);
  auto j = ldl::record_to_json(rec);
  j["spec"] = ldl::spec_to_json(ldl::normalized(spec));
  const std::string csv_name = c.name + ".csv", json_name = c.name + ".json";
  write_file(dir / csv_name, ldl::record_csv(rec));
  write_file(dir / json_name, j.dump(2) + "\n");
  write_manifest(dir, rec.spec_hash, rec.seed, threads, started, {csv_name, json_name}, seconds);
  for (const auto& [k, v] : rec.derived) std::cout << k << " = " << ldl::format_double(v) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lamplighter drift and TSP experiments"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags f;

  const std::vector<std::pair<std::string, ldl::ExperimentKind>> kinds = {
      {"alpha", ldl::ExperimentKind::alpha},
      {"alpha-s", ldl::ExperimentKind::alpha_s},
      {"drift", ldl::ExperimentKind::drift},
      {"range", ldl::ExperimentKind::range_lln},
      {"boundary", ldl::ExperimentKind::boundary_lln},
      {"flatto", ldl::ExperimentKind::flatto},
      {"good-update", ldl::ExperimentKind::good_update},
      {"oned-dist", ldl::ExperimentKind::oned_dist},
      {"oned-const", ldl::ExperimentKind::oned_constants},
      {"local-time", ldl::ExperimentKind::local_time},
      {"zwrapz", ldl::ExperimentKind::zwrapz},
  };
  std::vector<Command> commands;
  for (const auto& [name, kind] : kinds) {
    auto* sub = app.add_subcommand(name, "run the " + ldl::kind_name(kind) + " experiment");
    add_spec_flags(sub, f);
    commands.push_back({name, kind, sub});
  }

  std::string tsp_input, tsp_solver = "exact";
  std::int64_t tsp_box = 8;
  auto* tsp = app.add_subcommand("tsp", "solve an open TSP path over a CSV point set");
  tsp->add_option("--input", tsp_input, "points, one \"x,y\" per line")->required();
  tsp->add_option("--solver", tsp_solver, "exact | strip | box")
      ->check(CLI::IsMember({"exact", "strip", "box"}));
  tsp->add_option("--box-side", tsp_box, "box side for the box solver");
  tsp->add_option("--out", f.out, "output directory");

  std::int64_t walk_steps = 1000;
  int walk_dim = 2;
  auto* walk = app.add_subcommand("walk", "dump a simple random walk trajectory");
  walk->add_option("--steps", walk_steps, "number of steps")->check(CLI::NonNegativeNumber);
  walk->add_option("--dim", walk_dim, "1 or 2")->check(CLI::IsMember({1, 2}));
  walk->add_option("--seed", f.seed, "PRNG seed");
  walk->add_option("--out", f.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return 2;
  }

  try {
    for (const auto& c : commands)
      if (c.app->parsed()) return run_experiment_command(c, f);

    if (tsp->parsed()) {
      std::ifstream in(tsp_input);
      if (!in) throw ldl::ConfigError("cannot read " + tsp_input);
      const auto pts = ldl::read_points_csv(in);
      ldl::TspResult r;
      if (tsp_solver == "exact") {
        r = ldl::exact_tsp(pts);
      } else if (tsp_solver == "strip") {
        r = ldl::strip_heuristic(pts);
      } else {
        const ldl::PointSet v(pts);
        r = ldl::box_tsp_diluted(v, v, tsp_box).result;
      }
      const fs::path dir(f.out);
      fs::create_directories(dir);
      std::ostringstream os;
      ldl::write_points_csv(os, r.order);
      write_file(dir / "tsp.csv", os.str());
      std::cout << "length = " << r.length << "\n";
      return 0;
    }

    if (walk->parsed()) {
      const auto t = ldl::sample_walk(ldl::StepDistribution::simple(walk_dim), walk_steps, f.seed);
      const fs::path dir(f.out);
      fs::create_directories(dir);
      std::ostringstream os;
      os << "t,x,y\n";
      for (std::size_t i = 0; i < t.positions.size(); ++i)
        os << i << ',' << t.positions[i].x << ',' << t.positions[i].y << '\n';
      write_file(dir / "walk.csv", os.str());
      return 0;
    }
  } catch (const ldl::ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return 2;
  } catch (const ldl::DomainError& e) {
    std::cerr << "error[domain]: " << e.what() << "\n";
    return 2;
  } catch (const ldl::ResourceError& e) {
    std::cerr << "error[resource]: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
