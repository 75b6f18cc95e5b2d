#include "ldl/record.hpp"

#include <cstdio>
#include <cstring>
#include <sstream>

#include "ldl/errors.hpp"

namespace ldl {

using nlohmann::json;

json spec_to_json(const ExperimentSpec& s) {
  json j;
  j["kind"] = kind_name(s.kind);
  j["sizes"] = s.sizes;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["p"] = s.p;
  j["solver"] = solver_name(s.solver);
  j["box_side"] = s.box_side;
  j["switch_prob"] = s.switch_prob;
  if (s.tail)
    j["tail"] = {{"weight", s.tail->weight},
                 {"exponent", s.tail->exponent},
                 {"max_jump", s.tail->max_jump}};
  else
    j["tail"] = nullptr;
  j["lamp_order"] = s.lamp_order;
  j["generators"] = s.generators;
  j["good_rate"] = s.good_rate;
  j["visits"] = s.visits;
  j["reference_steps"] = s.reference_steps;
  j["base_dim"] = s.base_dim;
  return j;
}

namespace {

template <class T>
void read(const json& j, const char* key, T& out, std::vector<std::string>& errors) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    errors.push_back(std::string("bad value for '") + key + "'");
  }
}

}  // namespace

ExperimentSpec spec_from_json(const json& j, ExperimentSpec s) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const char* known[] = {"kind",     "sizes",      "trials",      "seed",
                                "p",        "solver",     "box_side",    "switch_prob",
                                "tail",     "lamp_order", "generators",  "good_rate",
                                "visits",   "reference_steps", "base_dim"};
  std::vector<std::string> errors;
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) errors.push_back("unknown key '" + k + "'");
  }
  if (j.contains("kind")) {
    const auto k = j["kind"].is_string() ? parse_kind(j["kind"].get<std::string>()) : std::nullopt;
    if (k)
      s.kind = *k;
    else
      errors.push_back("bad value for 'kind'");
  }
  if (j.contains("solver")) {
    const auto v =
        j["solver"].is_string() ? parse_solver(j["solver"].get<std::string>()) : std::nullopt;
    if (v)
      s.solver = *v;
    else
      errors.push_back("bad value for 'solver'");
  }
  read(j, "sizes", s.sizes, errors);
  read(j, "trials", s.trials, errors);
  read(j, "seed", s.seed, errors);
  read(j, "p", s.p, errors);
  read(j, "box_side", s.box_side, errors);
  read(j, "switch_prob", s.switch_prob, errors);
  read(j, "lamp_order", s.lamp_order, errors);
  read(j, "generators", s.generators, errors);
  read(j, "good_rate", s.good_rate, errors);
  read(j, "visits", s.visits, errors);
  read(j, "reference_steps", s.reference_steps, errors);
  read(j, "base_dim", s.base_dim, errors);
  if (j.contains("tail")) {
    const auto& t = j["tail"];
    if (t.is_null()) {
      s.tail.reset();
    } else if (!t.is_object()) {
      errors.push_back("bad value for 'tail'");
    } else {
      PowerTail pt = s.tail.value_or(PowerTail{});
      for (const auto& [k, _] : t.items())
        if (k != "weight" && k != "exponent" && k != "max_jump")
          errors.push_back("unknown key 'tail." + k + "'");
      read(t, "weight", pt.weight, errors);
      read(t, "exponent", pt.exponent, errors);
      read(t, "max_jump", pt.max_jump, errors);
      s.tail = pt;
    }
  }
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "; ") + e;
    throw ConfigError(msg);
  }
  return s;
}

std::string canonical_json(const ExperimentSpec& spec) {
  return spec_to_json(normalized(spec)).dump();
}

std::string spec_hash(const ExperimentSpec& spec) {
  const auto text = canonical_json(spec);
  std::uint64_t h = mix64(text.size());
  for (std::size_t i = 0; i < text.size(); i += 8) {
    std::uint64_t chunk = 0;
    std::memcpy(&chunk, text.data() + i, std::min<std::size_t>(8, text.size() - i));
    h = hash_combine(h, chunk);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json record_to_json(const RunRecord& rec) {
  json j;
  j["kind"] = kind_name(rec.kind);
  j["spec_hash"] = rec.spec_hash;
  j["seed"] = rec.seed;
  j["rows"] = json::array();
  for (const auto& r : rec.rows)
    j["rows"].push_back({{"n", r.n},
                         {"trials", r.trials},
                         {"mean", r.mean},
                         {"std_err", r.std_err},
                         {"statistic", r.statistic},
                         {"lo99", r.lo99},
                         {"hi99", r.hi99}});
  j["derived"] = rec.derived;
  j["series"] = rec.series;
  return j;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_header() { return "kind,n,trials,mean,std_err,statistic,lo99,hi99,seed"; }

std::string record_csv(const RunRecord& rec) {
  std::ostringstream out;
  out << csv_header() << '\n';
  for (const auto& r : rec.rows)
    out << kind_name(rec.kind) << ',' << r.n << ',' << r.trials << ',' << format_double(r.mean)
        << ',' << format_double(r.std_err) << ',' << format_double(r.statistic) << ','
        << format_double(r.lo99) << ',' << format_double(r.hi99) << ',' << rec.seed << '\n';
  return out.str();
}

}  // namespace ldl
