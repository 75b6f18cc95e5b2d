#include "ldl/wreath.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "ldl/errors.hpp"
#include "ldl/tsp.hpp"

namespace ldl {

// ---------------------------------------------------------------- LampGroup

LampGroup LampGroup::cyclic(std::int64_t order) {
  if (order < 2) throw ConfigError("cyclic lamp group needs order >= 2");
  std::vector<std::vector<std::int64_t>> t(order, std::vector<std::int64_t>(order));
  for (std::int64_t a = 0; a < order; ++a)
    for (std::int64_t b = 0; b < order; ++b) t[a][b] = (a + b) % order;
  return from_table(t);
}

LampGroup LampGroup::integers() { return LampGroup{}; }

LampGroup LampGroup::from_table(const std::vector<std::vector<std::int64_t>>& table) {
  const auto m = static_cast<std::int64_t>(table.size());
  if (m < 1) throw ConfigError("empty lamp group table");
  for (const auto& row : table)
    if (static_cast<std::int64_t>(row.size()) != m)
      throw ConfigError("lamp group table is not square");
  LampGroup g;
  g.order_ = m;
  g.table_.resize(m * m);
  for (std::int64_t a = 0; a < m; ++a) {
    std::vector<bool> seen(m, false);
    for (std::int64_t b = 0; b < m; ++b) {
      const auto v = table[a][b];
      if (v < 0 || v >= m) throw ConfigError("lamp group table entry out of range");
      if (seen[v]) throw ConfigError("lamp group table row is not a permutation");
      seen[v] = true;
      g.table_[a * m + b] = v;
    }
  }
  for (std::int64_t a = 0; a < m; ++a)
    if (g.table_[a] != a || g.table_[a * m] != a)
      throw ConfigError("element 0 is not the identity of the lamp group table");
  for (std::int64_t a = 0; a < m; ++a)
    for (std::int64_t b = 0; b < m; ++b)
      for (std::int64_t c = 0; c < m; ++c)
        if (g.table_[g.table_[a * m + b] * m + c] != g.table_[a * m + g.table_[b * m + c]])
          throw ConfigError("lamp group table is not associative");
  g.inverse_.assign(m, -1);
  for (std::int64_t a = 0; a < m; ++a)
    for (std::int64_t b = 0; b < m; ++b)
      if (g.table_[a * m + b] == 0) g.inverse_[a] = b;
  return g;
}

LampGroup LampGroup::parse_table(std::istream& in) {
  std::int64_t m = 0;
  if (!(in >> m) || m < 1 || m > 4096) throw ConfigError("bad lamp group order");
  std::vector<std::vector<std::int64_t>> t(m, std::vector<std::int64_t>(m));
  for (auto& row : t)
    for (auto& v : row)
      if (!(in >> v)) throw ConfigError("truncated lamp group table");
  return from_table(t);
}

std::int64_t LampGroup::op(std::int64_t a, std::int64_t b) const {
  if (order_ == 0) return a + b;
  return table_[a * order_ + b];
}

std::int64_t LampGroup::inverse(std::int64_t a) const {
  if (order_ == 0) return -a;
  return inverse_[a];
}

bool LampGroup::is_involutive() const {
  if (order_ == 0) return false;
  for (std::int64_t a = 0; a < order_; ++a)
    if (op(a, a) != 0) return false;
  return true;
}

std::vector<std::int64_t> LampGroup::elements() const {
  std::vector<std::int64_t> out(order_);
  for (std::int64_t a = 0; a < order_; ++a) out[a] = a;
  return out;
}

// --------------------------------------------------------------- LampConfig

namespace {

bool entry_less(const LampConfig::Entry& e, const Point& p) { return e.first < p; }

}  // namespace

std::int64_t LampConfig::get(const Point& p) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), p, entry_less);
  return (it != entries_.end() && it->first == p) ? it->second : 0;
}

void LampConfig::set(const Point& p, std::int64_t value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), p, entry_less);
  const bool present = it != entries_.end() && it->first == p;
  if (value == 0) {
    if (present) entries_.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    entries_.insert(it, {p, value});
  }
}

std::vector<Point> LampConfig::support() const {
  std::vector<Point> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

LampConfig LampConfig::translated(const Point& v) const {
  LampConfig out;
  out.entries_ = entries_;
  for (auto& e : out.entries_) e.first = e.first + v;
  return out;
}

std::size_t WreathElementHash::operator()(const WreathElement& g) const {
  std::uint64_t h = hash_combine(mix64(static_cast<std::uint64_t>(g.position.x)),
                                 static_cast<std::uint64_t>(g.position.y));
  for (const auto& [p, v] : g.lamps.entries()) {
    h = hash_combine(h, static_cast<std::uint64_t>(p.x));
    h = hash_combine(h, static_cast<std::uint64_t>(p.y));
    h = hash_combine(h, static_cast<std::uint64_t>(v));
  }
  return static_cast<std::size_t>(h);
}

// -------------------------------------------------------------- WreathGroup

WreathGroup::WreathGroup(int base_dim, LampGroup lamps)
    : base_dim_(base_dim), lamps_(std::move(lamps)) {
  if (base_dim != 1 && base_dim != 2) throw ConfigError("base dimension must be 1 or 2");
}

void WreathGroup::check(const WreathElement& g) const {
  if (base_dim_ == 1 && g.position.y != 0)
    throw GroupMismatch("element has a second coordinate over base Z");
  for (const auto& [p, v] : g.lamps.entries()) {
    if (base_dim_ == 1 && p.y != 0)
      throw GroupMismatch("lamp off the line over base Z");
    if (!lamps_.contains(v)) throw GroupMismatch("lamp value outside the lamp group");
  }
}

WreathElement WreathGroup::multiply(const WreathElement& g, const WreathElement& h) const {
  check(g);
  check(h);
  WreathElement out = g;
  right_multiply(out, h);
  return out;
}

void WreathGroup::right_multiply(WreathElement& g, const WreathElement& s) const {
  for (const auto& [p, v] : s.lamps.entries()) {
    const Point site = g.position + p;
    g.lamps.set(site, lamps_.op(g.lamps.get(site), v));
  }
  g.position = g.position + s.position;
}

WreathElement WreathGroup::invert(const WreathElement& g) const {
  check(g);
  // (x, f)^-1 = (-x, y -> f(y + x)^-1)
  WreathElement out;
  out.position = -g.position;
  for (const auto& [p, v] : g.lamps.entries()) out.lamps.set(p - g.position, lamps_.inverse(v));
  return out;
}

LampConfig WreathGroup::difference(const LampConfig& end, const LampConfig& start) const {
  LampConfig out = end;
  for (const auto& [p, v] : start.entries())
    out.set(p, lamps_.op(end.get(p), lamps_.inverse(v)));
  return out;
}

LampConfig WreathGroup::sum(const LampConfig& a, const LampConfig& b) const {
  LampConfig out = a;
  for (const auto& [p, v] : b.entries()) out.set(p, lamps_.op(a.get(p), v));
  return out;
}

WreathElement WreathGroup::lamp_at(const Point& p, std::int64_t v) const {
  WreathElement e;
  e.lamps.set(p, v);
  check(e);
  return e;
}

// ----------------------------------------------------------- GeneratingSet

GeneratingSet GeneratingSet::standard(const WreathGroup& g) {
  GeneratingSet s;
  s.generators.push_back({Point{1, 0}, {}});
  s.labels.push_back("s1");
  if (g.base_dim() == 2) {
    s.generators.push_back({Point{0, 1}, {}});
    s.labels.push_back("s2");
  }
  s.generators.push_back(g.lamp_at({0, 0}, 1));
  s.labels.push_back("delta");
  return s;
}

GeneratingSet GeneratingSet::sws_1d(const WreathGroup& g) {
  if (g.base_dim() != 1 || !g.lamps().is_finite())
    throw ConfigError("switch-walk-switch set needs base Z and a finite lamp group");
  GeneratingSet s;
  for (auto a : g.lamps().elements()) {
    for (auto b : g.lamps().elements()) {
      WreathElement e;
      e.position = {1, 0};
      e.lamps.set({0, 0}, a);
      e.lamps.set({1, 0}, b);
      s.generators.push_back(std::move(e));
      s.labels.push_back("t" + std::to_string(a) + "_" + std::to_string(b));
    }
  }
  return s;
}

std::int64_t GeneratingSet::reach() const {
  std::int64_t r = 0;
  for (const auto& g : generators) {
    r = std::max(r, l1_norm(g.position));
    for (const auto& [p, v] : g.lamps.entries()) r = std::max(r, l1_norm(p));
  }
  return r;
}

std::vector<std::pair<Move, WreathElement>> move_table(const WreathGroup& g,
                                                       const GeneratingSet& s) {
  std::vector<std::pair<Move, WreathElement>> out;
  for (std::size_t i = 0; i < s.generators.size(); ++i)
    out.push_back({Move{i, false}, s.generators[i]});
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    auto inv = g.invert(s.generators[i]);
    bool dup = false;
    for (const auto& [m, e] : out) dup = dup || e == inv;
    if (!dup) out.push_back({Move{i, true}, std::move(inv)});
  }
  return out;
}

// -------------------------------------------------------------------- paths

WreathElement move_element(const WreathGroup& g, const GeneratingSet& s, const Move& m) {
  if (m.index >= s.generators.size()) throw DomainError("generator index out of range");
  return m.inverse ? g.invert(s.generators[m.index]) : s.generators[m.index];
}

WreathElement path_end(const WreathGroup& g, const GeneratingSet& s, const SPath& p) {
  WreathElement x = p.start;
  for (const auto& m : p.moves) g.right_multiply(x, move_element(g, s, m));
  return x;
}

LampConfig path_tau(const WreathGroup& g, const GeneratingSet& s, const SPath& p) {
  return g.difference(path_end(g, s, p).lamps, p.start.lamps);
}

std::vector<Point> path_projection(const WreathGroup& g, const GeneratingSet& s,
                                   const SPath& p) {
  std::vector<Point> out{p.start.position};
  for (const auto& m : p.moves) out.push_back(out.back() + move_element(g, s, m).position);
  return out;
}

SPath reverse_path(const WreathGroup& g, const GeneratingSet& s, const SPath& p) {
  if (!g.lamps().is_involutive())
    throw UnsupportedOperation("path reversal needs every lamp value to be an involution");
  SPath out;
  out.start = path_end(g, s, p);
  out.moves.reserve(p.moves.size());
  for (auto it = p.moves.rbegin(); it != p.moves.rend(); ++it)
    out.moves.push_back(Move{it->index, !it->inverse});
  return out;
}

// ---------------------------------------------------------------------- BFS

namespace {

struct Search {
  std::vector<WreathElement> nodes;
  std::vector<std::int64_t> parent;
  std::vector<std::int32_t> via;  // index into the move table
  std::vector<std::int64_t> depth;
  std::int64_t found = -1;
};

// Level-synchronous BFS from the identity up to `radius`; stops early when
// `target` is reached.
Search bfs(const WreathGroup& g, std::int64_t radius,
           const WreathElement* target, std::size_t budget,
           const std::vector<std::pair<Move, WreathElement>>& moves) {
  if (radius < 0) throw DomainError("radius_cap must be >= 0");
  Search r;
  std::unordered_map<WreathElement, std::int64_t, WreathElementHash> index;
  r.nodes.push_back(g.identity());
  r.parent.push_back(-1);
  r.via.push_back(-1);
  r.depth.push_back(0);
  index.emplace(g.identity(), 0);
  if (target && *target == g.identity()) {
    r.found = 0;
    return r;
  }
  std::size_t level_begin = 0;
  for (std::int64_t d = 0; d < radius; ++d) {
    const std::size_t level_end = r.nodes.size();
    if (level_begin == level_end) break;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (std::size_t k = 0; k < moves.size(); ++k) {
        WreathElement next = r.nodes[i];
        g.right_multiply(next, moves[k].second);
        if (index.count(next)) continue;
        if (r.nodes.size() >= budget)
          throw ResourceError("word-length search exceeded its state budget");
        const auto id = static_cast<std::int64_t>(r.nodes.size());
        index.emplace(next, id);
        r.parent.push_back(static_cast<std::int64_t>(i));
        r.via.push_back(static_cast<std::int32_t>(k));
        r.depth.push_back(d + 1);
        const bool hit = target && next == *target;
        r.nodes.push_back(std::move(next));
        if (hit) {
          r.found = id;
          return r;
        }
      }
    }
    level_begin = level_end;
  }
  return r;
}

}  // namespace

std::optional<std::int64_t> word_length_bfs(const WreathGroup& g, const WreathElement& target,
                                             const GeneratingSet& s, std::int64_t radius_cap,
                                             std::size_t state_budget) {
  g.check(target);
  const auto moves = move_table(g, s);
  auto r = bfs(g, radius_cap, &target, state_budget, moves);
  if (r.found < 0) return std::nullopt;
  return r.depth[r.found];
}

std::optional<std::vector<Move>> shortest_word(const WreathGroup& g,
                                               const WreathElement& target,
                                               const GeneratingSet& s, std::int64_t radius_cap,
                                               std::size_t state_budget) {
  g.check(target);
  const auto moves = move_table(g, s);
  auto r = bfs(g, radius_cap, &target, state_budget, moves);
  if (r.found < 0) return std::nullopt;
  std::vector<Move> word;
  for (auto v = r.found; r.parent[v] >= 0; v = r.parent[v]) word.push_back(moves[r.via[v]].first);
  std::reverse(word.begin(), word.end());
  return word;
}

std::unordered_map<WreathElement, std::int64_t, WreathElementHash> cayley_ball(
    const WreathGroup& g, const GeneratingSet& s, std::int64_t radius, std::size_t state_budget) {
  const auto moves = move_table(g, s);
  auto r = bfs(g, radius, nullptr, state_budget, moves);
  std::unordered_map<WreathElement, std::int64_t, WreathElementHash> out;
  out.reserve(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) out.emplace(std::move(r.nodes[i]), r.depth[i]);
  return out;
}

// ------------------------------------------------------------------ metrics

WordLengthBounds word_length_bounds(const WreathGroup& g, const WreathElement& x) {
  if (g.base_dim() != 2 || g.lamps().order() != 2)
    throw DomainError("word_length_bounds is for the lamplighter over Z^2");
  g.check(x);
  WordLengthBounds b;
  const auto supp = x.lamps.support();
  std::int64_t tsp = 0;
  if (!supp.empty()) {
    if (supp.size() <= kExactTspCap) {
      tsp = exact_tsp(supp).length;
    } else {
      tsp = strip_heuristic(supp).length;
      b.exact_tsp = false;
    }
  }
  // L1 diameter of supp u {0} via the rotated coordinates x + y and x - y.
  std::int64_t smin = 0, smax = 0, dmin = 0, dmax = 0;
  for (const auto& p : supp) {
    smin = std::min(smin, p.x + p.y);
    smax = std::max(smax, p.x + p.y);
    dmin = std::min(dmin, p.x - p.y);
    dmax = std::max(dmax, p.x - p.y);
  }
  b.diameter = std::max(smax - smin, dmax - dmin);
  b.lower = tsp + static_cast<std::int64_t>(supp.size());
  b.upper = b.lower + l1_norm(x.position) + 2 * b.diameter;
  return b;
}

bool is_complete(const WreathGroup& g, const GeneratingSet& s) {
  if (!g.lamps().is_finite()) throw DomainError("completeness is defined for finite lamp groups");
  std::vector<WreathElement> all;
  for (const auto& [m, e] : move_table(g, s)) all.push_back(e);
  for (const auto& e : all) {
    WreathElement want{-e.position, e.lamps.translated(-e.position)};
    if (std::find(all.begin(), all.end(), want) == all.end()) return false;
  }
  return true;
}

OnedWordLength oned_word_length(const WreathGroup& g, const WreathElement& x,
                                std::int64_t radius_cap) {
  if (g.base_dim() != 1) throw DomainError("oned_word_length needs base Z");
  g.check(x);
  if (x.lamps.empty()) throw DomainError("oned_word_length needs a non-empty support");
  const auto lo = x.lamps.entries().front().first.x;
  const auto hi = x.lamps.entries().back().first.x;
  if (x.position.x < lo || x.position.x > hi)
    throw DomainError("position outside [min supp, max supp]");
  const auto s = GeneratingSet::sws_1d(g);
  auto len = word_length_bfs(g, x, s, radius_cap);
  if (!len) throw ResourceError("oned_word_length exceeded radius_cap");
  OnedWordLength out;
  out.bfs = *len;
  out.closed_form = 2 * hi - 2 * lo - std::abs(x.position.x);
  return out;
}

// --------------------------------------------------- WreathStepDistribution

WreathStepDistribution::WreathStepDistribution(const WreathGroup& g, std::vector<Atom> atoms)
    : group_(g), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ConfigError("empty wreath step distribution");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.probability > 0.0)) throw ConfigError("atom probabilities must be positive");
    g.check(a.element);
    total += a.probability;
    cdf_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("atom probabilities must sum to 1");
}

WreathStepDistribution WreathStepDistribution::switch_walk_switch(const WreathGroup& g,
                                                                  const StepDistribution& base,
                                                                  double switch_prob) {
  if (base.tail()) throw ConfigError("switch-walk-switch needs a finitely supported base law");
  if (base.dimension() != g.base_dim()) throw GroupMismatch("base dimension mismatch");
  if (!(switch_prob > 0.0) || switch_prob > 1.0)
    throw ConfigError("switch probability must lie in (0, 1]: the lamps must be switched");
  const double eta[2] = {1.0 - switch_prob, switch_prob};
  std::map<std::pair<Point, std::pair<std::int64_t, std::int64_t>>, double> mass;
  for (const auto& atom : base.atoms())
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double w = eta[a] * atom.probability * eta[b];
        if (w > 0.0) mass[{atom.displacement, {a, b}}] += w;
      }
  std::vector<Atom> atoms;
  for (const auto& [key, w] : mass) {
    const auto& [v, ab] = key;
    WreathElement e;
    e.position = v;
    // delta^a (v, 0) delta^b = (v, a at 0 plus b at v)
    LampConfig first, second;
    first.set({0, 0}, ab.first);
    second.set(v, ab.second);
    e.lamps = g.sum(first, second);
    bool found = false;
    for (auto& at : atoms)
      if (at.element == e) {
        at.probability += w;
        found = true;
      }
    if (!found) atoms.push_back({std::move(e), w});
  }
  return WreathStepDistribution(g, std::move(atoms));
}

double WreathStepDistribution::mass(const WreathElement& e) const {
  double m = 0.0;
  for (const auto& a : atoms_)
    if (a.element == e) m += a.probability;
  return m;
}

WreathStepDistribution::Decomposition WreathStepDistribution::decompose() const {
  const WreathElement id = group_.identity();
  const WreathElement delta = group_.lamp_at({0, 0}, 1);
  Decomposition d;
  d.a = std::min(mass(id), mass(delta));
  for (const auto& at : atoms_) {
    double w = at.probability;
    if (at.element == id || at.element == delta) w -= d.a / 2.0;
    if (d.a < 1.0) w /= (1.0 - d.a);
    if (w > 1e-15) d.residual.push_back({at.element, w});
  }
  return d;
}

WreathElement WreathStepDistribution::sample(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return atoms_[static_cast<std::size_t>(it - cdf_.begin())].element;
}

}  // namespace ldl
