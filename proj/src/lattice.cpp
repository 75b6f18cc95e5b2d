#include "ldl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "ldl/errors.hpp"

namespace ldl {

PointSet::PointSet(const std::vector<Point>& pts) {
  members_.reserve(pts.size());
  for (const auto& p : pts) members_.insert(p);
}

std::vector<Point> PointSet::sorted() const {
  std::vector<Point> out(members_.begin(), members_.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

PointHashSet boundary_of(const PointHashSet& members) {
  PointHashSet out;
  for (const auto& p : members) {
    for (const auto& q : neighbors4(p)) {
      if (members.count(q) == 0) {
        out.insert(p);
        break;
      }
    }
  }
  return out;
}

}  // namespace

void PointSet::cache_boundary() { boundary_ = boundary_of(members_); }

PointSet inner_boundary(const PointSet& v) {
  if (v.boundary_cache()) return PointSet(*v.boundary_cache());
  return PointSet(boundary_of(v.members()));
}

std::size_t inner_boundary_size(const PointSet& v) {
  if (v.boundary_cache()) return v.boundary_cache()->size();
  std::size_t n = 0;
  const auto& m = v.members();
  for (const auto& p : m) {
    for (const auto& q : neighbors4(p)) {
      if (m.count(q) == 0) {
        ++n;
        break;
      }
    }
  }
  return n;
}

bool is_connected(const PointSet& v) {
  if (v.size() <= 1) return true;
  const auto& m = v.members();
  PointHashSet seen;
  std::vector<Point> stack{*m.begin()};
  seen.insert(stack.back());
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    for (const auto& q : neighbors4(p)) {
      if (m.count(q) && seen.insert(q).second) stack.push_back(q);
    }
  }
  return seen.size() == m.size();
}

// ---------------------------------------------------------------------------
// Step distributions

namespace {

std::int64_t cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

}  // namespace

bool generates_lattice_semigroup(int dimension, const std::vector<Point>& support) {
  std::vector<Point> nz;
  for (const auto& p : support) {
    if (p.x != 0 || p.y != 0) nz.push_back(p);
  }
  if (nz.empty()) return false;
  if (dimension == 1) {
    std::int64_t g = 0;
    bool pos = false, neg = false;
    for (const auto& p : nz) {
      if (p.y != 0) return false;
      g = std::gcd(g, abs64(p.x));
      pos |= p.x > 0;
      neg |= p.x < 0;
    }
    return g == 1 && pos && neg;
  }
  // The group generated is Z^2 iff the 2x2 minors have gcd 1.
  std::int64_t g = 0;
  for (std::size_t i = 0; i < nz.size(); ++i) {
    for (std::size_t j = i + 1; j < nz.size(); ++j) g = std::gcd(g, abs64(cross(nz[i], nz[j])));
  }
  if (g != 1) return false;
  // The semigroup equals the group iff no closed half-plane holds the support;
  // such a half-plane can always be rotated until its edge passes through a
  // support vector.
  for (const auto& v : nz) {
    bool left = false, right = false;
    for (const auto& w : nz) {
      const auto c = cross(v, w);
      left |= c > 0;
      right |= c < 0;
    }
    if (!left || !right) return false;
  }
  return true;
}

StepDistribution::StepDistribution(int dimension, std::vector<Atom> atoms,
                                   MomentClass moment, std::optional<PowerTail> tail,
                                   bool declared_centered)
    : dimension_(dimension), atoms_(std::move(atoms)), moment_(moment), tail_(tail) {
  if (dimension_ != 1 && dimension_ != 2) {
    throw ConfigError("step distribution: dimension must be 1 or 2");
  }
  if (atoms_.empty()) throw ConfigError("step distribution: no atoms");
  double total = 0.0;
  double mx = 0.0, my = 0.0;
  std::vector<Point> support;
  for (const auto& a : atoms_) {
    if (!(a.probability > 0.0)) {
      throw ConfigError("step distribution: probabilities must be positive");
    }
    if (dimension_ == 1 && a.displacement.y != 0) {
      throw ConfigError("step distribution: one-dimensional atom with y != 0");
    }
    total += a.probability;
    mx += a.probability * static_cast<double>(a.displacement.x);
    my += a.probability * static_cast<double>(a.displacement.y);
    support.push_back(a.displacement);
  }
  double tail_weight = 0.0;
  if (tail_) {
    if (!(tail_->weight > 0.0 && tail_->weight < 1.0) || tail_->max_jump < 1 ||
        !(tail_->exponent > 0.0)) {
      throw ConfigError("step distribution: invalid power tail");
    }
    tail_weight = tail_->weight;
    support.push_back({1, 0});
    support.push_back({-1, 0});
    if (dimension_ == 2) {
      support.push_back({0, 1});
      support.push_back({0, -1});
    }
    if (moment_ == MomentClass::finite_support) {
      throw ConfigError("step distribution: power tail declared as finite support");
    }
  }
  if (std::abs(total + tail_weight - 1.0) > 1e-12) {
    throw ConfigError("step distribution: probabilities sum to " +
                      std::to_string(total + tail_weight));
  }
  if (!generates_lattice_semigroup(dimension_, support)) {
    throw ConfigError(
        "step distribution: degenerate, support does not generate the base lattice "
        "as a semigroup");
  }
  if (declared_centered && (std::abs(mx) > 1e-12 || std::abs(my) > 1e-12)) {
    throw ConfigError("step distribution: declared centered but mean is non-zero");
  }

  build_tables();
}

void StepDistribution::build_tables() {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.probability;
  // Vose alias table over the atoms, normalised to the non-tail mass.
  const std::size_t n = atoms_.size();
  alias_prob_.assign(n, 0.0);
  alias_index_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = atoms_[i].probability / total * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    alias_prob_[s] = scaled[s];
    alias_index_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) alias_prob_[i] = 1.0, alias_index_[i] = i;
  for (auto i : small) alias_prob_[i] = 1.0, alias_index_[i] = i;

  if (tail_) {
    tail_cdf_.resize(static_cast<std::size_t>(tail_->max_jump));
    double acc = 0.0;
    for (std::int64_t k = 1; k <= tail_->max_jump; ++k) {
      acc += std::pow(static_cast<double>(k), -(1.0 + tail_->exponent));
      tail_cdf_[static_cast<std::size_t>(k - 1)] = acc;
    }
    for (auto& c : tail_cdf_) c /= acc;
  }
}

StepDistribution StepDistribution::point_mass(int dimension, Point v) {
  if (dimension != 1 && dimension != 2) {
    throw ConfigError("step distribution: dimension must be 1 or 2");
  }
  if (dimension == 1 && v.y != 0) {
    throw ConfigError("step distribution: one-dimensional atom with y != 0");
  }
  StepDistribution d;
  d.dimension_ = dimension;
  d.atoms_ = {{v, 1.0}};
  d.build_tables();
  return d;
}

StepDistribution StepDistribution::simple(int dimension) {
  if (dimension == 1) return StepDistribution(1, {{{1, 0}, 0.5}, {{-1, 0}, 0.5}});
  return StepDistribution(
      2, {{{1, 0}, 0.25}, {{-1, 0}, 0.25}, {{0, 1}, 0.25}, {{0, -1}, 0.25}});
}

double StepDistribution::tail_second_moment(double r) const {
  double s = 0.0;
  for (const auto& a : atoms_) {
    const double len = static_cast<double>(l1_norm(a.displacement));
    if (len >= r) s += len * len * a.probability;
  }
  if (tail_) {
    double prev = 0.0;
    for (std::size_t i = 0; i < tail_cdf_.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      if (k >= r) s += tail_->weight * k * k * (tail_cdf_[i] - prev);
      prev = tail_cdf_[i];
    }
  }
  return s;
}

double StepDistribution::sigma_x() const {
  double m2 = 0.0;
  for (const auto& a : atoms_) {
    const double x = static_cast<double>(a.displacement.x);
    m2 += x * x * a.probability;
  }
  if (tail_) {
    // Jumps along x carry half the tail mass in two dimensions.
    const double axis_share = dimension_ == 1 ? 1.0 : 0.5;
    double prev = 0.0;
    for (std::size_t i = 0; i < tail_cdf_.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      m2 += tail_->weight * axis_share * k * k * (tail_cdf_[i] - prev);
      prev = tail_cdf_[i];
    }
  }
  return std::sqrt(m2);
}

Point StepDistribution::sample(Rng& rng) const {
  if (tail_ && rng.uniform() < tail_->weight) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(tail_cdf_.begin(), tail_cdf_.end(), u);
    const std::int64_t k =
        std::min<std::int64_t>(static_cast<std::int64_t>(it - tail_cdf_.begin()) + 1,
                               tail_->max_jump);
    const auto dir = rng.below(dimension_ == 1 ? 2 : 4);
    switch (dir) {
      case 0: return {k, 0};
      case 1: return {-k, 0};
      case 2: return {0, k};
      default: return {0, -k};
    }
  }
  const std::uint64_t u = rng.next();
  const auto n = static_cast<std::uint64_t>(atoms_.size());
  const auto col = static_cast<std::size_t>(((u >> 32) * n) >> 32);
  const double frac = static_cast<double>(u & 0xffffffffULL) * 0x1.0p-32;
  const std::size_t idx = frac < alias_prob_[col] ? col : alias_index_[col];
  return atoms_[idx].displacement;
}

// ---------------------------------------------------------------------------
// Walks and local times

Trajectory sample_walk(const StepDistribution& dist, std::int64_t n,
                       std::uint64_t seed, Point start) {
  if (n < 0) throw DomainError("sample_walk: negative step count");
  Trajectory t;
  t.start = start;
  t.seed = seed;
  t.steps.reserve(static_cast<std::size_t>(n));
  t.positions.reserve(static_cast<std::size_t>(n) + 1);
  t.positions.push_back(start);
  Rng rng(seed);
  Point cur = start;
  for (std::int64_t i = 0; i < n; ++i) {
    const Point s = dist.sample(rng);
    cur = cur + s;
    t.steps.push_back(s);
    t.positions.push_back(cur);
  }
  return t;
}

PointSet walk_range(const Trajectory& t) {
  PointHashSet m;
  m.reserve(t.positions.size());
  for (const auto& p : t.positions) m.insert(p);
  return PointSet(std::move(m));
}

std::int64_t VisitCounts::at(const Point& p) const {
  const auto it = counts_.find(p);
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t VisitCounts::total() const {
  std::int64_t s = 0;
  for (const auto& [p, c] : counts_) s += c;
  return s;
}

VisitCounts visit_counts(const Trajectory& t) {
  VisitCounts::Map m;
  m.reserve(t.positions.size());
  for (const auto& p : t.positions) ++m[p];
  return VisitCounts(std::move(m));
}

std::int64_t thin_points(const VisitCounts& c, std::int64_t q) {
  if (q < 1) throw DomainError("thin_points: q must be >= 1");
  std::int64_t n = 0;
  for (const auto& [p, k] : c.map()) n += (k >= 1 && k <= q) ? 1 : 0;
  return n;
}

double local_time_power_sum(const VisitCounts& c, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("local_time_power_sum: alpha must be > 0");
  // Sum in a fixed order so the result does not depend on hash layout.
  std::vector<std::int64_t> ks;
  ks.reserve(c.map().size());
  for (const auto& [p, k] : c.map()) ks.push_back(k);
  std::sort(ks.begin(), ks.end());
  double s = 0.0;
  for (auto k : ks) s += std::pow(static_cast<double>(k), alpha);
  return s;
}

bool dilution_keeps(const Point& p, double keep_probability, std::uint64_t seed) {
  const std::uint64_t h = hash_combine(hash_combine(mix64(seed + kGoldenGamma),
                                                    static_cast<std::uint64_t>(p.x)),
                                       static_cast<std::uint64_t>(p.y));
  return to_unit(h) < keep_probability;
}

PointSet dilute(const PointSet& v, double keep_probability, std::uint64_t seed) {
  if (!(keep_probability >= 0.0 && keep_probability <= 1.0)) {
    throw DomainError("dilute: probability outside [0, 1]");
  }
  PointHashSet kept;
  for (const auto& p : v.members()) {
    if (dilution_keeps(p, keep_probability, seed)) kept.insert(p);
  }
  return PointSet(std::move(kept));
}

}  // namespace ldl
