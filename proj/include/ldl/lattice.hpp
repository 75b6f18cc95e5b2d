#ifndef LDL_LATTICE_HPP_
#define LDL_LATTICE_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ldl/rng.hpp"

namespace ldl {

// A site of Z^2. The one-dimensional base Z is embedded as y == 0.
struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  auto operator<=>(const Point&) const = default;

  Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
  Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
  Point operator-() const { return {-x, -y}; }
};

inline std::int64_t l1_norm(const Point& p) {
  return (p.x < 0 ? -p.x : p.x) + (p.y < 0 ? -p.y : p.y);
}

inline std::int64_t l1_distance(const Point& a, const Point& b) {
  return l1_norm(a - b);
}

struct PointHash {
  std::size_t operator()(const Point& p) const {
    return static_cast<std::size_t>(
        hash_combine(mix64(static_cast<std::uint64_t>(p.x)),
                     static_cast<std::uint64_t>(p.y)));
  }
};

// 4-neighbourhood: +e1, -e1, +e2, -e2.
inline std::array<Point, 4> neighbors4(const Point& p) {
  return {Point{p.x + 1, p.y}, Point{p.x - 1, p.y}, Point{p.x, p.y + 1},
          Point{p.x, p.y - 1}};
}

using PointHashSet = std::unordered_set<Point, PointHash>;

// Finite subset of Z^2 with an optional cached inner boundary.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(const std::vector<Point>& pts);
  explicit PointSet(PointHashSet members) : members_(std::move(members)) {}

  bool contains(const Point& p) const { return members_.count(p) != 0; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const PointHashSet& members() const { return members_; }

  // Lexicographic order; used wherever iteration order must be stable.
  std::vector<Point> sorted() const;

  void insert(const Point& p) {
    members_.insert(p);
    boundary_.reset();
  }

  // Fills the boundary cache. The cache is dropped on every mutation.
  void cache_boundary();
  const std::optional<PointHashSet>& boundary_cache() const { return boundary_; }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.members_ == b.members_;
  }

 private:
  PointHashSet members_;
  std::optional<PointHashSet> boundary_;
};

// Members of v with at least one 4-neighbour outside v.
PointSet inner_boundary(const PointSet& v);
std::size_t inner_boundary_size(const PointSet& v);

// Connectivity in the 4-adjacency graph. The empty set counts as connected.
bool is_connected(const PointSet& v);

enum class MomentClass { finite_support, second_moment, two_plus_eps };

struct Atom {
  Point displacement;
  double probability = 0.0;
};

// Symmetric heavy-tailed jumps: with probability `weight` the step is
// k * (+-e1 or +-e2), each axis direction equally likely, with
// P(k) proportional to k^-(1 + exponent) on 1..max_jump.
struct PowerTail {
  double weight = 0.0;
  double exponent = 3.0;
  std::int64_t max_jump = 1024;
};

class StepDistribution {
 public:
  // Throws ConfigError unless probabilities are positive and sum to one,
  // the support generates the base lattice as a semigroup, and the mean is
  // zero when `declared_centered` is set.
  StepDistribution(int dimension, std::vector<Atom> atoms,
                   MomentClass moment = MomentClass::finite_support,
                   std::optional<PowerTail> tail = std::nullopt,
                   bool declared_centered = true);

  // Uniform on {+-e1, +-e2} (or {+-1} in dimension one).
  static StepDistribution simple(int dimension);
  // Deterministic step v. Exempt from the non-degeneracy and centering
  // checks; used for drift walks in tests and examples.
  static StepDistribution point_mass(int dimension, Point v);

  int dimension() const { return dimension_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<PowerTail>& tail() const { return tail_; }
  MomentClass moment_class() const { return moment_; }

  // Sum over |g|_1 >= r of |g|_1^2 mu(g).
  double tail_second_moment(double r) const;
  // E|g|_1^2.
  double second_moment() const { return tail_second_moment(0.0); }
  // Standard deviation of the x coordinate of one step.
  double sigma_x() const;

  Point sample(Rng& rng) const;

 private:
  StepDistribution() = default;
  void build_tables();

  int dimension_ = 2;
  std::vector<Atom> atoms_;
  MomentClass moment_ = MomentClass::finite_support;
  std::optional<PowerTail> tail_;
  std::vector<double> alias_prob_;
  std::vector<std::uint32_t> alias_index_;
  std::vector<double> tail_cdf_;
};

// Checks that the displacements generate Z^dimension as a semigroup.
bool generates_lattice_semigroup(int dimension, const std::vector<Point>& support);

struct Trajectory {
  Point start;
  std::vector<Point> steps;
  std::vector<Point> positions;  // positions.size() == steps.size() + 1
  std::uint64_t seed = 0;

  std::int64_t length() const { return static_cast<std::int64_t>(steps.size()); }
};

// Deterministic in (dist, n, seed).
Trajectory sample_walk(const StepDistribution& dist, std::int64_t n,
                       std::uint64_t seed, Point start = {});

PointSet walk_range(const Trajectory& t);

// Local times l(n, x): number of indices i in [0, n] with positions[i] == x.
class VisitCounts {
 public:
  using Map = std::unordered_map<Point, std::int64_t, PointHash>;

  VisitCounts() = default;
  explicit VisitCounts(Map counts) : counts_(std::move(counts)) {}

  void add(const Point& p) { ++counts_[p]; }
  std::int64_t at(const Point& p) const;
  std::size_t range_size() const { return counts_.size(); }
  std::int64_t total() const;
  const Map& map() const { return counts_; }

 private:
  Map counts_;
};

VisitCounts visit_counts(const Trajectory& t);

// |{x : 1 <= counts[x] <= q}|.
std::int64_t thin_points(const VisitCounts& c, std::int64_t q);

double local_time_power_sum(const VisitCounts& c, double alpha);

// Independent p-thinning keyed by hash(seed, x, y), so the kept subset does
// not depend on iteration order and is monotone in p for a fixed seed.
bool dilution_keeps(const Point& p, double keep_probability, std::uint64_t seed);
PointSet dilute(const PointSet& v, double keep_probability, std::uint64_t seed);

}  // namespace ldl

#endif  // LDL_LATTICE_HPP_
