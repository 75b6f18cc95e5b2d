#ifndef LDL_WREATH_HPP_
#define LDL_WREATH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldl/lattice.hpp"

namespace ldl {

// Lamp group L of a wreath product B wr L. Values are encoded as integers:
// indices 0..m-1 into a multiplication table for finite groups (identity 0),
// or the integers themselves for L = Z.
class LampGroup {
 public:
  static LampGroup cyclic(std::int64_t order);
  static LampGroup integers();
  // Rows and columns indexed by element; validates closure, identity at 0,
  // inverses and associativity.
  static LampGroup from_table(const std::vector<std::vector<std::int64_t>>& table);
  // Plain-text table: first the order m, then m lines of m indices.
  static LampGroup parse_table(std::istream& in);

  bool is_finite() const { return order_ > 0; }
  // 0 for the infinite group Z.
  std::int64_t order() const { return order_; }
  bool contains(std::int64_t v) const { return order_ == 0 || (v >= 0 && v < order_); }
  std::int64_t op(std::int64_t a, std::int64_t b) const;
  std::int64_t inverse(std::int64_t a) const;
  // Every element squares to the identity.
  bool is_involutive() const;
  // Values in canonical order; empty for Z.
  std::vector<std::int64_t> elements() const;

  friend bool operator==(const LampGroup& a, const LampGroup& b) {
    return a.order_ == b.order_ && a.table_ == b.table_;
  }

 private:
  std::int64_t order_ = 0;
  std::vector<std::int64_t> table_;
  std::vector<std::int64_t> inverse_;
};

// Finitely supported lamp configuration; identity values are never stored and
// entries are kept sorted by site, which makes equality and hashing canonical.
class LampConfig {
 public:
  using Entry = std::pair<Point, std::int64_t>;

  LampConfig() = default;

  std::int64_t get(const Point& p) const;
  void set(const Point& p, std::int64_t value);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Point> support() const;
  // (tau_v f)(y) = f(y - v).
  LampConfig translated(const Point& v) const;

  friend bool operator==(const LampConfig&, const LampConfig&) = default;

 private:
  std::vector<Entry> entries_;
};

struct WreathElement {
  Point position;
  LampConfig lamps;

  friend bool operator==(const WreathElement&, const WreathElement&) = default;
};

struct WreathElementHash {
  std::size_t operator()(const WreathElement& g) const;
};

// B wr L with B = Z (base_dim 1) or Z^2 (base_dim 2).
class WreathGroup {
 public:
  WreathGroup(int base_dim, LampGroup lamps);

  int base_dim() const { return base_dim_; }
  const LampGroup& lamps() const { return lamps_; }

  WreathElement identity() const { return {}; }
  // Throws GroupMismatch when g is not an element of this group.
  void check(const WreathElement& g) const;

  // (x, f)(y, h) = (x + y, f * tau_x h), pointwise in the lamp group.
  WreathElement multiply(const WreathElement& g, const WreathElement& h) const;
  WreathElement invert(const WreathElement& g) const;
  // g <- g * s without copying g.
  void right_multiply(WreathElement& g, const WreathElement& s) const;

  // Pointwise end(x) * start(x)^-1.
  LampConfig difference(const LampConfig& end, const LampConfig& start) const;
  // Pointwise a(x) * b(x).
  LampConfig sum(const LampConfig& a, const LampConfig& b) const;

  // delta_p^v: value v at site p.
  WreathElement lamp_at(const Point& p, std::int64_t v) const;

 private:
  int base_dim_;
  LampGroup lamps_;
};

// Generators are stored once; words may use them and their inverses.
struct GeneratingSet {
  std::vector<WreathElement> generators;
  std::vector<std::string> labels;

  // {s1 = (e1, 0), s2 = (e2, 0), delta = (0, delta_0^1)}; s2 omitted for base Z.
  static GeneratingSet standard(const WreathGroup& g);
  // Switch-walk-switch set over Z wr F: (e1, delta_0^a + delta_1^b), a, b in F.
  static GeneratingSet sws_1d(const WreathGroup& g);

  // Largest |.|_1 of a base displacement or lamp offset among the generators.
  std::int64_t reach() const;
};

struct Move {
  std::size_t index = 0;
  bool inverse = false;

  friend bool operator==(const Move&, const Move&) = default;
};

// All moves S u S^-1 as (move, element) pairs; an inverse already present
// in S (e.g. delta over Z/2Z) is not repeated.
std::vector<std::pair<Move, WreathElement>> move_table(const WreathGroup& g,
                                                       const GeneratingSet& s);

// Directed path in the right Cayley graph: x_i = x_{i-1} * s_i.
struct SPath {
  WreathElement start;
  std::vector<Move> moves;

  std::size_t length() const { return moves.size(); }
};

WreathElement move_element(const WreathGroup& g, const GeneratingSet& s, const Move& m);
WreathElement path_end(const WreathGroup& g, const GeneratingSet& s, const SPath& p);
// Lamp change produced by the path: lamps(end) - lamps(start).
LampConfig path_tau(const WreathGroup& g, const GeneratingSet& s, const SPath& p);
// Base positions x_0 .. x_k of the projected path.
std::vector<Point> path_projection(const WreathGroup& g, const GeneratingSet& s,
                                   const SPath& p);
// Traverses the same edges backwards. Requires an involutive lamp group so
// that tau is unchanged; throws UnsupportedOperation otherwise.
SPath reverse_path(const WreathGroup& g, const GeneratingSet& s, const SPath& p);

inline constexpr std::size_t kDefaultStateBudget = 50'000'000;

// Exact l_S(g) by breadth-first search from the identity, or nullopt when
// l_S(g) > radius_cap. Throws ResourceError past `state_budget` states.
std::optional<std::int64_t> word_length_bfs(const WreathGroup& g, const WreathElement& target,
                                             const GeneratingSet& s, std::int64_t radius_cap,
                                             std::size_t state_budget = kDefaultStateBudget);

// A shortest word for `target` (same search as word_length_bfs).
std::optional<std::vector<Move>> shortest_word(const WreathGroup& g,
                                               const WreathElement& target,
                                               const GeneratingSet& s, std::int64_t radius_cap,
                                               std::size_t state_budget = kDefaultStateBudget);

// Every element of the closed ball of the given radius with its word length.
std::unordered_map<WreathElement, std::int64_t, WreathElementHash> cayley_ball(
    const WreathGroup& g, const GeneratingSet& s, std::int64_t radius,
    std::size_t state_budget = kDefaultStateBudget);

struct WordLengthBounds {
  std::int64_t lower = 0;  // l_TS(supp f) + |supp f|
  std::int64_t upper = 0;  // lower + |x| + 2 Diam(supp f u {0})
  std::int64_t diameter = 0;
  bool exact_tsp = true;   // false when l_TS came from a heuristic
};

// Bounds for the lamplighter over Z^2 with the standard generating set.
// The diameter is taken over the support together with the origin, where the
// walker starts; over the support alone the upper bound fails for elements
// such as ((0,0), {(3,0)}).
WordLengthBounds word_length_bounds(const WreathGroup& g, const WreathElement& x);

// For every s = (z, f) in S u S^-1 the element (-z, tau_{-z} f) is also in
// S u S^-1. Requires a finite lamp group.
bool is_complete(const WreathGroup& g, const GeneratingSet& s);

struct OnedWordLength {
  std::int64_t bfs = 0;          // ground truth
  std::int64_t closed_form = 0;  // 2 max supp - 2 min supp - |x|
  bool agrees() const { return bfs == closed_form; }
};

// Word length over Z wr F with the switch-walk-switch set. Requires non-empty
// support and min supp <= x <= max supp (DomainError otherwise).
OnedWordLength oned_word_length(const WreathGroup& g, const WreathElement& x,
                                std::int64_t radius_cap = 40);

// Probability measure on a wreath product with finite support.
class WreathStepDistribution {
 public:
  struct Atom {
    WreathElement element;
    double probability = 0.0;
  };

  WreathStepDistribution(const WreathGroup& g, std::vector<Atom> atoms);

  // eta * nu * eta with eta = (1 - switch_prob) [id] + switch_prob [delta]
  // (delta with lamp value 1) and nu the lift of a base step law.
  static WreathStepDistribution switch_walk_switch(const WreathGroup& g,
                                                   const StepDistribution& base,
                                                   double switch_prob);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double mass(const WreathElement& e) const;

  struct Decomposition {
    double a = 0.0;              // min{mu(id), mu(delta)}
    std::vector<Atom> residual;  // mu' with mu = a u + (1 - a) mu'
  };
  // Splits off a times the uniform measure on {id, delta}.
  Decomposition decompose() const;

  WreathElement sample(Rng& rng) const;

 private:
  WreathGroup group_;
  std::vector<Atom> atoms_;
  std::vector<double> cdf_;
};

}  // namespace ldl

#endif  // LDL_WREATH_HPP_
