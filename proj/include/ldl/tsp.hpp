#ifndef LDL_TSP_HPP_
#define LDL_TSP_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ldl/lattice.hpp"
#include "ldl/wreath.hpp"

namespace ldl {

inline constexpr std::size_t kExactTspCap = 18;

// Unit-step lattice path.
struct GridPath {
  std::vector<Point> vertices;

  std::int64_t length() const {
    return vertices.empty() ? 0 : static_cast<std::int64_t>(vertices.size()) - 1;
  }
};

struct TspResult {
  std::int64_t length = 0;
  std::vector<Point> order;  // visiting order of the (deduplicated) input points
  GridPath path;
  bool exact = false;
};

// Sum of L1 distances between consecutive points.
std::int64_t order_length(const std::vector<Point>& order);
// Joins consecutive points by an x-then-y monotone segment.
GridPath realize(const std::vector<Point>& order);

// Held-Karp over the L1 complete graph. Open path, free endpoints; ties go to
// the lexicographically smallest index sequence of the sorted input, so the
// result does not depend on input order. Throws ResourceError above `cap`.
TspResult exact_tsp(const std::vector<Point>& points, std::size_t cap = kExactTspCap);
TspResult exact_tsp(const PointSet& points, std::size_t cap = kExactTspCap);

// Shortest path from `start` through every point, ending at `end` when given.
struct AnchoredTour {
  std::int64_t length = 0;
  std::vector<Point> order;  // the input points only; start and end are implicit
};
AnchoredTour anchored_exact_tsp(const std::vector<Point>& points, Point start,
                                std::optional<Point> end, std::size_t cap = kExactTspCap);

// Vertical boustrophedon strips of width ceil(M / ceil(sqrt N)) over the
// square [corner, corner + M - 1]^2. Length <= 2 M ceil(sqrt N) + 2 M.
TspResult strip_heuristic(const std::vector<Point>& points, Point corner, std::int64_t side);
// Same, over the bounding square of the points.
TspResult strip_heuristic(const std::vector<Point>& points);

struct LocalSearchOptions {
  int neighbors = 10;
  std::size_t max_shift = 1000;  // longest reversal or block shift
};

// 2-opt and Or-opt with neighbour lists and don't-look bits, open path.
// Never increases the length.
std::vector<Point> improve_order(std::vector<Point> order, const LocalSearchOptions& opt = {});

// Box side C with (C + 1)^3 = 4 |V| / |dV|, rounded, at least 1.
std::int64_t tsp1_box_side(std::size_t size, std::size_t boundary);

// Tour of a 4-connected set built from its C x C box decomposition. Length is
// at most |V| (1 + 16 (|dV| / |V|)^(1/3)).
TspResult connected_set_tour(const PointSet& v);

struct BoxTspOptions {
  std::size_t exact_cap = 12;  // per-box sub-tours up to this size are exact
  bool local_search = true;
  LocalSearchOptions search;
};

struct BoxTspReport {
  TspResult result;
  std::int64_t box_side = 0;
  std::int64_t boxes = 0;
  std::int64_t full_boxes = 0;
  std::int64_t full_subtour_sum = 0;   // sum over full boxes of the sub-tours used
  std::int64_t construction_length = 0;
  std::int64_t range_boundary = 0;
  std::int64_t range_size = 0;
  // sum_full l(DR|a) + (2 C^2 + 4) |dR| + 4 |R| / C
  double certificate = 0.0;
};

// Tour of a diluted range from the boxes of side C meeting the range: boxes
// are taken in depth-first order over box adjacency, each contributing its
// own sub-tour; the result is the better of this and a serpentine order after
// local search.
BoxTspReport box_tsp_diluted(const PointSet& diluted, const PointSet& range, std::int64_t box_side,
                             const BoxTspOptions& opt = {});

// Shortest S-path starting at some (z, 0), z within `side + reach` of the box,
// whose end configuration is exactly `target`. Lamps outside the box are never
// touched. Throws ResourceError when the state space exceeds `cap`.
std::int64_t s_path_tsp_exact(const WreathGroup& g, const LampConfig& target, Point corner,
                              std::int64_t side, const GeneratingSet& s,
                              std::size_t cap = 20'000'000);

// "x,y" per line; blank lines and lines starting with '#' are skipped.
std::vector<Point> read_points_csv(std::istream& in);
void write_points_csv(std::ostream& out, const std::vector<Point>& points);

}  // namespace ldl

#endif  // LDL_TSP_HPP_
