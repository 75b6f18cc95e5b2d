#ifndef LDL_UNCROSSING_HPP_
#define LDL_UNCROSSING_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "ldl/lattice.hpp"
#include "ldl/tsp.hpp"
#include "ldl/wreath.hpp"

namespace ldl {

// C x C square with corner at its lower-left point. The boundary cycle runs
// clockwise from the corner: up the left side, right along the top, down the
// right side and back along the bottom.
class BoxDomain {
 public:
  BoxDomain(Point corner, std::int64_t side);

  Point corner() const { return corner_; }
  std::int64_t side() const { return side_; }
  const std::vector<Point>& cycle() const { return cycle_; }
  std::int64_t perimeter() const { return static_cast<std::int64_t>(cycle_.size()); }

  bool contains(const Point& p) const;
  std::optional<std::int64_t> index_of(const Point& p) const;
  // Index of the nearest boundary point; ties go to the smaller index.
  std::int64_t nearest_index(const Point& p) const;
  // Cycle walk from index a to index b (inclusive), in the shorter direction
  // unless `clockwise` is given.
  std::vector<Point> walk(std::int64_t a, std::int64_t b, std::optional<bool> clockwise = {}) const;
  std::int64_t cycle_distance(std::int64_t a, std::int64_t b) const;

 private:
  Point corner_;
  std::int64_t side_;
  std::vector<Point> cycle_;
  std::map<Point, std::int64_t> index_;
};

// x strictly inside the clockwise open arc from a to b (indices mod n).
bool in_open_arc(std::int64_t a, std::int64_t b, std::int64_t x, std::int64_t n);

// Endpoint-only test. Loops never cross; shared endpoints are a DomainError.
bool essential_crossing(std::int64_t a1, std::int64_t b1, std::int64_t a2, std::int64_t b2,
                        std::int64_t n);
bool essential_crossing(const GridPath& p1, const GridPath& p2, const BoxDomain& d);

// Joins paths with a common endpoint (reversing one when needed) until all
// endpoints are distinct apart from loops.
std::vector<GridPath> normalize_endpoints(std::vector<GridPath> paths, const BoxDomain& d);

std::optional<Point> first_common_point(const GridPath& p1, const GridPath& p2);

// Q1 = P1[A1 -> O] P2[O -> B2], Q2 = P2[A2 -> O] P1[O -> B1].
std::pair<GridPath, GridPath> uncross_pair(const GridPath& p1, const GridPath& p2, Point o);

struct UncrossResult {
  std::vector<GridPath> paths;
  std::int64_t uncross_count = 0;
};

UncrossResult uncross_all(std::vector<GridPath> paths, const BoxDomain& d);

// One path through every input path plus perimeter segments. Throws
// DomainError if two inputs cross essentially.
GridPath join_noncrossing(const std::vector<GridPath>& paths, const BoxDomain& d);

// ----------------------------------------------------------------- S-paths

// Uncrossing of S-paths over an involutive lamp group. Projections are
// inflated to lattice paths (x first, then y) to find intersection points.
class SPathUncrosser {
 public:
  SPathUncrosser(WreathGroup g, GeneratingSet s, BoxDomain d);

  const BoxDomain& domain() const { return domain_; }

  // Shortest word whose projection moves by `d`.
  const std::vector<Move>& connector(const Point& d);
  // max 2 |connector(d)| over |d|_1 <= 2 reach: the extra length one
  // uncrossing can add.
  std::int64_t constant();

  std::vector<SPath> normalize_endpoints(std::vector<SPath> paths) const;

  // Splits P1 at its last vertex before O and P2 at its first vertex after O,
  // both along the inflated projections, and joins the pieces by a connector
  // and its reversal. Throws DomainError when the projections do not meet.
  std::pair<SPath, SPath> uncross_pair(const SPath& p1, const SPath& p2);

  struct Result {
    std::vector<SPath> paths;
    std::int64_t uncross_count = 0;
    std::int64_t added_length = 0;
  };
  Result uncross_all(std::vector<SPath> paths);

  // Position of an endpoint in the cyclic order of the boundary: nearest
  // boundary index, then distance, then the point itself.
  using Key = std::tuple<std::int64_t, std::int64_t, Point>;
  Key key(const Point& p) const;
  bool crossing(const SPath& p1, const SPath& p2) const;

  GridPath inflate(const SPath& p, std::vector<std::size_t>* vertex_index = nullptr) const;

 private:
  WreathGroup group_;
  GeneratingSet gens_;
  BoxDomain domain_;
  std::map<Point, std::vector<Move>> connectors_;
};

LampConfig total_tau(const WreathGroup& g, const GeneratingSet& s, const std::vector<SPath>& paths);

}  // namespace ldl

#endif  // LDL_UNCROSSING_HPP_
