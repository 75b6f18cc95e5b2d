#ifndef LDL_TESTS_SUPPORT_HPP_
#define LDL_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <vector>

#include "ldl/lattice.hpp"
#include "ldl/rng.hpp"
#include "ldl/tsp.hpp"
#include "ldl/uncrossing.hpp"
#include "ldl/wreath.hpp"

namespace ldl::testing {

// Random 4-connected set grown from the origin by accretion.
inline PointSet random_connected_set(Rng& rng, std::size_t size) {
  std::vector<Point> members{{0, 0}};
  PointHashSet seen{{0, 0}};
  while (members.size() < size) {
    const Point base = members[rng.below(members.size())];
    const Point nb = neighbors4(base)[rng.below(4)];
    if (seen.insert(nb).second) members.push_back(nb);
  }
  return PointSet(members);
}

inline std::vector<Point> random_points(Rng& rng, std::size_t n, std::int64_t side,
                                        Point corner = {}) {
  PointHashSet seen;
  std::vector<Point> out;
  while (out.size() < n) {
    const Point p{corner.x + static_cast<std::int64_t>(rng.below(side)),
                  corner.y + static_cast<std::int64_t>(rng.below(side))};
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

// Lattice path from a random boundary point, wandering inside the box until
// it touches the boundary again.
inline GridPath random_box_path(Rng& rng, const BoxDomain& d, std::size_t max_steps = 120) {
  const auto& cyc = d.cycle();
  GridPath p;
  Point cur = cyc[rng.below(cyc.size())];
  p.vertices.push_back(cur);
  for (std::size_t step = 0; step < max_steps; ++step) {
    Point nx = neighbors4(cur)[rng.below(4)];
    if (!d.contains(nx)) continue;
    cur = nx;
    p.vertices.push_back(cur);
    if (d.index_of(cur) && p.vertices.size() > 1) return p;
  }
  // head straight for the bottom side
  while (!d.index_of(cur)) {
    cur.y -= 1;
    p.vertices.push_back(cur);
  }
  return p;
}

inline std::vector<GridPath> random_collection(Rng& rng, const BoxDomain& d, std::size_t m) {
  std::vector<GridPath> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(random_box_path(rng, d));
  return out;
}

inline std::vector<Point> multiset(const std::vector<GridPath>& ps) {
  std::vector<Point> all;
  for (const auto& p : ps) all.insert(all.end(), p.vertices.begin(), p.vertices.end());
  std::sort(all.begin(), all.end());
  return all;
}

inline std::vector<Point> image(const std::vector<GridPath>& ps) {
  auto all = multiset(ps);
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

inline bool unit_steps(const GridPath& p) {
  for (std::size_t i = 1; i < p.vertices.size(); ++i)
    if (l1_distance(p.vertices[i - 1], p.vertices[i]) != 1) return false;
  return true;
}

inline bool any_essential_crossing(const std::vector<GridPath>& ps, const BoxDomain& d) {
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      if (essential_crossing(ps[i], ps[j], d)) return true;
  return false;
}

// Random S-path from a boundary point with its projection inside the box,
// ending once the projection is back on the boundary.
inline SPath random_s_path(Rng& rng, const WreathGroup& g, const GeneratingSet& s,
                           const BoxDomain& d, std::size_t down_index) {
  const auto moves = move_table(g, s);
  SPath p{WreathElement{d.cycle()[rng.below(d.cycle().size())], {}}, {}};
  Point cur = p.start.position;
  for (int step = 0; step < 60; ++step) {
    const auto& [m, e] = moves[rng.below(moves.size())];
    const Point nx = cur + e.position;
    if (!d.contains(nx)) continue;
    p.moves.push_back(m);
    cur = nx;
    if (p.moves.size() > 1 && d.index_of(cur)) return p;
  }
  while (!d.index_of(cur)) {
    if (cur.y > d.corner().y) {
      p.moves.push_back({down_index, true});
      cur.y -= 1;
    } else {
      p.moves.push_back({down_index, false});
      cur.y += 1;
    }
  }
  return p;
}

}  // namespace ldl::testing

#endif  // LDL_TESTS_SUPPORT_HPP_
