#include "ldl/tsp.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "ldl/errors.hpp"

namespace ldl {

namespace {

std::vector<Point> sorted_unique(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

TspResult finish(std::vector<Point> order, bool exact) {
  TspResult r;
  r.length = order_length(order);
  r.path = realize(order);
  r.order = std::move(order);
  r.exact = exact;
  return r;
}

}  // namespace

std::int64_t order_length(const std::vector<Point>& order) {
  std::int64_t len = 0;
  for (std::size_t i = 1; i < order.size(); ++i) len += l1_distance(order[i - 1], order[i]);
  return len;
}

GridPath realize(const std::vector<Point>& order) {
  GridPath g;
  if (order.empty()) return g;
  g.vertices.push_back(order.front());
  for (std::size_t i = 1; i < order.size(); ++i) {
    Point cur = g.vertices.back();
    const Point& to = order[i];
    while (cur.x != to.x) {
      cur.x += cur.x < to.x ? 1 : -1;
      g.vertices.push_back(cur);
    }
    while (cur.y != to.y) {
      cur.y += cur.y < to.y ? 1 : -1;
      g.vertices.push_back(cur);
    }
  }
  return g;
}

// ---------------------------------------------------------------- Held-Karp

namespace {

struct HeldKarp {
  std::vector<Point> pts;
  std::vector<std::int32_t> dp;
  std::vector<std::uint8_t> parent;
  std::size_t n = 0;

  std::int32_t d(std::size_t a, std::size_t b) const {
    return static_cast<std::int32_t>(l1_distance(pts[a], pts[b]));
  }

  // dp[mask][j]: shortest path covering `mask`, ending at j, with start cost
  // start_cost[j] for the first point.
  void run(const std::vector<std::int32_t>& start_cost) {
    n = pts.size();
    const std::size_t full = std::size_t{1} << n;
    constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max() / 2;
    dp.assign(full * n, kInf);
    parent.assign(full * n, 0xFF);
    for (std::size_t j = 0; j < n; ++j) dp[(std::size_t{1} << j) * n + j] = start_cost[j];
    for (std::size_t mask = 1; mask < full; ++mask) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!(mask >> j & 1)) continue;
        const std::size_t prev = mask ^ (std::size_t{1} << j);
        if (prev == 0) continue;
        std::int32_t best = kInf;
        std::uint8_t arg = 0xFF;
        for (std::size_t k = 0; k < n; ++k) {
          if (!(prev >> k & 1)) continue;
          const std::int32_t c = dp[prev * n + k] + d(k, j);
          if (c < best) {
            best = c;
            arg = static_cast<std::uint8_t>(k);
          }
        }
        dp[mask * n + j] = best;
        parent[mask * n + j] = arg;
      }
    }
  }

  std::vector<Point> trace(std::size_t last) const {
    std::vector<Point> out;
    std::size_t mask = (std::size_t{1} << n) - 1;
    std::size_t j = last;
    while (true) {
      out.push_back(pts[j]);
      const auto p = parent[mask * n + j];
      mask ^= std::size_t{1} << j;
      if (p == 0xFF) break;
      j = p;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

}  // namespace

TspResult exact_tsp(const std::vector<Point>& points, std::size_t cap) {
  auto pts = sorted_unique(points);
  if (pts.empty()) throw DomainError("exact_tsp needs a non-empty point set");
  if (pts.size() > cap || pts.size() > 24)
    throw ResourceError("exact_tsp: " + std::to_string(pts.size()) +
                        " points exceed the cap; use a heuristic solver");
  if (pts.size() == 1) return finish(pts, true);
  HeldKarp hk;
  hk.pts = pts;
  hk.run(std::vector<std::int32_t>(pts.size(), 0));
  const std::size_t full = (std::size_t{1} << hk.n) - 1;
  std::size_t last = 0;
  for (std::size_t j = 1; j < hk.n; ++j)
    if (hk.dp[full * hk.n + j] < hk.dp[full * hk.n + last]) last = j;
  return finish(hk.trace(last), true);
}

TspResult exact_tsp(const PointSet& points, std::size_t cap) {
  return exact_tsp(points.sorted(), cap);
}

AnchoredTour anchored_exact_tsp(const std::vector<Point>& points, Point start,
                                std::optional<Point> end, std::size_t cap) {
  auto pts = sorted_unique(points);
  AnchoredTour out;
  if (pts.empty()) {
    out.length = end ? l1_distance(start, *end) : 0;
    return out;
  }
  if (pts.size() > cap || pts.size() > 24)
    throw ResourceError("anchored_exact_tsp: too many points for the exact solver");
  HeldKarp hk;
  hk.pts = pts;
  std::vector<std::int32_t> sc(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j)
    sc[j] = static_cast<std::int32_t>(l1_distance(start, pts[j]));
  hk.run(sc);
  const std::size_t full = (std::size_t{1} << hk.n) - 1;
  std::size_t last = 0;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t j = 0; j < hk.n; ++j) {
    const std::int64_t c = hk.dp[full * hk.n + j] + (end ? l1_distance(pts[j], *end) : 0);
    if (c < best) {
      best = c;
      last = j;
    }
  }
  out.length = best;
  out.order = hk.trace(last);
  return out;
}

// ------------------------------------------------------------------- strips

TspResult strip_heuristic(const std::vector<Point>& points, Point corner, std::int64_t side) {
  auto pts = sorted_unique(points);
  if (side < 1) throw DomainError("strip_heuristic needs side >= 1");
  for (const auto& p : pts)
    if (p.x < corner.x || p.y < corner.y || p.x >= corner.x + side || p.y >= corner.y + side)
      throw DomainError("point outside the declared square");
  if (pts.empty()) return finish({}, false);
  const auto n = static_cast<std::int64_t>(pts.size());
  auto k = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (k * k < n) ++k;
  while ((k - 1) * (k - 1) >= n && k > 1) --k;
  const std::int64_t w = (side + k - 1) / k;
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
    const auto sa = (a.x - corner.x) / w, sb = (b.x - corner.x) / w;
    if (sa != sb) return sa < sb;
    const bool up = sa % 2 == 0;
    if (a.y != b.y) return up ? a.y < b.y : a.y > b.y;
    return a.x < b.x;
  });
  return finish(std::move(pts), false);
}

TspResult strip_heuristic(const std::vector<Point>& points) {
  if (points.empty()) return finish({}, false);
  std::int64_t x0 = points[0].x, y0 = points[0].y, x1 = x0, y1 = y0;
  for (const auto& p : points) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  return strip_heuristic(points, {x0, y0}, std::max(x1 - x0, y1 - y0) + 1);
}

// ------------------------------------------------------------- local search

namespace {

class PathOptimizer {
 public:
  PathOptimizer(std::vector<Point> order, const LocalSearchOptions& opt)
      : pts_(std::move(order)), opt_(opt) {
    n_ = static_cast<std::int64_t>(pts_.size());
    ord_.resize(n_);
    pos_.resize(n_);
    std::iota(ord_.begin(), ord_.end(), 0);
    std::iota(pos_.begin(), pos_.end(), 0);
    build_neighbors();
  }

  std::vector<Point> run() {
    std::deque<std::int64_t> queue(ord_.begin(), ord_.end());
    std::vector<char> queued(n_, 1);
    auto push = [&](std::int64_t node) {
      if (node >= 0 && !queued[node]) {
        queued[node] = 1;
        queue.push_back(node);
      }
    };
    while (!queue.empty()) {
      const auto a = queue.front();
      queue.pop_front();
      queued[a] = 0;
      touched_.clear();
      if (two_opt(a) || or_opt(a)) {
        for (auto t : touched_) push(t);
        push(a);
      }
    }
    std::vector<Point> out(n_);
    for (std::int64_t i = 0; i < n_; ++i) out[i] = pts_[ord_[i]];
    return out;
  }

 private:
  std::int64_t d(std::int64_t a, std::int64_t b) const { return l1_distance(pts_[a], pts_[b]); }
  std::int64_t at(std::int64_t i) const { return (i >= 0 && i < n_) ? ord_[i] : -1; }
  std::int64_t dd(std::int64_t a, std::int64_t b) const {
    return (a < 0 || b < 0) ? 0 : d(a, b);
  }

  void build_neighbors() {
    std::unordered_map<Point, std::int64_t, PointHash> index;
    index.reserve(n_ * 2);
    for (std::int64_t i = 0; i < n_; ++i) index.emplace(pts_[i], i);
    const int k = opt_.neighbors;
    nbr_.assign(n_ * k, -1);
    constexpr std::int64_t kMaxRadius = 24;
    for (std::int64_t i = 0; i < n_; ++i) {
      int found = 0;
      const Point c = pts_[i];
      for (std::int64_t r = 1; r <= kMaxRadius && found < k; ++r) {
        for (std::int64_t dx = -r; dx <= r && found < k; ++dx) {
          const std::int64_t rest = r - std::abs(dx);
          for (std::int64_t sgn : {1, -1}) {
            if (rest == 0 && sgn == -1) break;
            auto it = index.find({c.x + dx, c.y + sgn * rest});
            if (it != index.end() && found < k) nbr_[i * k + found++] = it->second;
          }
        }
      }
    }
  }

  // Reverses ord_[x + 1 .. y], -1 <= x < y <= n - 1.
  std::int64_t gain2(std::int64_t x, std::int64_t y) const {
    const auto ox = at(x), ox1 = at(x + 1), oy = at(y), oy1 = at(y + 1);
    return dd(ox, ox1) + dd(oy, oy1) - dd(ox, oy) - dd(ox1, oy1);
  }

  void reverse(std::int64_t x, std::int64_t y) {
    touched_.push_back(at(x));
    touched_.push_back(at(x + 1));
    touched_.push_back(at(y));
    touched_.push_back(at(y + 1));
    std::reverse(ord_.begin() + x + 1, ord_.begin() + y + 1);
    for (std::int64_t i = x + 1; i <= y; ++i) pos_[ord_[i]] = i;
  }

  bool two_opt(std::int64_t a) {
    const auto i = pos_[a];
    const auto da = std::max(dd(a, at(i - 1)), dd(a, at(i + 1)));
    const int k = opt_.neighbors;
    std::int64_t best = 0, bx = 0, by = 0;
    for (int t = 0; t < k; ++t) {
      const auto c = nbr_[a * k + t];
      if (c < 0) break;
      if (d(a, c) >= da) break;
      const auto j = pos_[c];
      std::array<std::pair<std::int64_t, std::int64_t>, 2> cand;
      if (j > i) {
        cand = {{{i, j}, {i - 1, j - 1}}};
      } else {
        cand = {{{j, i}, {j - 1, i - 1}}};
      }
      for (auto [x, y] : cand) {
        if (x < -1 || y > n_ - 1 || x >= y) continue;
        if (static_cast<std::size_t>(y - x) > opt_.max_shift) continue;
        const auto g = gain2(x, y);
        if (g > best) {
          best = g;
          bx = x;
          by = y;
        }
      }
    }
    if (best <= 0) return false;
    reverse(bx, by);
    return true;
  }

  bool or_opt(std::int64_t a) {
    const auto i0 = pos_[a];
    const int k = opt_.neighbors;
    for (std::int64_t len = 1; len <= 3; ++len) {
      for (std::int64_t i : {i0, i0 - len + 1}) {
        const std::int64_t e = i + len - 1;
        if (i < 0 || e >= n_) continue;
        const auto s1 = ord_[i], s2 = ord_[e];
        const auto prev = at(i - 1), next = at(e + 1);
        if (prev < 0 && next < 0) continue;
        const std::int64_t removal = dd(prev, s1) + dd(s2, next) - dd(prev, next);
        if (removal <= 0) continue;
        std::int64_t best = 0, best_u = -2;
        bool best_rev = false;
        auto consider = [&](std::int64_t u) {  // insert between positions u and u + 1
          if (u >= i - 1 && u <= e) return;
          const std::int64_t span = u < i ? i - u : u - e;
          if (static_cast<std::size_t>(span) > opt_.max_shift) return;
          const auto ou = at(u), ov = at(u + 1);
          const std::int64_t base = dd(ou, ov);
          const std::int64_t fwd = dd(ou, s1) + dd(s2, ov) - base;
          const std::int64_t rev = dd(ou, s2) + dd(s1, ov) - base;
          const std::int64_t g1 = removal - fwd, g2 = removal - rev;
          if (g1 > best) {
            best = g1;
            best_u = u;
            best_rev = false;
          }
          if (g2 > best) {
            best = g2;
            best_u = u;
            best_rev = true;
          }
        };
        for (auto s : {s1, s2}) {
          for (int t = 0; t < k; ++t) {
            const auto c = nbr_[s * k + t];
            if (c < 0) break;
            if (d(s, c) >= removal) break;
            const auto j = pos_[c];
            consider(j);
            consider(j - 1);
          }
        }
        if (best_u == -2) continue;
        apply_or(i, e, best_u, best_rev);
        return true;
      }
    }
    return false;
  }

  void apply_or(std::int64_t i, std::int64_t e, std::int64_t u, bool rev) {
    const std::int64_t len = e - i + 1;
    touched_.push_back(at(i - 1));
    touched_.push_back(at(e + 1));
    touched_.push_back(at(u));
    touched_.push_back(at(u + 1));
    std::int64_t lo, hi, seg;
    if (u > e) {
      std::rotate(ord_.begin() + i, ord_.begin() + e + 1, ord_.begin() + u + 1);
      lo = i;
      hi = u;
      seg = u - len + 1;
    } else {
      std::rotate(ord_.begin() + u + 1, ord_.begin() + i, ord_.begin() + e + 1);
      lo = u + 1;
      hi = e;
      seg = u + 1;
    }
    if (rev) std::reverse(ord_.begin() + seg, ord_.begin() + seg + len);
    for (std::int64_t p = lo; p <= hi; ++p) pos_[ord_[p]] = p;
    touched_.push_back(ord_[seg]);
    touched_.push_back(ord_[seg + len - 1]);
  }

  std::vector<Point> pts_;
  LocalSearchOptions opt_;
  std::int64_t n_ = 0;
  std::vector<std::int64_t> ord_, pos_, nbr_, touched_;
};

}  // namespace

std::vector<Point> improve_order(std::vector<Point> order, const LocalSearchOptions& opt) {
  if (order.size() < 3) return order;
  const auto before = order_length(order);
  PathOptimizer po(order, opt);
  auto out = po.run();
  if (order_length(out) > before) return order;
  return out;
}

// ------------------------------------------------------- box decompositions

namespace {

using BoxMap = std::map<Point, std::vector<Point>>;

BoxMap group_by_box(const std::vector<Point>& pts, std::int64_t c) {
  BoxMap boxes;
  for (const auto& p : pts) boxes[{floor_div(p.x, c), floor_div(p.y, c)}].push_back(p);
  return boxes;
}

// Depth-first order over side-adjacent boxes. Children are entered in order of
// increasing subtree height, so the deepest branch is walked last and never
// has to be walked back. Components are handled in sorted order.
std::vector<Point> box_dfs_order(const std::vector<Point>& keys) {
  std::map<Point, std::int64_t> id;
  for (std::size_t i = 0; i < keys.size(); ++i) id[keys[i]] = static_cast<std::int64_t>(i);
  const auto n = static_cast<std::int64_t>(keys.size());
  std::vector<std::int64_t> parent(n, -2);
  std::vector<std::vector<std::int64_t>> children(n);
  std::vector<std::int64_t> roots, post;
  for (std::int64_t r = 0; r < n; ++r) {
    if (parent[r] != -2) continue;
    parent[r] = -1;
    roots.push_back(r);
    std::vector<std::pair<std::int64_t, int>> stack{{r, 0}};
    while (!stack.empty()) {
      auto& [v, k] = stack.back();
      if (k == 4) {
        post.push_back(v);
        stack.pop_back();
        continue;
      }
      const Point nb = neighbors4(keys[v])[k++];
      auto it = id.find(nb);
      if (it == id.end() || parent[it->second] != -2) continue;
      parent[it->second] = v;
      children[v].push_back(it->second);
      stack.push_back({it->second, 0});
    }
  }
  std::vector<std::int64_t> height(n, 0);
  for (auto v : post)
    for (auto c : children[v]) height[v] = std::max(height[v], height[c] + 1);
  std::vector<Point> out;
  out.reserve(n);
  for (auto r : roots) {
    std::vector<std::int64_t> stack{r};
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      out.push_back(keys[v]);
      auto ch = children[v];
      std::stable_sort(ch.begin(), ch.end(),
                       [&](std::int64_t a, std::int64_t b) { return height[a] > height[b]; });
      // pushed deepest first so it is popped last
      for (auto c : ch) stack.push_back(c);
    }
  }
  return out;
}

// Appends a sub-order, choosing the orientation closer to the current end.
void append_oriented(std::vector<Point>& out, std::vector<Point> sub) {
  if (sub.empty()) return;
  if (!out.empty() &&
      l1_distance(out.back(), sub.back()) < l1_distance(out.back(), sub.front()))
    std::reverse(sub.begin(), sub.end());
  out.insert(out.end(), sub.begin(), sub.end());
}

std::vector<Point> box_subtour(const std::vector<Point>& pts, Point box, std::int64_t c,
                               std::size_t exact_cap, const LocalSearchOptions* ls) {
  if (pts.size() <= exact_cap) return exact_tsp(pts, exact_cap).order;
  auto order = strip_heuristic(pts, {box.x * c, box.y * c}, c).order;
  if (ls) order = improve_order(std::move(order), *ls);
  return order;
}

std::vector<Point> grid_dfs_order(const PointSet& v) {
  const auto sorted = v.sorted();
  PointHashSet seen;
  std::vector<Point> out;
  out.reserve(sorted.size());
  for (const auto& root : sorted) {
    if (seen.count(root)) continue;
    seen.insert(root);
    std::vector<std::pair<Point, int>> stack{{root, 0}};
    out.push_back(root);
    while (!stack.empty()) {
      auto& [p, k] = stack.back();
      if (k == 4) {
        stack.pop_back();
        continue;
      }
      const Point nb = neighbors4(p)[k++];
      if (!v.contains(nb) || seen.count(nb)) continue;
      seen.insert(nb);
      out.push_back(nb);
      stack.push_back({nb, 0});
    }
  }
  return out;
}

std::vector<Point> serpentine_order(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    const auto ba = floor_div(a.y, 2), bb = floor_div(b.y, 2);
    if (ba != bb) return ba < bb;
    const bool right = (ba % 2) == 0;
    if (a.x != b.x) return right ? a.x < b.x : a.x > b.x;
    const bool up = ((a.x % 2) + 2) % 2 == 0;
    return up ? a.y < b.y : a.y > b.y;
  });
  return pts;
}

std::vector<Point> row_serpentine(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    if (a.y != b.y) return a.y < b.y;
    return (a.y % 2 == 0) ? a.x < b.x : a.x > b.x;
  });
  return pts;
}

}  // namespace

std::int64_t tsp1_box_side(std::size_t size, std::size_t boundary) {
  if (size == 0 || boundary == 0) return 1;
  const double c = std::cbrt(4.0 * static_cast<double>(size) / static_cast<double>(boundary)) - 1.0;
  return std::max<std::int64_t>(1, std::llround(c));
}

TspResult connected_set_tour(const PointSet& v) {
  if (v.empty()) return finish({}, false);
  if (!is_connected(v)) throw DomainError("connected_set_tour needs a 4-connected set");
  const auto pts = v.sorted();
  const auto c = tsp1_box_side(v.size(), inner_boundary_size(v));
  const auto boxes = group_by_box(pts, c);
  std::vector<Point> keys;
  for (const auto& [k, _] : boxes) keys.push_back(k);
  std::vector<Point> order;
  order.reserve(pts.size());
  for (const auto& key : box_dfs_order(keys))
    append_oriented(order, box_subtour(boxes.at(key), key, c, 10, nullptr));
  auto alt = grid_dfs_order(v);
  if (order_length(alt) < order_length(order)) order = std::move(alt);
  return finish(improve_order(std::move(order)), false);
}

BoxTspReport box_tsp_diluted(const PointSet& diluted, const PointSet& range, std::int64_t box_side,
                             const BoxTspOptions& opt) {
  if (box_side < 2) throw DomainError("box_tsp_diluted needs C >= 2");
  for (const auto& p : diluted.members())
    if (!range.contains(p)) throw DomainError("diluted set is not contained in the range");
  BoxTspReport rep;
  rep.box_side = box_side;
  rep.range_size = static_cast<std::int64_t>(range.size());
  rep.range_boundary = static_cast<std::int64_t>(inner_boundary_size(range));
  const auto c = box_side;
  const auto range_boxes = group_by_box(range.sorted(), c);
  const auto dil_boxes = group_by_box(diluted.sorted(), c);
  std::vector<Point> keys;
  for (const auto& [k, cells] : range_boxes) {
    keys.push_back(k);
    ++rep.boxes;
  }
  const LocalSearchOptions* ls = opt.local_search ? &opt.search : nullptr;
  std::vector<Point> order;
  order.reserve(diluted.size());
  for (const auto& key : box_dfs_order(keys)) {
    auto it = dil_boxes.find(key);
    const bool full = static_cast<std::int64_t>(range_boxes.at(key).size()) == c * c;
    if (it == dil_boxes.end()) {
      if (full) ++rep.full_boxes;
      continue;
    }
    auto sub = box_subtour(it->second, key, c, opt.exact_cap, ls);
    if (full) {
      ++rep.full_boxes;
      rep.full_subtour_sum += order_length(sub);
    }
    append_oriented(order, std::move(sub));
  }
  rep.certificate = static_cast<double>(rep.full_subtour_sum) +
                    static_cast<double>(2 * c * c + 4) * static_cast<double>(rep.range_boundary) +
                    4.0 * static_cast<double>(rep.range_size) / static_cast<double>(c);
  if (diluted.empty()) {
    if (!range.empty()) rep.result = finish({range.sorted().front()}, false);
    rep.result.length = 0;
    return rep;
  }
  rep.construction_length = order_length(order);
  auto alt = serpentine_order(diluted.sorted());
  auto rows = row_serpentine(diluted.sorted());
  if (order_length(rows) < order_length(alt)) alt = std::move(rows);
  if (ls) {
    order = improve_order(std::move(order), *ls);
    alt = improve_order(std::move(alt), *ls);
  }
  if (order_length(alt) < order_length(order)) order = std::move(alt);
  rep.result = finish(std::move(order), false);
  return rep;
}

// ----------------------------------------------------------- S-path search

std::int64_t s_path_tsp_exact(const WreathGroup& g, const LampConfig& target, Point corner,
                              std::int64_t side, const GeneratingSet& s, std::size_t cap) {
  if (!g.lamps().is_finite()) throw DomainError("s_path_tsp_exact needs a finite lamp group");
  if (side < 1) throw DomainError("s_path_tsp_exact needs side >= 1");
  g.check({Point{}, target});
  auto in_box = [&](const Point& p) {
    return p.x >= corner.x && p.y >= corner.y && p.x < corner.x + side && p.y < corner.y + side;
  };
  for (const auto& [p, v] : target.entries())
    if (!in_box(p)) throw DomainError("target configuration leaves the box");
  if (target.empty()) return 0;

  const auto m = static_cast<std::uint64_t>(g.lamps().order());
  const std::int64_t cells = side * side;
  const std::int64_t margin = s.reach();
  const std::int64_t w = side + 2 * margin;
  const std::int64_t ny = g.base_dim() == 2 ? w : 1;
  const std::int64_t positions = w * ny;
  long double configs = std::pow(static_cast<long double>(m), static_cast<long double>(cells));
  if (g.base_dim() == 1) configs = std::pow(static_cast<long double>(m), static_cast<long double>(side));
  if (configs * positions > static_cast<long double>(cap))
    throw ResourceError("s_path_tsp_exact: state space exceeds the budget");
  const std::int64_t ncell = g.base_dim() == 2 ? cells : side;

  std::vector<std::uint64_t> power(ncell + 1, 1);
  for (std::int64_t i = 1; i <= ncell; ++i) power[i] = power[i - 1] * m;
  const std::uint64_t nconf = power[ncell];
  auto cell_of = [&](const Point& p) -> std::int64_t {
    if (g.base_dim() == 1) return p.x - corner.x;
    return (p.x - corner.x) + side * (p.y - corner.y);
  };
  auto in_region = [&](const Point& p) {
    if (g.base_dim() == 1) return p.y == 0 && p.x >= corner.x - margin && p.x < corner.x + side + margin;
    return p.x >= corner.x - margin && p.y >= corner.y - margin && p.x < corner.x + side + margin &&
           p.y < corner.y + side + margin;
  };
  auto in_cells = [&](const Point& p) {
    if (g.base_dim() == 1) return p.y == 0 && p.x >= corner.x && p.x < corner.x + side;
    return in_box(p);
  };
  auto pos_index = [&](const Point& p) -> std::int64_t {
    if (g.base_dim() == 1) return p.x - (corner.x - margin);
    return (p.x - (corner.x - margin)) + w * (p.y - (corner.y - margin));
  };
  auto pos_point = [&](std::int64_t idx) -> Point {
    if (g.base_dim() == 1) return {idx + corner.x - margin, 0};
    return {idx % w + corner.x - margin, idx / w + corner.y - margin};
  };
  std::uint64_t goal = 0;
  for (const auto& [p, v] : target.entries()) goal += power[cell_of(p)] * static_cast<std::uint64_t>(v);

  const auto moves = move_table(g, s);
  std::vector<std::uint16_t> dist(static_cast<std::size_t>(positions) * nconf, 0xFFFF);
  std::vector<std::uint64_t> frontier, next;
  for (std::int64_t p = 0; p < positions; ++p) {
    dist[static_cast<std::uint64_t>(p) * nconf] = 0;
    frontier.push_back(static_cast<std::uint64_t>(p) * nconf);
  }
  for (std::uint16_t depth = 0; !frontier.empty(); ++depth) {
    if (depth == 0xFFFE) throw ResourceError("s_path_tsp_exact: path length overflow");
    next.clear();
    for (const auto state : frontier) {
      const auto pidx = static_cast<std::int64_t>(state / nconf);
      const std::uint64_t conf = state % nconf;
      if (conf == goal) return depth;
      const Point here = pos_point(pidx);
      for (const auto& [mv, e] : moves) {
        const Point to = here + e.position;
        if (!in_region(to)) continue;
        std::uint64_t nc = conf;
        bool ok = true;
        for (const auto& [off, val] : e.lamps.entries()) {
          const Point site = here + off;
          if (!in_cells(site)) {
            ok = false;
            break;
          }
          const auto ci = cell_of(site);
          const auto digit = static_cast<std::int64_t>((nc / power[ci]) % m);
          const auto nd = g.lamps().op(digit, val);
          nc = nc - static_cast<std::uint64_t>(digit) * power[ci] +
               static_cast<std::uint64_t>(nd) * power[ci];
        }
        if (!ok) continue;
        const std::uint64_t ns = static_cast<std::uint64_t>(pos_index(to)) * nconf + nc;
        if (dist[ns] != 0xFFFF) continue;
        dist[ns] = depth + 1;
        next.push_back(ns);
      }
    }
    frontier.swap(next);
  }
  throw DomainError("target configuration is unreachable inside the box");
}

// ---------------------------------------------------------------------- CSV

std::vector<Point> read_points_csv(std::istream& in) {
  std::vector<Point> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    Point p;
    const char* b = line.data();
    const char* e = b + line.size();
    if (comma == std::string::npos ||
        std::from_chars(b, b + comma, p.x).ec != std::errc{} ||
        std::from_chars(b + comma + 1, e, p.y).ec != std::errc{})
      throw ConfigError("bad point on line " + std::to_string(lineno) + ": " + line);
    out.push_back(p);
  }
  return out;
}

void write_points_csv(std::ostream& out, const std::vector<Point>& points) {
  for (const auto& p : points) out << p.x << ',' << p.y << '\n';
}

}  // namespace ldl
