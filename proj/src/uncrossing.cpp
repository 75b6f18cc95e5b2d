#include "ldl/uncrossing.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "ldl/errors.hpp"

namespace ldl {

// ---------------------------------------------------------------- BoxDomain

BoxDomain::BoxDomain(Point corner, std::int64_t side) : corner_(corner), side_(side) {
  if (side < 1) throw DomainError("box side must be >= 1");
  const auto x0 = corner.x, y0 = corner.y, x1 = corner.x + side - 1, y1 = corner.y + side - 1;
  if (side == 1) {
    cycle_.push_back(corner);
  } else {
    for (auto y = y0; y < y1; ++y) cycle_.push_back({x0, y});
    for (auto x = x0; x < x1; ++x) cycle_.push_back({x, y1});
    for (auto y = y1; y > y0; --y) cycle_.push_back({x1, y});
    for (auto x = x1; x > x0; --x) cycle_.push_back({x, y0});
  }
  for (std::size_t i = 0; i < cycle_.size(); ++i) index_[cycle_[i]] = static_cast<std::int64_t>(i);
}

bool BoxDomain::contains(const Point& p) const {
  return p.x >= corner_.x && p.y >= corner_.y && p.x < corner_.x + side_ && p.y < corner_.y + side_;
}

std::optional<std::int64_t> BoxDomain::index_of(const Point& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::int64_t BoxDomain::nearest_index(const Point& p) const {
  std::int64_t best = 0, bd = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < cycle_.size(); ++i) {
    const auto dist = l1_distance(p, cycle_[i]);
    if (dist < bd) {
      bd = dist;
      best = static_cast<std::int64_t>(i);
    }
  }
  return best;
}

std::int64_t BoxDomain::cycle_distance(std::int64_t a, std::int64_t b) const {
  const auto n = perimeter();
  const auto cw = ((b - a) % n + n) % n;
  return std::min(cw, n - cw);
}

std::vector<Point> BoxDomain::walk(std::int64_t a, std::int64_t b,
                                   std::optional<bool> clockwise) const {
  const auto n = perimeter();
  const auto cw = ((b - a) % n + n) % n;
  const bool dir = clockwise ? *clockwise : cw <= n - cw;
  std::vector<Point> out{cycle_[a]};
  for (auto i = a; i != b;) {
    i = dir ? (i + 1) % n : (i + n - 1) % n;
    out.push_back(cycle_[i]);
  }
  return out;
}

bool in_open_arc(std::int64_t a, std::int64_t b, std::int64_t x, std::int64_t n) {
  const auto to_b = ((b - a) % n + n) % n;
  const auto to_x = ((x - a) % n + n) % n;
  return to_x > 0 && to_x < to_b;
}

bool essential_crossing(std::int64_t a1, std::int64_t b1, std::int64_t a2, std::int64_t b2,
                        std::int64_t n) {
  if (a1 == b1 || a2 == b2) return false;
  if (a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2)
    throw DomainError("paths share an endpoint; normalize the collection first");
  return in_open_arc(a1, b1, a2, n) != in_open_arc(a1, b1, b2, n);
}

namespace {

std::int64_t boundary_index(const BoxDomain& d, const Point& p) {
  auto i = d.index_of(p);
  if (!i) throw DomainError("path endpoint is not on the boundary of the box");
  return *i;
}

void append_path(std::vector<Point>& out, const std::vector<Point>& more) {
  for (std::size_t i = 0; i < more.size(); ++i) {
    if (i == 0 && !out.empty() && out.back() == more[0]) continue;
    out.push_back(more[i]);
  }
}

GridPath reversed(GridPath p) {
  std::reverse(p.vertices.begin(), p.vertices.end());
  return p;
}

// Good-path induction. `ends(p)` gives the cyclic keys of a path's start and
// end; `uncross(p, q)` must return (start(p) -> end(q), start(q) -> end(p)).
template <class Path, class Ends, class Reverse, class Uncross>
std::pair<std::vector<Path>, std::int64_t> good_path_induction(std::vector<Path> active,
                                                               Ends ends, Reverse rev,
                                                               Uncross uncross) {
  std::vector<Path> done;
  std::int64_t count = 0;
  while (active.size() > 1) {
    const std::size_t n = active.size();
    using Key = decltype(ends(active[0]).first);
    std::vector<Key> keys;
    std::vector<std::pair<Key, Key>> e(n);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = ends(active[i]);
      keys.push_back(e[i].first);
      if (!(e[i].second == e[i].first)) keys.push_back(e[i].second);
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
      throw DomainError("paths share an endpoint; normalize the collection first");
    const auto m = static_cast<std::int64_t>(keys.size());
    auto rank = [&](const Key& k) {
      return static_cast<std::int64_t>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
    };
    std::vector<std::int64_t> ra(n), rb(n);
    std::vector<std::int64_t> owner(m);
    for (std::size_t i = 0; i < n; ++i) {
      ra[i] = rank(e[i].first);
      rb[i] = rank(e[i].second);
      owner[ra[i]] = static_cast<std::int64_t>(i);
      owner[rb[i]] = static_cast<std::int64_t>(i);
    }
    auto other_end = [&](std::int64_t i, std::int64_t r) { return ra[i] == r ? rb[i] : ra[i]; };
    auto arc_empty = [&](std::int64_t a, std::int64_t b) {
      return ((b - a) % m + m) % m == 1 % m;
    };

    std::int64_t good = -1;
    for (std::size_t i = 0; i < n && good < 0; ++i)
      if (ra[i] == rb[i] || arc_empty(ra[i], rb[i]) || arc_empty(rb[i], ra[i]))
        good = static_cast<std::int64_t>(i);
    if (good < 0) {
      std::int64_t cur = 0, a = ra[0], b = rb[0];
      while (true) {
        const std::int64_t x = (a + 1) % m;
        if (x == b) {  // nothing inside: cur is good after all
          good = cur;
          break;
        }
        const std::int64_t r = owner[x];
        const std::int64_t f = other_end(r, x);
        if (in_open_arc(a, b, f, m)) {
          cur = r;
          a = x;
          b = f;
          continue;
        }
        Path p = active[cur];
        if (ra[cur] != a) p = rev(p);
        Path q = active[r];
        if (rb[r] != x) q = rev(q);
        auto [q1, q2] = uncross(p, q);
        ++count;
        active[cur] = std::move(q1);  // a -> x, good next round
        active[r] = std::move(q2);
        break;
      }
      if (good < 0) continue;
    }
    done.push_back(std::move(active[good]));
    active.erase(active.begin() + good);
  }
  for (auto& p : active) done.push_back(std::move(p));
  return {std::move(done), count};
}

}  // namespace

bool essential_crossing(const GridPath& p1, const GridPath& p2, const BoxDomain& d) {
  if (p1.vertices.empty() || p2.vertices.empty()) throw DomainError("empty path");
  return essential_crossing(boundary_index(d, p1.vertices.front()),
                            boundary_index(d, p1.vertices.back()),
                            boundary_index(d, p2.vertices.front()),
                            boundary_index(d, p2.vertices.back()), d.perimeter());
}

std::vector<GridPath> normalize_endpoints(std::vector<GridPath> paths, const BoxDomain& d) {
  for (const auto& p : paths) {
    if (p.vertices.empty()) throw DomainError("empty path");
    boundary_index(d, p.vertices.front());
    boundary_index(d, p.vertices.back());
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < paths.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < paths.size() && !changed; ++j) {
        const auto& a = paths[i].vertices;
        const auto& b = paths[j].vertices;
        std::vector<Point> joined;
        if (a.back() == b.front()) {
          joined = a;
          append_path(joined, b);
        } else if (a.back() == b.back()) {
          joined = a;
          append_path(joined, reversed(paths[j]).vertices);
        } else if (a.front() == b.front()) {
          joined = reversed(paths[i]).vertices;
          append_path(joined, b);
        } else if (a.front() == b.back()) {
          joined = b;
          append_path(joined, a);
        } else {
          continue;
        }
        paths[i].vertices = std::move(joined);
        paths.erase(paths.begin() + j);
        changed = true;
      }
    }
  }
  return paths;
}

std::optional<Point> first_common_point(const GridPath& p1, const GridPath& p2) {
  PointHashSet in2(p2.vertices.begin(), p2.vertices.end());
  for (const auto& v : p1.vertices)
    if (in2.count(v)) return v;
  return std::nullopt;
}

std::pair<GridPath, GridPath> uncross_pair(const GridPath& p1, const GridPath& p2, Point o) {
  const auto i1 = std::find(p1.vertices.begin(), p1.vertices.end(), o);
  const auto i2 = std::find(p2.vertices.begin(), p2.vertices.end(), o);
  if (i1 == p1.vertices.end() || i2 == p2.vertices.end())
    throw DomainError("uncrossing point is not on both paths");
  GridPath q1, q2;
  q1.vertices.assign(p1.vertices.begin(), i1 + 1);
  q1.vertices.insert(q1.vertices.end(), i2 + 1, p2.vertices.end());
  q2.vertices.assign(p2.vertices.begin(), i2 + 1);
  q2.vertices.insert(q2.vertices.end(), i1 + 1, p1.vertices.end());
  return {std::move(q1), std::move(q2)};
}

UncrossResult uncross_all(std::vector<GridPath> paths, const BoxDomain& d) {
  auto ends = [&](const GridPath& p) {
    return std::pair{boundary_index(d, p.vertices.front()), boundary_index(d, p.vertices.back())};
  };
  auto unc = [&](const GridPath& p, const GridPath& q) {
    auto o = first_common_point(p, q);
    if (!o) throw DomainError("essentially crossing paths do not meet inside the box");
    return uncross_pair(p, q, *o);
  };
  for (const auto& p : paths)
    if (p.vertices.empty()) throw DomainError("empty path");
  auto [out, count] = good_path_induction(std::move(paths), ends, reversed, unc);
  return {std::move(out), count};
}

// ------------------------------------------------------------------ joining

namespace {

struct Chord {
  std::int64_t a, b;
  const GridPath* path;
};

// Order and orientation of the chords minimising the perimeter walked
// between consecutive chords.
std::vector<std::pair<std::size_t, bool>> chord_order(const std::vector<Chord>& ch,
                                                      const BoxDomain& d) {
  const std::size_t k = ch.size();
  auto start = [&](std::size_t j, bool r) { return r ? ch[j].b : ch[j].a; };
  auto end = [&](std::size_t j, bool r) { return r ? ch[j].a : ch[j].b; };
  std::vector<std::pair<std::size_t, bool>> best_seq;
  if (k == 0) return best_seq;
  if (k <= 14) {
    const std::size_t full = std::size_t{1} << k;
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> dp(full * k * 2, kInf);
    std::vector<std::int32_t> par(full * k * 2, -1);
    auto at = [&](std::size_t mask, std::size_t j, bool r) { return (mask * k + j) * 2 + r; };
    for (std::size_t j = 0; j < k; ++j)
      for (bool r : {false, true}) dp[at(std::size_t{1} << j, j, r)] = 0;
    for (std::size_t mask = 1; mask < full; ++mask)
      for (std::size_t j = 0; j < k; ++j) {
        if (!(mask >> j & 1)) continue;
        for (bool r : {false, true}) {
          const auto cur = dp[at(mask, j, r)];
          if (cur >= kInf) continue;
          for (std::size_t t = 0; t < k; ++t) {
            if (mask >> t & 1) continue;
            for (bool rt : {false, true}) {
              const auto nm = mask | (std::size_t{1} << t);
              const auto c = cur + d.cycle_distance(end(j, r), start(t, rt));
              if (c < dp[at(nm, t, rt)]) {
                dp[at(nm, t, rt)] = c;
                par[at(nm, t, rt)] = static_cast<std::int32_t>(j * 2 + r);
              }
            }
          }
        }
      }
    std::size_t bj = 0;
    bool br = false;
    for (std::size_t j = 0; j < k; ++j)
      for (bool r : {false, true})
        if (dp[at(full - 1, j, r)] < dp[at(full - 1, bj, br)]) {
          bj = j;
          br = r;
        }
    std::size_t mask = full - 1;
    std::size_t j = bj;
    bool r = br;
    while (true) {
      best_seq.push_back({j, r});
      const auto p = par[at(mask, j, r)];
      mask ^= std::size_t{1} << j;
      if (p < 0) break;
      j = static_cast<std::size_t>(p / 2);
      r = (p % 2) != 0;
    }
    std::reverse(best_seq.begin(), best_seq.end());
    return best_seq;
  }
  // Many chords: nearest-endpoint chaining from every start.
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t s = 0; s < k; ++s)
    for (bool rs : {false, true}) {
      std::vector<char> used(k, 0);
      std::vector<std::pair<std::size_t, bool>> seq{{s, rs}};
      used[s] = 1;
      std::int64_t cost = 0;
      for (std::size_t step = 1; step < k; ++step) {
        const auto here = end(seq.back().first, seq.back().second);
        std::int64_t bd = std::numeric_limits<std::int64_t>::max();
        std::pair<std::size_t, bool> next{0, false};
        for (std::size_t t = 0; t < k; ++t) {
          if (used[t]) continue;
          for (bool rt : {false, true}) {
            const auto dist = d.cycle_distance(here, start(t, rt));
            if (dist < bd) {
              bd = dist;
              next = {t, rt};
            }
          }
        }
        used[next.first] = 1;
        seq.push_back(next);
        cost += bd;
      }
      if (cost < best) {
        best = cost;
        best_seq = seq;
      }
    }
  return best_seq;
}

// Walks the perimeter from `from` in one direction, inserting every loop when
// its point is reached; returns the added perimeter length.
std::int64_t sweep_loops(std::vector<Point>& out, std::int64_t from, bool clockwise,
                         const std::map<std::int64_t, std::vector<const GridPath*>>& loops,
                         const BoxDomain& d) {
  const auto n = d.perimeter();
  std::int64_t far = 0;
  for (const auto& [idx, _] : loops) {
    const auto dist = clockwise ? ((idx - from) % n + n) % n : ((from - idx) % n + n) % n;
    far = std::max(far, dist);
  }
  std::int64_t i = from;
  for (std::int64_t step = 0;; ++step) {
    auto it = loops.find(i);
    if (it != loops.end())
      for (const auto* p : it->second) append_path(out, p->vertices);
    if (step == far) break;
    i = clockwise ? (i + 1) % n : (i + n - 1) % n;
    append_path(out, {d.cycle()[i]});
  }
  return far;
}

std::int64_t loop_sweep_cost(std::int64_t from, bool clockwise,
                             const std::map<std::int64_t, std::vector<const GridPath*>>& loops,
                             std::int64_t n) {
  std::int64_t far = 0;
  for (const auto& [idx, _] : loops)
    far = std::max(far, clockwise ? ((idx - from) % n + n) % n : ((from - idx) % n + n) % n);
  return far;
}

}  // namespace

GridPath join_noncrossing(const std::vector<GridPath>& paths, const BoxDomain& d) {
  std::vector<Chord> chords;
  std::map<std::int64_t, std::vector<const GridPath*>> loops;
  for (const auto& p : paths) {
    if (p.vertices.empty()) throw DomainError("empty path");
    const auto a = boundary_index(d, p.vertices.front());
    const auto b = boundary_index(d, p.vertices.back());
    if (a == b)
      loops[a].push_back(&p);
    else
      chords.push_back({a, b, &p});
  }
  for (std::size_t i = 0; i < chords.size(); ++i)
    for (std::size_t j = i + 1; j < chords.size(); ++j) {
      const auto& u = chords[i];
      const auto& v = chords[j];
      if (u.a == v.a || u.a == v.b || u.b == v.a || u.b == v.b) continue;
      if (essential_crossing(u.a, u.b, v.a, v.b, d.perimeter()))
        throw DomainError("join_noncrossing: input paths cross essentially");
    }
  GridPath out;
  const auto n = d.perimeter();
  if (chords.empty()) {
    if (loops.empty()) return out;
    // Start just after the widest gap between loop points and sweep clockwise.
    std::int64_t start = loops.begin()->first, widest = -1;
    std::int64_t prev = std::prev(loops.end())->first;
    for (const auto& [idx, _] : loops) {
      const auto gap = loops.size() == 1 ? n : ((idx - prev) % n + n) % n;
      if (gap > widest) {
        widest = gap;
        start = idx;
      }
      prev = idx;
    }
    out.vertices.push_back(d.cycle()[start]);
    sweep_loops(out.vertices, start, true, loops, d);
    return out;
  }
  const auto seq = chord_order(chords, d);
  auto trail = [&](bool backwards) {
    std::vector<Point> v;
    std::vector<std::pair<std::size_t, bool>> s = seq;
    if (backwards) {
      std::reverse(s.begin(), s.end());
      for (auto& e : s) e.second = !e.second;
    }
    std::int64_t here = -1;
    for (const auto& [j, r] : s) {
      const auto& c = chords[j];
      const auto from = r ? c.b : c.a;
      if (here >= 0) append_path(v, d.walk(here, from));
      append_path(v, r ? reversed(*c.path).vertices : c.path->vertices);
      here = r ? c.a : c.b;
    }
    return std::pair{v, here};
  };
  if (loops.empty()) {
    out.vertices = trail(false).first;
    return out;
  }
  // Loops go after the trail, in whichever orientation and sweep direction
  // is cheaper.
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  bool best_back = false, best_cw = true;
  for (bool back : {false, true}) {
    const auto& [j, r] = back ? seq.front() : seq.back();
    const auto end_idx = back ? (r ? chords[j].b : chords[j].a) : (r ? chords[j].a : chords[j].b);
    for (bool cw : {true, false}) {
      const auto c = loop_sweep_cost(end_idx, cw, loops, n);
      if (c < best) {
        best = c;
        best_back = back;
        best_cw = cw;
      }
    }
  }
  auto [v, here] = trail(best_back);
  sweep_loops(v, here, best_cw, loops, d);
  out.vertices = std::move(v);
  return out;
}

// ----------------------------------------------------------------- S-paths

SPathUncrosser::SPathUncrosser(WreathGroup g, GeneratingSet s, BoxDomain d)
    : group_(std::move(g)), gens_(std::move(s)), domain_(std::move(d)) {}

SPathUncrosser::Key SPathUncrosser::key(const Point& p) const {
  const auto i = domain_.nearest_index(p);
  return {i, l1_distance(p, domain_.cycle()[i]), p};
}

GridPath SPathUncrosser::inflate(const SPath& p, std::vector<std::size_t>* vertex_index) const {
  const auto proj = path_projection(group_, gens_, p);
  GridPath hat;
  hat.vertices.push_back(proj[0]);
  if (vertex_index) vertex_index->assign(1, 0);
  for (std::size_t k = 1; k < proj.size(); ++k) {
    append_path(hat.vertices, realize({proj[k - 1], proj[k]}).vertices);
    if (vertex_index) vertex_index->push_back(hat.vertices.size() - 1);
  }
  return hat;
}

bool SPathUncrosser::crossing(const SPath& p1, const SPath& p2) const {
  const auto a1 = key(p1.start.position), b1 = key(path_end(group_, gens_, p1).position);
  const auto a2 = key(p2.start.position), b2 = key(path_end(group_, gens_, p2).position);
  if (a1 == b1 || a2 == b2) return false;
  std::vector<Key> k{a1, b1, a2, b2};
  std::sort(k.begin(), k.end());
  if (std::adjacent_find(k.begin(), k.end()) != k.end())
    throw DomainError("S-paths share an endpoint; normalize the collection first");
  auto r = [&](const Key& x) {
    return static_cast<std::int64_t>(std::find(k.begin(), k.end(), x) - k.begin());
  };
  return essential_crossing(r(a1), r(b1), r(a2), r(b2), 4);
}

const std::vector<Move>& SPathUncrosser::connector(const Point& target) {
  auto it = connectors_.find(target);
  if (it != connectors_.end()) return it->second;
  const auto moves = move_table(group_, gens_);
  const std::int64_t bound = l1_norm(target) + 4 * std::max<std::int64_t>(1, gens_.reach()) + 4;
  std::map<Point, std::pair<Point, std::size_t>> parent;
  std::deque<Point> queue{Point{}};
  parent[Point{}] = {Point{}, moves.size()};
  while (!queue.empty() && !parent.count(target)) {
    const Point cur = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < moves.size(); ++k) {
      const Point nx = cur + moves[k].second.position;
      if (l1_norm(nx) > bound || parent.count(nx)) continue;
      if (group_.base_dim() == 1 && nx.y != 0) continue;
      parent[nx] = {cur, k};
      queue.push_back(nx);
    }
  }
  if (!parent.count(target)) throw DomainError("generating set cannot move the walker by the offset");
  std::vector<Move> word;
  for (Point p = target; !(p == Point{});) {
    const auto& [prev, k] = parent.at(p);
    word.push_back(moves[k].first);
    p = prev;
  }
  std::reverse(word.begin(), word.end());
  return connectors_.emplace(target, std::move(word)).first->second;
}

std::int64_t SPathUncrosser::constant() {
  const auto r = 2 * gens_.reach();
  std::int64_t c = 0;
  for (auto dx = -r; dx <= r; ++dx)
    for (auto dy = -r; dy <= r; ++dy) {
      if (std::abs(dx) + std::abs(dy) > r) continue;
      if (group_.base_dim() == 1 && dy != 0) continue;
      c = std::max(c, 2 * static_cast<std::int64_t>(connector({dx, dy}).size()));
    }
  return c;
}

std::vector<SPath> SPathUncrosser::normalize_endpoints(std::vector<SPath> paths) const {
  auto end_pos = [&](const SPath& p) { return path_end(group_, gens_, p).position; };
  auto concat = [](SPath a, const SPath& b) {
    a.moves.insert(a.moves.end(), b.moves.begin(), b.moves.end());
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < paths.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < paths.size() && !changed; ++j) {
        const auto& a = paths[i];
        const auto& b = paths[j];
        const Point as = a.start.position, ae = end_pos(a);
        const Point bs = b.start.position, be = end_pos(b);
        SPath joined;
        if (ae == bs) {
          joined = concat(a, b);
        } else if (ae == be) {
          joined = concat(a, reverse_path(group_, gens_, b));
        } else if (as == bs) {
          joined = concat(reverse_path(group_, gens_, a), b);
        } else if (as == be) {
          joined = concat(b, a);
        } else {
          continue;
        }
        paths[i] = std::move(joined);
        paths.erase(paths.begin() + j);
        changed = true;
      }
    }
  }
  return paths;
}

std::pair<SPath, SPath> SPathUncrosser::uncross_pair(const SPath& p1, const SPath& p2) {
  std::vector<std::size_t> idx1, idx2;
  const auto hat1 = inflate(p1, &idx1);
  const auto hat2 = inflate(p2, &idx2);
  std::unordered_map<Point, std::size_t, PointHash> first2;
  for (std::size_t i = 0; i < hat2.vertices.size(); ++i) first2.emplace(hat2.vertices[i], i);
  std::size_t h1 = 0, h2 = 0;
  bool met = false;
  for (std::size_t i = 0; i < hat1.vertices.size() && !met; ++i) {
    auto it = first2.find(hat1.vertices[i]);
    if (it != first2.end()) {
      h1 = i;
      h2 = it->second;
      met = true;
    }
  }
  if (!met) throw DomainError("projections of the S-paths do not meet");
  std::size_t i1 = 0;
  for (std::size_t k = 0; k < idx1.size(); ++k)
    if (idx1[k] <= h1) i1 = k;
  std::size_t i2 = idx2.size() - 1;
  for (std::size_t k = idx2.size(); k-- > 0;)
    if (idx2[k] >= h2) i2 = k;
  const auto proj1 = path_projection(group_, gens_, p1);
  const auto proj2 = path_projection(group_, gens_, p2);
  const auto& w = connector(proj2[i2] - proj1[i1]);
  std::vector<Move> back(w.rbegin(), w.rend());
  for (auto& m : back) m.inverse = !m.inverse;
  SPath q1{p1.start, {}}, q2{p2.start, {}};
  q1.moves.assign(p1.moves.begin(), p1.moves.begin() + i1);
  q1.moves.insert(q1.moves.end(), w.begin(), w.end());
  q1.moves.insert(q1.moves.end(), p2.moves.begin() + i2, p2.moves.end());
  q2.moves.assign(p2.moves.begin(), p2.moves.begin() + i2);
  q2.moves.insert(q2.moves.end(), back.begin(), back.end());
  q2.moves.insert(q2.moves.end(), p1.moves.begin() + i1, p1.moves.end());
  return {std::move(q1), std::move(q2)};
}

SPathUncrosser::Result SPathUncrosser::uncross_all(std::vector<SPath> paths) {
  if (!group_.lamps().is_involutive())
    throw UnsupportedOperation("S-path uncrossing needs an involutive lamp group");
  std::int64_t added = 0;
  auto ends = [&](const SPath& p) {
    return std::pair{key(p.start.position), key(path_end(group_, gens_, p).position)};
  };
  auto rev = [&](const SPath& p) { return reverse_path(group_, gens_, p); };
  auto unc = [&](const SPath& p, const SPath& q) {
    auto out = uncross_pair(p, q);
    added += static_cast<std::int64_t>(out.first.length() + out.second.length()) -
             static_cast<std::int64_t>(p.length() + q.length());
    return out;
  };
  auto [out, count] = good_path_induction(std::move(paths), ends, rev, unc);
  return {std::move(out), count, added};
}

LampConfig total_tau(const WreathGroup& g, const GeneratingSet& s, const std::vector<SPath>& paths) {
  LampConfig t;
  for (const auto& p : paths) t = g.sum(t, path_tau(g, s, p));
  return t;
}

}  // namespace ldl
