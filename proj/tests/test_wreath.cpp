#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "ldl/errors.hpp"
#include "ldl/tsp.hpp"
#include "ldl/wreath.hpp"

using namespace ldl;

namespace {

// S_3 with 0 = id, 1 = (12), 2 = (23), 3 = (13), 4 = (123), 5 = (132).
std::vector<std::vector<std::int64_t>> s3_table() {
  return {{0, 1, 2, 3, 4, 5}, {1, 0, 4, 5, 2, 3}, {2, 5, 0, 4, 3, 1},
          {3, 4, 5, 0, 1, 2}, {4, 3, 1, 2, 5, 0}, {5, 2, 3, 1, 0, 4}};
}

WreathElement random_element(Rng& rng, const WreathGroup& g) {
  auto coord = [&] { return static_cast<std::int64_t>(rng.below(7)) - 3; };
  WreathElement e;
  e.position = {coord(), g.base_dim() == 2 ? coord() : 0};
  const auto k = rng.below(5);
  for (std::uint64_t i = 0; i < k; ++i) {
    Point p{coord(), g.base_dim() == 2 ? coord() : 0};
    std::int64_t v = g.lamps().is_finite()
                         ? static_cast<std::int64_t>(rng.below(g.lamps().order()))
                         : coord();
    e.lamps.set(p, v);
  }
  return e;
}

// Direct evaluation of (x, f)(y, h) = (x + y, f * tau_x h) over std::map.
WreathElement oracle_multiply(const LampGroup& l, const WreathElement& g, const WreathElement& h) {
  std::map<Point, std::int64_t> f;
  for (const auto& [p, v] : g.lamps.entries()) f[p] = v;
  for (const auto& [p, v] : h.lamps.entries()) {
    const Point site = p + g.position;
    f[site] = l.op(f.count(site) ? f[site] : 0, v);
  }
  WreathElement out;
  out.position = g.position + h.position;
  for (const auto& [p, v] : f)
    if (v != 0) out.lamps.set(p, v);
  return out;
}

using Ball = std::unordered_map<WreathElement, std::int64_t, WreathElementHash>;

}  // namespace

TEST_CASE("LampGroup tables") {
  auto z2 = LampGroup::cyclic(2);
  CHECK(z2.is_involutive());
  CHECK(z2.order() == 2);
  auto z3 = LampGroup::cyclic(3);
  CHECK_FALSE(z3.is_involutive());
  CHECK(z3.inverse(1) == 2);
  auto s3 = LampGroup::from_table(s3_table());
  CHECK(s3.op(1, 2) == 4);
  CHECK(s3.op(2, 1) == 5);
  for (auto a : s3.elements()) CHECK(s3.op(a, s3.inverse(a)) == 0);
  auto z = LampGroup::integers();
  CHECK_FALSE(z.is_finite());
  CHECK(z.op(3, -5) == -2);
  CHECK(z.inverse(4) == -4);
  CHECK_FALSE(z.is_involutive());

  CHECK_THROWS_AS(LampGroup::from_table({{0, 1}, {1, 1}}), ConfigError);
  CHECK_THROWS_AS(LampGroup::from_table({{1, 0}, {0, 1}}), ConfigError);
  CHECK_THROWS_AS(LampGroup::from_table({{0, 1, 2}, {1, 2}, {2, 0, 1}}), ConfigError);
  CHECK_THROWS_AS(LampGroup::cyclic(1), ConfigError);

  std::istringstream in("3\n0 1 2\n1 2 0\n2 0 1\n");
  CHECK(LampGroup::parse_table(in) == z3);
  std::istringstream bad("3\n0 1 2\n1 2\n");
  CHECK_THROWS_AS(LampGroup::parse_table(bad), ConfigError);
}

TEST_CASE("multiply: examples") {
  WreathGroup g(2, LampGroup::cyclic(2));
  WreathElement a{{1, 0}, {}};
  auto b = g.lamp_at({0, 0}, 1);
  auto ab = g.multiply(a, b);
  CHECK(ab.position == Point{1, 0});
  CHECK(ab.lamps.get({1, 0}) == 1);
  CHECK(ab.lamps.size() == 1);
  CHECK(g.multiply(ab, g.identity()) == ab);
  CHECK(g.invert(g.identity()) == g.identity());
  CHECK(g.invert(a) == WreathElement{{-1, 0}, {}});
  // Z/2: (x, f)^-1 = (-x, tau_{-x} f)
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    auto e = random_element(rng, g);
    auto inv = g.invert(e);
    CHECK(inv == WreathElement{-e.position, e.lamps.translated(-e.position)});
    CHECK(g.multiply(e, inv) == g.identity());
  }
}

TEST_CASE("multiply: mismatched elements") {
  WreathGroup g2(2, LampGroup::cyclic(2));
  WreathGroup g1(1, LampGroup::cyclic(3));
  auto e3 = g1.lamp_at({0, 0}, 2);
  CHECK_THROWS_AS(g2.multiply(e3, g2.identity()), GroupMismatch);
  WreathElement planar{{0, 1}, {}};
  CHECK_THROWS_AS(g1.multiply(planar, planar), GroupMismatch);
  CHECK_THROWS_AS(g1.lamp_at({0, 1}, 1), GroupMismatch);
}

TEST_CASE("group axioms on random triples") {
  const std::vector<WreathGroup> groups{
      WreathGroup(2, LampGroup::cyclic(2)), WreathGroup(2, LampGroup::cyclic(3)),
      WreathGroup(1, LampGroup::integers()), WreathGroup(2, LampGroup::from_table(s3_table())),
      WreathGroup(2, LampGroup::integers())};
  Rng rng(77);
  for (const auto& g : groups) {
    for (int i = 0; i < 1000; ++i) {
      auto a = random_element(rng, g), b = random_element(rng, g), c = random_element(rng, g);
      CHECK(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
      CHECK(g.multiply(a, g.identity()) == a);
      CHECK(g.multiply(g.identity(), a) == a);
      CHECK(g.multiply(a, g.invert(a)) == g.identity());
      CHECK(g.multiply(g.invert(a), a) == g.identity());
      CHECK(g.multiply(a, b) == oracle_multiply(g.lamps(), a, b));
    }
  }
}

TEST_CASE("path_end and path_tau") {
  WreathGroup g(2, LampGroup::cyclic(2));
  auto s = GeneratingSet::standard(g);
  REQUIRE(s.labels == std::vector<std::string>{"s1", "s2", "delta"});
  SPath empty;
  CHECK(path_tau(g, s, empty).empty());
  SPath d{g.identity(), {{2, false}}};
  CHECK(path_tau(g, s, d).entries() == std::vector<LampConfig::Entry>{{{0, 0}, 1}});
  SPath dsd{g.identity(), {{2, false}, {0, false}, {2, false}}};
  CHECK(path_tau(g, s, dsd).entries() ==
        std::vector<LampConfig::Entry>{{{0, 0}, 1}, {{1, 0}, 1}});
  CHECK(path_end(g, s, dsd).position == Point{1, 0});
  CHECK(path_projection(g, s, dsd) == std::vector<Point>{{0, 0}, {0, 0}, {1, 0}, {1, 0}});
  SPath bad{g.identity(), {{3, false}}};
  CHECK_THROWS_AS(path_end(g, s, bad), DomainError);
  // tau is relative to the start configuration
  SPath shifted{WreathElement{{5, 5}, {}}, dsd.moves};
  shifted.start.lamps.set({5, 5}, 1);
  CHECK(path_tau(g, s, shifted).entries() ==
        std::vector<LampConfig::Entry>{{{5, 5}, 1}, {{6, 5}, 1}});
}

TEST_CASE("reverse_path") {
  WreathGroup g(2, LampGroup::cyclic(2));
  auto s = GeneratingSet::standard(g);
  SPath d{g.identity(), {{2, false}}};
  CHECK(path_tau(g, s, reverse_path(g, s, d)) == path_tau(g, s, d));
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    SPath p{random_element(rng, g), {}};
    for (int i = 0; i < 20; ++i) p.moves.push_back({rng.below(3), rng.bernoulli(0.5)});
    auto r = reverse_path(g, s, p);
    CHECK(r.length() == p.length());
    CHECK(path_tau(g, s, r) == path_tau(g, s, p));
    auto proj = path_projection(g, s, p), rproj = path_projection(g, s, r);
    std::reverse(rproj.begin(), rproj.end());
    CHECK(proj == rproj);
    auto rr = reverse_path(g, s, r);
    CHECK(path_tau(g, s, rr) == path_tau(g, s, p));
    CHECK(path_end(g, s, rr).position == path_end(g, s, p).position);
  }
  WreathGroup g3(2, LampGroup::cyclic(3));
  auto s3 = GeneratingSet::standard(g3);
  CHECK_THROWS_AS(reverse_path(g3, s3, SPath{g3.identity(), {{2, false}}}), UnsupportedOperation);
}

TEST_CASE("word_length_bfs: small elements") {
  WreathGroup g(2, LampGroup::cyclic(2));
  auto s = GeneratingSet::standard(g);
  CHECK(word_length_bfs(g, g.identity(), s, 5) == 0);
  CHECK(word_length_bfs(g, s.generators[2], s, 5) == 1);
  CHECK(word_length_bfs(g, s.generators[0], s, 5) == 1);
  // s1 delta s1^-1
  auto far = g.lamp_at({1, 0}, 1);
  CHECK(word_length_bfs(g, far, s, 5) == 3);
  CHECK_FALSE(word_length_bfs(g, far, s, 2).has_value());
  // delta s1 s1 delta s1^-1 s1^-1
  WreathElement two;
  two.lamps.set({0, 0}, 1);
  two.lamps.set({2, 0}, 1);
  auto l = word_length_bfs(g, two, s, 10);
  REQUIRE(l.has_value());
  CHECK(*l == 6);
  CHECK(*l >= exact_tsp(two.lamps.support()).length + 2);
  auto w = shortest_word(g, two, s, 10);
  REQUIRE(w.has_value());
  CHECK(w->size() == 6);
  CHECK(path_end(g, s, SPath{g.identity(), *w}) == two);
  CHECK_THROWS_AS(word_length_bfs(g, two, s, 10, 50), ResourceError);
  CHECK_THROWS_AS(word_length_bfs(g, two, s, -1), DomainError);
}

TEST_CASE("Cayley ball: symmetry and subadditivity") {
  WreathGroup g(2, LampGroup::cyclic(2));
  auto s = GeneratingSet::standard(g);
  const Ball b6 = cayley_ball(g, s, 6);
  const Ball b8 = cayley_ball(g, s, 8);
  const auto moves = move_table(g, s);
  CHECK(moves.size() == 5);
  std::vector<WreathElement> b4;
  for (const auto& [e, l] : b6) {
    CHECK(b8.at(e) == l);
    if (l > 5) continue;
    if (l <= 4) b4.push_back(e);
    CHECK(b6.at(g.invert(e)) == l);
    for (const auto& [m, step] : moves) {
      auto next = g.multiply(e, step);
      CHECK(std::abs(b6.at(next) - l) <= 1);
    }
  }
  std::sort(b4.begin(), b4.end(), [](const auto& a, const auto& c) {
    return std::tie(a.position, a.lamps.entries()) < std::tie(c.position, c.lamps.entries());
  });
  Rng rng(1);
  for (int i = 0; i < 3000; ++i) {
    const auto& a = b4[rng.below(b4.size())];
    const auto& c = b4[rng.below(b4.size())];
    CHECK(b8.at(g.multiply(a, c)) <= b8.at(a) + b8.at(c));
  }
  // radius-1 ball: identity plus five moves
  CHECK(cayley_ball(g, s, 1).size() == 6);
}

TEST_CASE("word_length_bounds: sandwich on the radius-8 ball") {
  WreathGroup g(2, LampGroup::cyclic(2));
  auto s = GeneratingSet::standard(g);
  auto id = word_length_bounds(g, g.identity());
  CHECK(id.lower == 0);
  CHECK(id.upper == 0);
  auto one = word_length_bounds(g, g.lamp_at({0, 0}, 1));
  CHECK(one.lower == 1);
  CHECK(one.upper == 1);
  const Ball b8 = cayley_ball(g, s, 8);
  std::size_t tight_lower = 0;
  for (const auto& [e, l] : b8) {
    auto b = word_length_bounds(g, e);
    CHECK(b.exact_tsp);
    CHECK(b.lower <= l);
    CHECK(l <= b.upper);
    tight_lower += b.lower == l;
  }
  CHECK(tight_lower > 0);
  WreathGroup z3(2, LampGroup::cyclic(3));
  CHECK_THROWS_AS(word_length_bounds(z3, z3.identity()), DomainError);
}

TEST_CASE("is_complete") {
  WreathGroup g2(2, LampGroup::cyclic(2));
  CHECK(is_complete(g2, GeneratingSet::standard(g2)));
  WreathGroup g3(2, LampGroup::cyclic(3));
  CHECK(is_complete(g3, GeneratingSet::standard(g3)));
  GeneratingSet t;
  WreathElement c{{0, 1}, {}};
  c.lamps.set({0, 0}, 1);
  t.generators = {{{1, 0}, {}}, {{0, 1}, {}}, c};
  t.labels = {"a", "b", "c"};
  CHECK_FALSE(is_complete(g3, t));
  // the same set over Z/2 is complete
  CHECK(is_complete(g2, t));
  GeneratingSet lampless;
  lampless.generators = {{{1, 0}, {}}, {{0, 1}, {}}};
  lampless.labels = {"a", "b"};
  CHECK(is_complete(g3, lampless));
  WreathGroup gz(2, LampGroup::integers());
  CHECK_THROWS_AS(is_complete(gz, lampless), DomainError);
}

TEST_CASE("oned_word_length") {
  WreathGroup g(1, LampGroup::cyclic(2));
  auto s = GeneratingSet::sws_1d(g);
  CHECK(s.generators.size() == 4);
  CHECK(s.reach() == 1);
  // Every generator moves the walker by one, so even lengths at x = 0.
  auto one = oned_word_length(g, g.lamp_at({0, 0}, 1));
  CHECK(one.bfs == 2);
  CHECK(one.closed_form == 0);
  // f = 1 on {0..k}, x = k; BFS values frozen.
  const std::int64_t frozen[] = {1, 2, 3, 4, 5};
  for (std::int64_t k = 1; k <= 5; ++k) {
    WreathElement e;
    e.position = {k, 0};
    for (std::int64_t i = 0; i <= k; ++i) e.lamps.set({i, 0}, 1);
    auto r = oned_word_length(g, e);
    CHECK(r.bfs == frozen[k - 1]);
    CHECK(r.closed_form == k);
    CHECK(r.agrees());
    auto w = shortest_word(g, e, s, 20);
    REQUIRE(w.has_value());
    CHECK(std::int64_t(w->size()) == r.bfs);
    CHECK(path_end(g, s, SPath{g.identity(), *w}) == e);
  }
  CHECK_THROWS_AS(oned_word_length(g, g.identity()), DomainError);
  WreathElement outside{{3, 0}, {}};
  outside.lamps.set({0, 0}, 1);
  CHECK_THROWS_AS(oned_word_length(g, outside), DomainError);
}

TEST_CASE("WreathStepDistribution: SWS and decomposition") {
  WreathGroup g(2, LampGroup::cyclic(2));
  auto sws = WreathStepDistribution::switch_walk_switch(g, StepDistribution::simple(2), 0.5);
  CHECK(sws.atoms().size() == 16);
  double total = 0;
  for (const auto& a : sws.atoms()) {
    CHECK(a.probability == doctest::Approx(1.0 / 16));
    total += a.probability;
  }
  CHECK(total == doctest::Approx(1.0));
  auto d = sws.decompose();
  CHECK(d.a == 0.0);
  CHECK(d.residual.size() == 16);
  CHECK_THROWS_AS(WreathStepDistribution::switch_walk_switch(g, StepDistribution::simple(2), 0.0),
                  ConfigError);

  // mass at id and delta: a = min = 0.2
  const auto id = g.identity();
  const auto delta = g.lamp_at({0, 0}, 1);
  WreathStepDistribution mu(g, {{id, 0.3}, {delta, 0.2}, {{{1, 0}, {}}, 0.25}, {{{-1, 0}, {}}, 0.25}});
  auto dec = mu.decompose();
  CHECK(dec.a == doctest::Approx(0.2));
  double rtotal = 0;
  for (const auto& a : dec.residual) rtotal += a.probability;
  CHECK(rtotal == doctest::Approx(1.0));
  auto residual_mass = [&](const WreathElement& e) {
    double m = 0;
    for (const auto& a : dec.residual)
      if (a.element == e) m += a.probability;
    return m;
  };
  for (const auto& a : mu.atoms()) {
    const double u = (a.element == id || a.element == delta) ? 0.5 : 0.0;
    CHECK(dec.a * u + (1 - dec.a) * residual_mass(a.element) == doctest::Approx(a.probability));
  }
  CHECK(residual_mass(delta) == doctest::Approx(0.125));

  Rng rng(3);
  int hits = 0;
  for (int i = 0; i < 40000; ++i) hits += mu.sample(rng) == id;
  CHECK(std::abs(hits / 40000.0 - 0.3) < 4 * std::sqrt(0.21 / 40000));

  CHECK_THROWS_AS(WreathStepDistribution(g, {{id, 0.5}}), ConfigError);
}
