#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ldl/errors.hpp"
#include "ldl/rng.hpp"
#include "ldl/stats.hpp"

using namespace ldl;

namespace {

double two_pass_variance(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return v / static_cast<double>(xs.size() - 1);
}

// sup over every sample point of |F_a(x) - F_b(x)|, counted directly.
double brute_ks(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  double d = 0.0;
  for (double x : pooled) {
    const double fa = static_cast<double>(std::count_if(a.begin(), a.end(), [&](double y) { return y <= x; })) /
                      static_cast<double>(a.size());
    const double fb = static_cast<double>(std::count_if(b.begin(), b.end(), [&](double y) { return y <= x; })) /
                      static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("Welford agrees with the two-pass formula and merges exactly") {
  Rng rng(3);
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(1e6 + rng.normal() * 3.0);
  Moments all, left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    all.add(xs[i]);
    (i < 377 ? left : right).add(xs[i]);
  }
  CHECK(all.variance() == doctest::Approx(two_pass_variance(xs)).epsilon(1e-9));
  left.merge(right);
  CHECK(left.count() == 1000);
  CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-14));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-9));
  Moments empty;
  empty.merge(all);
  CHECK(empty.mean() == all.mean());
}

TEST_CASE("batch means with one sample per batch is s / sqrt(n)") {
  std::vector<double> xs{1, 4, 2, 8, 5, 7};
  const double plain = std::sqrt(two_pass_variance(xs) / 6.0);
  CHECK(batch_means_std_error(xs, 6) == doctest::Approx(plain));
  CHECK(batch_means_std_error(xs, 100) == doctest::Approx(plain));
  const auto s = summarize(xs, 6);
  CHECK(s.mean == doctest::Approx(27.0 / 6.0));
  CHECK(s.hi99 - s.mean == doctest::Approx(kZ99 * plain));
  CHECK(batch_means_std_error({1.0}) == 0.0);
}

TEST_CASE("median") {
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(median({}), DomainError);
}

TEST_CASE("KS statistic matches direct counting") {
  Rng rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> a, b;
    const auto na = 5 + rng.below(40), nb = 5 + rng.below(40);
    // coarse values so that ties occur
    for (std::uint64_t i = 0; i < na; ++i) a.push_back(std::floor(rng.normal() * 4.0));
    for (std::uint64_t i = 0; i < nb; ++i) b.push_back(std::floor(rng.normal() * 4.0 + 1.0));
    CHECK(ks_statistic(a, b) == doctest::Approx(brute_ks(a, b)));
  }
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({1, 2}, {5, 6}) == 1.0);
}

TEST_CASE("critical values") {
  // c(0.01) = sqrt(-ln(0.005) / 2) = 1.62762
  CHECK(ks_critical(2000, 2000, 0.01) == doctest::Approx(0.0514695).epsilon(1e-5));
  CHECK(chi_square_critical(1.0, 0.01) == doctest::Approx(6.634897).epsilon(1e-6));
  CHECK(normal_quantile(0.995) == doctest::Approx(kZ99).epsilon(1e-12));
  CHECK(chi_square_uniform({50, 50}) == 0.0);
  CHECK(chi_square_uniform({60, 40}) == doctest::Approx(4.0));
}
