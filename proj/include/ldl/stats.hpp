#ifndef LDL_STATS_HPP_
#define LDL_STATS_HPP_

#include <cstdint>
#include <vector>

namespace ldl {

// Running mean and variance (Welford). merge() is exact up to rounding, so a
// fixed merge order gives a fixed result.
class Moments {
 public:
  void add(double x);
  void merge(const Moments& other);

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  // Unbiased sample variance; 0 below two samples.
  double variance() const;
  double std_error() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline constexpr double kZ99 = 2.5758293035489004;

struct Summary {
  std::int64_t count = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double std_err = 0.0;  // batch means
  double lo99 = 0.0;
  double hi99 = 0.0;
};

// Standard error from the spread of `batches` consecutive batch means
// (capped at the sample count, so one sample per batch reduces to the usual
// s / sqrt(n)).
double batch_means_std_error(const std::vector<double>& xs, std::size_t batches = 20);
Summary summarize(const std::vector<double>& xs, std::size_t batches = 20);

double median(std::vector<double> xs);

// sup |F_a - F_b| over the pooled sample.
double ks_statistic(std::vector<double> a, std::vector<double> b);
// Asymptotic two-sample critical value c(alpha) sqrt((n + m) / (n m)).
double ks_critical(std::size_t n, std::size_t m, double alpha);

// Pearson statistic against equal cell probabilities.
double chi_square_uniform(const std::vector<std::int64_t>& counts);
double chi_square_critical(double dof, double alpha);
double normal_quantile(double p);

}  // namespace ldl

#endif  // LDL_STATS_HPP_
