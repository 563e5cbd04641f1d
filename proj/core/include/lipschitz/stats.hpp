#pragma once

#include <vector>

namespace lipschitz {

struct Estimate {
  long long n = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance of the raw series
  double se = 0.0;        // batch-means standard error of the mean
  int batches = 0;
};

// Running batch accumulator for one chain: values are grouped into batches of
// a fixed size; a trailing partial batch is dropped from the SE but kept in the mean.
class BatchAccumulator {
 public:
  explicit BatchAccumulator(long long batch_size = 1) : batch_size_(batch_size < 1 ? 1 : batch_size) {}
  void add(double x);
  long long count() const { return n_; }
  double sum() const { return sum_; }
  double sum_squares() const { return sum_sq_; }
  const std::vector<double>& batch_means() const { return batch_means_; }

 private:
  long long batch_size_;
  long long n_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  double current_ = 0.0;
  long long in_current_ = 0;
  std::vector<double> batch_means_;
};

// Pools chains (in the given order); batch sizes must agree across chains.
Estimate combine(const std::vector<BatchAccumulator>& chains);

// Batch means over a whole series with the given number of batches.
Estimate batch_means(const std::vector<double>& series, int batches = 32);

// Ordinary least squares y = a + b x. The slope SE is the larger of the
// residual-based SE and the SE propagated from the per-point y errors.
struct LinearFit {
  int n = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double slope_se_residual = 0.0;
  double slope_se_measurement = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& y_se = {});

}  // namespace lipschitz
