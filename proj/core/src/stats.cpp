#include "lipschitz/stats.hpp"

#include <algorithm>
#include <cmath>

#include "lipschitz/errors.hpp"

namespace lipschitz {

void BatchAccumulator::add(double x) {
  ++n_;
  sum_ += x;
  sum_sq_ += x * x;
  current_ += x;
  if (++in_current_ == batch_size_) {
    batch_means_.push_back(current_ / static_cast<double>(batch_size_));
    current_ = 0.0;
    in_current_ = 0;
  }
}

Estimate combine(const std::vector<BatchAccumulator>& chains) {
  Estimate e;
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> means;
  for (const auto& c : chains) {
    e.n += c.count();
    sum += c.sum();
    sum_sq += c.sum_squares();
    means.insert(means.end(), c.batch_means().begin(), c.batch_means().end());
  }
  if (e.n == 0) return e;
  e.mean = sum / static_cast<double>(e.n);
  if (e.n > 1) e.variance = std::max(0.0, (sum_sq - sum * e.mean) / static_cast<double>(e.n - 1));
  e.batches = static_cast<int>(means.size());
  if (e.batches >= 2) {
    double m = 0.0;
    for (double x : means) m += x;
    m /= e.batches;
    double v = 0.0;
    for (double x : means) v += (x - m) * (x - m);
    v /= (e.batches - 1);
    e.se = std::sqrt(v / e.batches);
  }
  return e;
}

Estimate batch_means(const std::vector<double>& series, int batches) {
  if (batches < 2) throw InvalidArgument("batch means need at least two batches");
  long long size = std::max<long long>(1, static_cast<long long>(series.size()) / batches);
  BatchAccumulator acc(size);
  for (double x : series) acc.add(x);
  return combine({acc});
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& y_se) {
  if (x.size() != y.size() || (!y_se.empty() && y_se.size() != y.size()))
    throw InvalidArgument("fit_line: mismatched input lengths");
  LinearFit f;
  f.n = static_cast<int>(x.size());
  if (f.n < 2) throw InvalidArgument("fit_line needs at least two points");
  double mx = 0, my = 0;
  for (int i = 0; i < f.n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= f.n;
  my /= f.n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < f.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw InvalidArgument("fit_line: x values are all equal");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (int i = 0; i < f.n; ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - rss / syy : 1.0;
  if (f.n > 2) f.slope_se_residual = std::sqrt(rss / (f.n - 2) / sxx);
  if (!y_se.empty()) {
    double v = 0;
    for (int i = 0; i < f.n; ++i) v += (x[i] - mx) * (x[i] - mx) * y_se[i] * y_se[i];
    f.slope_se_measurement = std::sqrt(v) / sxx;
  }
  f.slope_se = std::max(f.slope_se_residual, f.slope_se_measurement);
  return f;
}

}  // namespace lipschitz
