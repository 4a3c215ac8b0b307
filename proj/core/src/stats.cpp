#include "wbansec/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>

namespace wbansec {

double student_t_quantile(double p, int df) {
  if (!(p > 0.0) || !(p < 1.0)) throw DomainError("tail probability must lie in (0, 1)");
  if (df < 1) throw DomainError("degrees of freedom must be at least 1");
  const boost::math::students_t_distribution<double> dist(static_cast<double>(df));
  return boost::math::quantile(dist, 1.0 - p / 2.0);
}

SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  double sq = 0.0;
  for (double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  return s;
}

double confidence_beta(const std::vector<double>& xs, double p) {
  if (xs.size() < 2) throw DomainError("confidence interval needs at least two samples");
  const SampleStats s = sample_stats(xs);
  const double t = student_t_quantile(p, static_cast<int>(xs.size()) - 1);
  return t * s.stddev / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace wbansec
