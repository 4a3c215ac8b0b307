#pragma once

#include <cstddef>
#include <vector>

#include "wbansec/errors.hpp"

namespace wbansec {

// Critical value of the two-tailed Student-t test: the t > 0 such that a
// t-distributed variable with `df` degrees of freedom lands outside [-t, t]
// with probability `p`.  Strictly decreasing in df; approaches the normal
// critical value (1.960 for p = 0.05) as df grows.  Throws DomainError unless
// 0 < p < 1 and df >= 1.
double student_t_quantile(double p, int df);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1 denominator)
  std::size_t count = 0;
};

SampleStats sample_stats(const std::vector<double>& xs);

// Confidence half-width over R repeated measurements:
//   beta = t(p, R - 1) * S / sqrt(R)
// with S the sample standard deviation.  Defaults to the two-tailed 95%
// interval.  Throws DomainError when fewer than two samples are given.
double confidence_beta(const std::vector<double>& xs, double p = 0.05);

}  // namespace wbansec
