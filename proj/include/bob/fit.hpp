#pragma once

#include <vector>

namespace bob {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least-squares line y = intercept + slope * x. Needs two or more points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Fit of log(y) against log(x); all values must be positive.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

double spearman(const std::vector<double>& x, const std::vector<double>& y);
double median(std::vector<double> v);

}  // namespace bob
