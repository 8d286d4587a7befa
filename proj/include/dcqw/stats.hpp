#pragma once

#include <utility>
#include <vector>

namespace dcqw {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct PowerLawFit {
  double gamma = 0.0;
  double amplitude = 0.0;
  double stderr_gamma = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  int points = 0;
};

// Least-squares slope of log y against log t over t in [t_lo, t_hi].
PowerLawFit fit_exponent(const std::vector<double>& t, const std::vector<double>& y, double t_lo,
                         double t_hi);
// Last half-decade in log t: [t_max / sqrt(10), t_max].
PowerLawFit fit_exponent(const std::vector<double>& t, const std::vector<double>& y);

struct GaussianFit {
  double amplitude = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
  double r2 = 0.0;
};

// Least squares y ~ A exp(-(x-mu)^2 / (2 sigma^2)) (Levenberg-Marquardt).
GaussianFit fit_gaussian(const std::vector<double>& x, const std::vector<double>& y);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  int bins = 0;
};

// observed[i] counts samples of value first_value + i; expected[i] gives the
// model probability of that value. The last entry is a tail bin: observed
// counts everything at or above it and the model mass beyond the vector is
// added to it. Neighbouring bins merge until each expects >= min_expected.
ChiSquare chi_square_test(const std::vector<double>& observed, const std::vector<double>& expected,
                          double total, double min_expected = 5.0);

// Kolmogorov-Smirnov distance between a sample and a CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf);

struct MeanErr {
  double mean = 0.0;
  double stderr_mean = 0.0;
};
MeanErr mean_stderr(const std::vector<double>& v);

}  // namespace dcqw

#include <algorithm>
#include <cmath>

template <class Cdf>
double dcqw::ks_distance(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double c = cdf(sample[i]);
    d = std::max({d, std::abs(c - i / n), std::abs((i + 1) / n - c)});
  }
  return d;
}
