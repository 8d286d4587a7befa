#include "dcqw/stats.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "dcqw/errors.hpp"

namespace dcqw {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw DomainError("linear fit needs at least two paired points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("linear fit needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ssr += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  f.slope_stderr = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return f;
}

PowerLawFit fit_exponent(const std::vector<double>& t, const std::vector<double>& y, double t_lo,
                         double t_hi) {
  if (t.size() != y.size()) throw DomainError("series lengths differ");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(t[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("power-law fit needs positive values");
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < 2) throw DomainError("fit window holds fewer than two points");
  const LinearFit lf = linear_fit(lx, ly);
  return {lf.slope, std::exp(lf.intercept), lf.slope_stderr, t_lo, t_hi, static_cast<int>(lx.size())};
}

PowerLawFit fit_exponent(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.empty()) throw DomainError("empty series");
  const double t_max = *std::max_element(t.begin(), t.end());
  return fit_exponent(t, y, t_max / std::sqrt(10.0), t_max);
}

GaussianFit fit_gaussian(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n == 0) throw DomainError("gaussian fit needs paired data");
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, ymax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] < 0.0) throw DomainError("gaussian fit needs non-negative data");
    s0 += y[i];
    s1 += y[i] * x[i];
    ymax = std::max(ymax, y[i]);
  }
  if (s0 <= 0.0) throw DomainError("degenerate distribution");
  const double mu0 = s1 / s0;
  for (std::size_t i = 0; i < n; ++i) s2 += y[i] * (x[i] - mu0) * (x[i] - mu0);
  double sig0 = std::sqrt(s2 / s0);
  const double my = s0 / n;
  double syy = 0.0;
  for (double v : y) syy += (v - my) * (v - my);
  if (sig0 == 0.0) return {ymax, mu0, 0.0, 1.0};

  Eigen::Vector3d p(ymax, mu0, sig0);
  auto residuals = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(n);
    if (jac) jac->resize(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = (x[i] - q[1]) / q[2];
      const double g = std::exp(-0.5 * z * z);
      r[i] = q[0] * g - y[i];
      if (jac) {
        (*jac)(i, 0) = g;
        (*jac)(i, 1) = q[0] * g * z / q[2];
        (*jac)(i, 2) = q[0] * g * z * z / q[2];
      }
    }
  };
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals(p, r, &jac);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < 500; ++it) {
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d g = jac.transpose() * r;
    Eigen::Matrix3d a = jtj;
    a.diagonal() *= 1.0 + lambda;
    const Eigen::Vector3d delta = a.ldlt().solve(-g);
    Eigen::Vector3d trial = p + delta;
    trial[2] = std::abs(trial[2]);
    Eigen::VectorXd rt;
    residuals(trial, rt, nullptr);
    const double ct = rt.squaredNorm();
    if (ct < cost) {
      const bool done = cost - ct <= 1e-15 * cost || delta.norm() <= 1e-14 * p.norm();
      p = trial;
      cost = ct;
      lambda *= 0.3;
      residuals(p, r, &jac);
      if (done) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  return {p[0], p[1], std::abs(p[2]), syy > 0.0 ? 1.0 - cost / syy : 1.0};
}

ChiSquare chi_square_test(const std::vector<double>& observed, const std::vector<double>& expected,
                          double total, double min_expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw DomainError("chi-square needs matching observed and expected bins");
  double mass = 0.0;
  for (double e : expected) mass += e;
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  const std::size_t last = observed.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    o_acc += observed[i];
    e_acc += expected[i] * total;
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  // The last entry plus the model mass beyond it form the tail bin.
  o_acc += observed[last];
  e_acc += (expected[last] + std::max(0.0, 1.0 - mass)) * total;
  if (e_acc >= min_expected || obs.empty()) {
    obs.push_back(o_acc);
    exp.push_back(e_acc);
  } else {
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  ChiSquare cs;
  cs.bins = static_cast<int>(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i)
    cs.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  cs.dof = cs.bins - 1;
  if (cs.dof < 1) throw DomainError("chi-square needs at least two bins");
  boost::math::chi_squared dist(cs.dof);
  cs.p_value = boost::math::cdf(boost::math::complement(dist, cs.statistic));
  return cs;
}

MeanErr mean_stderr(const std::vector<double>& v) {
  if (v.empty()) return {};
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(s / (n - 1) / n) : 0.0};
}

}  // namespace dcqw
