#include "dcqw/disorder.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/binomial.hpp>

#include "dcqw/errors.hpp"

namespace dcqw {

namespace {

bool is_half(double f) {
  const double r = f - std::floor(f);
  return std::abs(r - 0.5) < 1e-12;
}

bool is_zero(double f) {
  const double r = f - std::floor(f);
  return r < 1e-12 || r > 1.0 - 1e-12;
}

void require_critical(double f) {
  if (!is_half(f) && !is_zero(f)) throw DomainError("cage formulas need f = 0 or f = 1/2");
}

double binom(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                   static_cast<unsigned>(k));
}

}  // namespace

void DisorderSpec::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
  };
  switch (kind) {
    case DisorderKind::hub_static:
    case DisorderKind::hub_dynamic:
      need(p >= 0.0 && p <= 1.0, "probability must lie in [0, 1]");
      break;
    case DisorderKind::rim_static:
    case DisorderKind::rim_dynamic:
    case DisorderKind::hub_rim_static:
      need(dtheta >= 0.0 && dtheta <= 2.0 * pi + 1e-12, "dtheta must lie in [0, 2 pi]");
      break;
    case DisorderKind::combined:
      need(alpha < 1.0, "alpha must be below 1 (distribution not normalizable)");
      break;
    case DisorderKind::none:
      break;
  }
}

std::vector<HubCoin> sample_hub_static(double ps, int L, Rng& rng) {
  if (ps < 0.0 || ps > 1.0) throw DomainError("p_s must lie in [0, 1]");
  std::vector<HubCoin> out(L);
  for (auto& h : out) h = bernoulli(rng, ps) ? HubCoin::grover() : HubCoin::hadamard();
  return out;
}

std::vector<HubCoin> sample_hub_dynamic(double pt, long T, Rng& rng) {
  if (pt < 0.0 || pt > 1.0) throw DomainError("p_t must lie in [0, 1]");
  std::vector<HubCoin> out(T);
  for (auto& h : out) h = bernoulli(rng, pt) ? HubCoin::grover() : HubCoin::hadamard();
  return out;
}

std::vector<double> sample_rim_box(double theta0, double dtheta, std::size_t count, Rng& rng) {
  if (dtheta < 0.0) throw DomainError("dtheta must be non-negative");
  std::vector<double> out(count);
  for (auto& x : out) x = theta0 + dtheta * (uniform01(rng) - 0.5);
  return out;
}

std::vector<double> sample_theta_as(double alpha, std::size_t count, Rng& rng) {
  if (!(alpha < 1.0)) throw DomainError("alpha >= 1 gives a non-normalizable distribution");
  const double expo = 1.0 / (1.0 - alpha);
  std::vector<double> out(count);
  for (auto& x : out) {
    const double mag = 0.5 * pi * std::pow(uniform_open_closed(rng), expo);
    x = bernoulli(rng, 0.5) ? mag : -mag;
  }
  return out;
}

CoinField realize_field(const DisorderSpec& spec, int L, long T, Rng& rng) {
  spec.validate();
  CoinField f = CoinField::uniform(spec.hub, RimCoinParams{spec.theta0});
  switch (spec.kind) {
    case DisorderKind::none:
      break;
    case DisorderKind::hub_static:
      f.hub = sample_hub_static(spec.p, L, rng);
      break;
    case DisorderKind::hub_dynamic:
      f.hub_t = sample_hub_dynamic(spec.p, T, rng);
      break;
    case DisorderKind::hub_rim_static: {
      const auto th = sample_rim_box(spec.theta0, spec.dtheta, L, rng);
      f.hub.resize(L);
      for (int n = 0; n < L; ++n) f.hub[n] = HubCoin::hadamard_theta(th[n]);
      [[fallthrough]];
    }
    case DisorderKind::rim_static: {
      const auto tb = sample_rim_box(spec.theta0, spec.dtheta, L, rng);
      const auto tc = sample_rim_box(spec.theta0, spec.dtheta, L, rng);
      f.rim_b.resize(L);
      f.rim_c.resize(L);
      for (int n = 0; n < L; ++n) {
        f.rim_b[n] = RimCoinParams{tb[n]};
        f.rim_c[n] = RimCoinParams{tc[n]};
      }
      break;
    }
    case DisorderKind::rim_dynamic:
      f.rim_b = {RimCoinParams{0.0}};
      f.rim_c = {RimCoinParams{0.0}};
      f.theta_b_t = sample_rim_box(spec.theta0, spec.dtheta, T, rng);
      f.theta_c_t = sample_rim_box(spec.theta0, spec.dtheta, T, rng);
      break;
    case DisorderKind::combined: {
      const auto as = sample_theta_as(spec.alpha, L, rng);
      f.rim_b.resize(L);
      f.rim_c.resize(L);
      for (int n = 0; n < L; ++n) {
        f.rim_b[n] = RimCoinParams{as[n]};
        f.rim_c[n] = RimCoinParams{-as[n]};
      }
      f.theta_b_t = sample_rim_box(0.0, pi, T, rng);
      f.theta_c_t = f.theta_b_t;
      break;
    }
  }
  return f;
}

double predicted_cage_prob_static(int n, double ps, double f) {
  require_critical(f);
  if (n < 5) return 0.0;
  const double q = 1.0 - ps;
  const double m = n - 4.0;
  if (is_zero(f)) return q * q * std::pow(ps, n - 5) * m;
  return ps * ps * std::pow(q, n - 5) * m;
}

AvgExtension predicted_avg_extension(double ps, double f) {
  require_critical(f);
  if (ps < 0.0 || ps > 1.0) throw DomainError("p_s must lie in [0, 1]");
  const double wall = is_zero(f) ? 1.0 - ps : ps;
  if (wall <= 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {3.0 + 2.0 / wall, false};
}

double predicted_cage_prob_dynamic(int n, int T, double pt, double f) {
  require_critical(f);
  if (T < 2 || n < 5) return 0.0;
  const double q = is_zero(f) ? pt : 1.0 - pt;  // probability that a coin extends the cage
  const double r = 1.0 - q;
  auto pw = [](double b, int e) { return e < 0 ? 0.0 : std::pow(b, e); };
  if (n % 2 == 1) {
    const int x0 = (n - 5) / 2;  // neither end coin extends
    const int x1 = (n - 7) / 2;  // both end coins extend
    return binom(T - 2, x0) * pw(q, x0) * pw(r, T - x0) +
           binom(T - 2, x1) * pw(q, x1 + 2) * pw(r, T - 2 - x1);
  }
  const int x = n / 2 - 3;
  return 2.0 * binom(T - 2, x) * pw(q, x + 1) * pw(r, T - 1 - x);
}

int static_cage_rule(const std::vector<HubCoin>& labels, int n0, double f) {
  require_critical(f);
  const int L = static_cast<int>(labels.size());
  const HubCoin::Kind wall = is_zero(f) ? HubCoin::Kind::hadamard : HubCoin::Kind::grover;
  auto is_wall = [&](int offset) { return labels[((n0 + offset) % L + L) % L].kind == wall; };
  int kr = -1, kl = -1;
  for (int j = 1; j < L; ++j)
    if (is_wall(j)) {
      kr = j + 1;
      break;
    }
  for (int j = 2; j < L; ++j)
    if (is_wall(-j)) {
      kl = j;
      break;
    }
  if (kr < 0 || kl < 0) return L;
  return std::min(L, kl + kr + 1);
}

int dynamic_cage_rule(const std::vector<HubCoin>& per_application, double f) {
  require_critical(f);
  const int T = static_cast<int>(per_application.size()) - 1;
  if (T < 2) throw DomainError("temporal rule needs at least 3 hub applications");
  const HubCoin::Kind ext = is_zero(f) ? HubCoin::Kind::grover : HubCoin::Kind::hadamard;
  int right = 2, left = 2;
  for (int k = 1; k <= T; ++k) {
    const bool e = per_application[k].kind == ext;
    if (e && k <= T - 1) ++right;
    if (e && k >= 2) ++left;
  }
  return left + right + 1;
}

Eigen::Vector4cd generic_hub_spinor() {
  Eigen::Vector4cd v(cplx(0.3, 0.0), cplx(0.5, 0.2), cplx(-0.4, 0.0), cplx(0.0, 0.6));
  return v / v.norm();
}

}  // namespace dcqw
