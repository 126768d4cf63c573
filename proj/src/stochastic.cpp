#include "vcsched/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "vcsched/error.hpp"

namespace vcsched {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double phi(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double lower_tail(double z) { return 0.5 * std::erfc(-z / kSqrt2); }
double upper_tail(double z) { return 0.5 * std::erfc(z / kSqrt2); }

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("invalid distribution: " + what);
}

/// Sum of adaptive Gauss-Kronrod integrals over consecutive pieces.
template <class F>
double integrate_pieces(F&& f, std::vector<double> points, double rel_tol) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i];
    const double b = points[i + 1];
    if (!(b > a)) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol);
  }
  return total;
}

/// Interior points where the density of `spec` changes character, plus the
/// support end points. Splitting there keeps narrow peaks visible to the
/// adaptive rule.
std::vector<double> density_breakpoints(const DistributionSpec& spec) {
  std::vector<double> pts{spec.lower(), spec.upper()};
  auto add = [&](double x) {
    if (x > spec.lower() && x < spec.upper()) pts.push_back(x);
  };
  switch (spec.kind()) {
    case DistributionSpec::Kind::TruncatedGaussian: {
      const double mu = spec.parameter_mean();
      const double s = std::sqrt(spec.variance());
      for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) add(mu + k * s);
      break;
    }
    case DistributionSpec::Kind::TruncatedExponential: {
      const double m = spec.parameter_mean();
      for (double k : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0}) add(spec.lower() + k * m);
      break;
    }
    case DistributionSpec::Kind::Deterministic:
      break;
  }
  return pts;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double SeededRng::uniform01() {
  // 53 random mantissa bits, shifted half a step off zero.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t SeededRng::uniform_index(std::uint64_t n) {
  if (n == 0) throw InputError("uniform_index requires n > 0");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

SeededRng SeededRng::child(std::uint64_t key) const { return SeededRng(splitmix64(seed_ ^ splitmix64(key + 1))); }

DistributionSpec DistributionSpec::truncated_gaussian(double mean, double variance, double lower, double upper) {
  require(std::isfinite(mean) && std::isfinite(lower) && std::isfinite(upper), "non-finite gaussian parameter");
  require(lower < upper, "lower must be < upper");
  require(variance > 0.0 && std::isfinite(variance), "gaussian variance must be > 0");
  DistributionSpec s;
  s.kind_ = Kind::TruncatedGaussian;
  s.mean_ = mean;
  s.variance_ = variance;
  s.lower_ = lower;
  s.upper_ = upper;
  s.sigma_ = std::sqrt(variance);
  s.alpha_ = (lower - mean) / s.sigma_;
  s.beta_ = (upper - mean) / s.sigma_;
  // Work in whichever tail keeps the normalizing mass accurate.
  s.upper_tail_ = s.alpha_ + s.beta_ > 0.0;
  s.mass_ = s.upper_tail_ ? upper_tail(s.alpha_) - upper_tail(s.beta_) : lower_tail(s.beta_) - lower_tail(s.alpha_);
  require(s.mass_ > 0.0, "gaussian has no mass on [lower, upper]");
  return s;
}

DistributionSpec DistributionSpec::truncated_exponential(double mean, double lower, double upper) {
  require(std::isfinite(mean) && std::isfinite(lower) && std::isfinite(upper), "non-finite exponential parameter");
  require(lower < upper, "lower must be < upper");
  require(mean > 0.0, "exponential mean must be > 0");
  require(lower >= 0.0, "exponential lower bound must be >= 0");
  DistributionSpec s;
  s.kind_ = Kind::TruncatedExponential;
  s.mean_ = mean;
  s.lower_ = lower;
  s.upper_ = upper;
  s.mass_ = -std::expm1(-(upper - lower) / mean);  // relative to exp(-lower/mean)
  require(s.mass_ > 0.0, "exponential has no mass on [lower, upper]");
  return s;
}

DistributionSpec DistributionSpec::deterministic(double value) {
  require(std::isfinite(value), "non-finite deterministic value");
  DistributionSpec s;
  s.kind_ = Kind::Deterministic;
  s.mean_ = value;
  s.lower_ = value;
  s.upper_ = value;
  return s;
}

std::string_view kind_name(DistributionSpec::Kind k) {
  switch (k) {
    case DistributionSpec::Kind::TruncatedGaussian:
      return "trunc_gauss";
    case DistributionSpec::Kind::TruncatedExponential:
      return "trunc_exp";
    case DistributionSpec::Kind::Deterministic:
      return "deterministic";
  }
  return "unknown";
}

double DistributionSpec::mean() const {
  switch (kind_) {
    case Kind::TruncatedGaussian:
      return mean_ + sigma_ * (phi(alpha_) - phi(beta_)) / mass_;
    case Kind::TruncatedExponential: {
      const double span = upper_ - lower_;
      return lower_ + mean_ - span * std::exp(-span / mean_) / mass_;
    }
    case Kind::Deterministic:
      return mean_;
  }
  return mean_;
}

double DistributionSpec::pdf(double x) const {
  if (kind_ == Kind::Deterministic || x < lower_ || x > upper_) return 0.0;
  if (kind_ == Kind::TruncatedGaussian) return phi((x - mean_) / sigma_) / (sigma_ * mass_);
  return std::exp(-(x - lower_) / mean_) / (mean_ * mass_);
}

double DistributionSpec::cdf(double x) const {
  if (kind_ == Kind::Deterministic) return x >= mean_ ? 1.0 : 0.0;
  if (x <= lower_) return 0.0;
  if (x >= upper_) return 1.0;
  if (kind_ == Kind::TruncatedGaussian) {
    const double z = (x - mean_) / sigma_;
    const double p = upper_tail_ ? (upper_tail(alpha_) - upper_tail(z)) / mass_ : (lower_tail(z) - lower_tail(alpha_)) / mass_;
    return std::clamp(p, 0.0, 1.0);
  }
  return std::clamp(-std::expm1(-(x - lower_) / mean_) / mass_, 0.0, 1.0);
}

double DistributionSpec::prob_below(double x) const {
  if (kind_ == Kind::Deterministic) return x > mean_ ? 1.0 : 0.0;
  return cdf(x);
}

double DistributionSpec::quantile(double u) const {
  if (kind_ == Kind::Deterministic) return mean_;
  u = std::clamp(u, 0.0, 1.0);
  double x = 0.0;
  if (kind_ == Kind::TruncatedGaussian) {
    double z = 0.0;
    if (upper_tail_) {
      const double s = upper_tail(alpha_) - u * mass_;
      z = s <= 0.0 ? beta_ : kSqrt2 * boost::math::erfc_inv(2.0 * s);
    } else {
      const double p = lower_tail(alpha_) + u * mass_;
      z = p <= 0.0 ? alpha_ : -kSqrt2 * boost::math::erfc_inv(2.0 * p);
    }
    x = mean_ + sigma_ * z;
  } else {
    x = lower_ - mean_ * std::log1p(-u * mass_);
  }
  return std::clamp(x, lower_, upper_);
}

double sample(const DistributionSpec& spec, SeededRng& rng) {
  if (spec.is_deterministic()) return spec.value();
  return spec.quantile(rng.uniform01());
}

double expected_reciprocal(const DistributionSpec& spec) {
  if (!(spec.lower() > 0.0)) {
    throw InputError("expected_reciprocal: support must exclude 0 (lower = " + std::to_string(spec.lower()) + ")");
  }
  if (spec.is_deterministic()) return 1.0 / spec.value();
  return integrate_pieces([&](double x) { return spec.pdf(x) / x; }, density_breakpoints(spec), 1e-10);
}

double risk_time(const DistributionSpec& f_spec, const DistributionSpec& r_spec, double q, double d, double t_max) {
  if (!(q > 0.0)) throw InputError("risk_time: q must be > 0");
  if (!(d >= 0.0)) throw InputError("risk_time: d must be >= 0");
  if (!(f_spec.lower() > 0.0)) throw InputError("risk_time: computing capability support must exclude 0");
  if (d > 0.0 && !(r_spec.lower() > 0.0)) throw InputError("risk_time: rate support must exclude 0");
  if (!(t_max > 0.0)) return 1.0;

  // Probability that the computing part alone overruns what the transfer leaves.
  auto overrun_given_rate = [&](double r) {
    const double slack = d > 0.0 ? t_max - d / r : t_max;
    if (slack <= 0.0) return 1.0;
    return f_spec.prob_below(q / slack);
  };
  // Certain outcomes: even the fastest SP overruns, or even the slowest meets t_max.
  const double transfer_best = d > 0.0 ? d / r_spec.upper() : 0.0;
  const double transfer_worst = d > 0.0 ? d / r_spec.lower() : 0.0;
  if (q / f_spec.upper() + transfer_best > t_max) return 1.0;
  if (q / f_spec.lower() + transfer_worst <= t_max) return 0.0;
  if (d == 0.0 || r_spec.is_deterministic()) {
    return overrun_given_rate(r_spec.is_deterministic() ? r_spec.value() : r_spec.lower());
  }

  std::vector<double> points = density_breakpoints(r_spec);
  auto add = [&](double r) {
    if (r > r_spec.lower() && r < r_spec.upper()) points.push_back(r);
  };
  add(d / t_max);
  for (double f_edge : {f_spec.lower(), f_spec.upper()}) {
    const double slack = q / f_edge;
    if (t_max > slack) add(d / (t_max - slack));
  }
  const double risk =
      integrate_pieces([&](double r) { return r_spec.pdf(r) * overrun_given_rate(r); }, std::move(points), 1e-10);
  return std::clamp(risk, 0.0, 1.0);
}

double risk_struct(const DistributionSpec& t_conn_spec, double w_task) {
  if (!(w_task > 0.0)) throw InputError("risk_struct: w_task must be > 0");
  return t_conn_spec.prob_below(w_task);
}

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

McEstimate RunningStats::estimate() const {
  if (n_ == 0) return {};
  return {mean_, std::sqrt(variance() / static_cast<double>(n_))};
}

McEstimate mc_estimate(std::span<const DistributionSpec> specs,
                       const std::function<double(std::span<const double>)>& statistic, std::size_t n,
                       SeededRng& rng) {
  if (n == 0) throw InputError("mc_estimate: n must be >= 1");
  std::vector<double> draw(specs.size());
  RunningStats stats;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < specs.size(); ++j) draw[j] = sample(specs[j], rng);
    stats.add(statistic(draw));
  }
  return stats.estimate();
}

}  // namespace vcsched
