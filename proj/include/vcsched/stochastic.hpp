#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace vcsched {

/// Reproducible random stream.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// Uniform variates are derived with explicit bit arithmetic instead of the
/// implementation-defined std distributions, so a seed produces the same
/// stream on every platform.
///
/// Child streams: `child(k)` seeds a new engine with
/// splitmix64(seed ^ splitmix64(k + 1)). Workers receive children keyed by
/// their work index, never a shared parent.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  SeededRng child(std::uint64_t key) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// One of three supported laws, truncated to [lower, upper] and renormalized.
class DistributionSpec {
 public:
  enum class Kind { TruncatedGaussian, TruncatedExponential, Deterministic };

  /// `mean` and `variance` are the parameters of the untruncated normal.
  static DistributionSpec truncated_gaussian(double mean, double variance, double lower, double upper);
  /// `mean` is the untruncated mean 1/rate; requires lower >= 0.
  static DistributionSpec truncated_exponential(double mean, double lower, double upper);
  static DistributionSpec deterministic(double value);

  Kind kind() const { return kind_; }
  double parameter_mean() const { return mean_; }
  double variance() const { return variance_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double value() const { return mean_; }
  bool is_deterministic() const { return kind_ == Kind::Deterministic; }

  /// Mean of the truncated law (closed form).
  double mean() const;
  double pdf(double x) const;
  /// P(X <= x).
  double cdf(double x) const;
  /// P(X < x); equals cdf for the continuous kinds.
  double prob_below(double x) const;
  /// Inverse CDF of the truncated law for u in (0, 1).
  double quantile(double u) const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  DistributionSpec() = default;

  Kind kind_ = Kind::Deterministic;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double lower_ = 0.0;
  double upper_ = 0.0;
  // Normalization helpers, fixed at construction.
  double sigma_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double mass_ = 1.0;   // untruncated probability of [lower, upper]
  bool upper_tail_ = false;
};

std::string_view kind_name(DistributionSpec::Kind k);

/// Inverse-CDF draw, always inside [lower, upper].
double sample(const DistributionSpec& spec, SeededRng& rng);

/// E[1/X] by adaptive Gauss-Kronrod quadrature (relative tolerance 1e-8).
/// Throws InputError if the support reaches 0 or below.
double expected_reciprocal(const DistributionSpec& spec);

inline double cdf(const DistributionSpec& spec, double x) { return spec.cdf(x); }

/// Pr(q/f + d/r > t_max) for independent f and r.
///
/// Conditioning on r, the inner probability is the closed-form CDF of f at
/// q / (t_max - d/r); the outer integral over r runs piecewise between the
/// kinks of that function.
double risk_time(const DistributionSpec& f_spec, const DistributionSpec& r_spec, double q, double d,
                 double t_max);

/// Pr(t_conn < w_task).
double risk_struct(const DistributionSpec& t_conn_spec, double w_task);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error of `statistic` over n joint draws of `specs`.
McEstimate mc_estimate(std::span<const DistributionSpec> specs,
                       const std::function<double(std::span<const double>)>& statistic, std::size_t n,
                       SeededRng& rng);

/// Streaming mean / variance (Welford).
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  McEstimate estimate() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace vcsched
