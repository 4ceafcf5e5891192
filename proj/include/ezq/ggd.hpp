#pragma once

// Generalized Gaussian source model.
//
//   f(x) = alpha * eta / (2 Gamma(1/alpha)) * exp(-(eta |x - m|)^alpha)
//   eta  = sigma^-1 * sqrt(Gamma(3/alpha) / Gamma(1/alpha))
//
// alpha = 1 is Laplacian, alpha = 2 Gaussian, alpha -> inf uniform. The mean
// is fixed at zero throughout.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ezq {

inline constexpr double kAlphaMin = 0.1;
inline constexpr double kAlphaMax = 10.0;

struct GgdParams {
  double alpha = 2.0;
  double sigma2 = 1.0;
  double mean = 0.0;

  // Validating constructor; throws DomainError.
  static GgdParams make(double alpha, double sigma2);

  double sigma() const;
  // Throws DomainError if the invariants do not hold.
  void validate() const;
};

struct MomentEstimates {
  double sigma2_hat = 0.0;  // (1/n) sum x^2
  double mu_hat = 0.0;      // (1/n) sum |x|
  std::size_t n = 0;
};

struct GgdEstimate {
  GgdParams params;
  MomentEstimates moments;
  // The moment ratio fell outside the range attainable for alpha in
  // [kAlphaMin, kAlphaMax] and alpha was pinned to the nearest endpoint.
  bool clamped = false;
};

// Gamma(1/a) Gamma(3/a) / Gamma(2/a)^2, the sigma^2 / mu^2 ratio of a GGD.
double moment_ratio(double alpha);

double eta(double alpha, double sigma);

double pdf(double x, const GgdParams& p);

// Differential entropy in bits.
double differential_entropy(const GgdParams& p);

// Inverts moment_ratio by bisection on log(alpha). Ratios beyond the
// attainable range clamp to kAlphaMin / kAlphaMax and set *clamped.
double solve_alpha(double ratio, bool* clamped = nullptr);

struct CellStats {
  double mass = 0.0;
  double centroid = 0.0;
};

// Raw moments of the density restricted to [lo, hi): int x^k f(x) dx.
struct CellMoments {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
};

// Either bound may be infinite. Throws DomainError unless lo < hi.
CellMoments cell_moments(const GgdParams& p, double lo, double hi);

// Mass and conditional mean over [lo, hi). When the mass underflows the
// centroid is the midpoint of the (clipped) cell.
CellStats cell_stats(const GgdParams& p, double lo, double hi);

// int_lo^hi (x - r)^2 f(x) dx, evaluated without cancellation for narrow
// cells far from the origin.
double cell_distortion(const GgdParams& p, double lo, double hi, double r);

struct CellEval {
  double mass = 0.0;
  double centroid = 0.0;
  double distortion = 0.0;
};

// Mass, centroid and int (x - r)^2 f(x) dx over [lo, hi) in one pass. The
// distortion is taken about the centroid when r is not given.
CellEval evaluate_cell(const GgdParams& p, double lo, double hi, std::optional<double> r = std::nullopt);

// P(X >= x) for x >= 0.
double upper_tail_mass(const GgdParams& p, double x);

// x >= 0 with P(X >= x) = mass, for mass in (0, 0.5].
double tail_quantile(const GgdParams& p, double mass);

GgdEstimate estimate_params(std::span<const double> samples);

// Deterministic for a fixed seed. |X| = W^(1/alpha) / eta with
// W ~ Gamma(1/alpha, 1) and an independent random sign.
std::vector<double> sample(const GgdParams& p, std::size_t n, std::uint64_t seed);

}  // namespace ezq
