#pragma once

// Rate-distortion function of a discretized source under squared error,
// computed with Blahut's alternating minimization, plus the Shannon lower
// bound and the high-resolution scalar quantization (Koshelev / Gish-Pierce)
// bound.

#include <cstddef>
#include <span>
#include <vector>

#include "ezq/ggd.hpp"

namespace ezq {

struct DiscreteSource {
  std::vector<double> points;  // strictly increasing
  std::vector<double> probs;   // nonnegative, sums to 1

  double mean() const;
  double variance() const;
  void validate() const;
};

// Default discretization for a GGD of shape alpha.
inline constexpr std::size_t kDefaultGridPoints = 2001;
double default_span(double alpha);

// Uniform grid of m_points over [-span sigma, span sigma]; each point carries
// the model mass of its cell, renormalized over the grid.
DiscreteSource discretize_ggd(const GgdParams& p, double span, std::size_t m_points);
DiscreteSource discretize_ggd(const GgdParams& p);

// m_points uniformly spaced between min and max of the samples; each sample
// is counted at its nearest grid point.
DiscreteSource discretize_empirical(std::span<const double> samples, std::size_t m_points);

struct BlahutOptions {
  double gap_tolerance_bits = 1e-7;
  int max_iterations = 5000;
  // Reproduction letters whose probability falls below this are removed.
  double prune_threshold = 1e-12;
  // Source letters lighter than this are dropped before iterating.
  double source_floor = 1e-25;
  int check_interval = 10;
};

struct BlahutResult {
  double rate = 0.0;        // bits per sample
  double distortion = 0.0;  // mean squared error
  double slope = 0.0;       // Lagrange parameter s < 0 (per squared unit, nats)
  double gap_bits = 0.0;    // upper minus lower bound at termination
  int iterations = 0;
  bool converged = false;
};

BlahutResult blahut_point(const DiscreteSource& src, double slope, const BlahutOptions& opts = {});

struct RdPoint {
  double rate = 0.0;
  double distortion = 0.0;
  double slope = 0.0;
  double gap_bits = 0.0;
  bool converged = false;
};

// Points ordered by increasing distortion (decreasing rate).
struct RdCurve {
  std::vector<RdPoint> points;
  double sigma2 = 1.0;  // variance of the source the curve was computed for

  bool all_converged() const;
  double max_gap_bits() const;
  double min_distortion() const;
  double max_distortion() const;
  double max_rate() const;
};

inline constexpr std::size_t kDefaultSlopeCount = 64;

// Log-spaced slope sweep covering distortions from about 1e-4 sigma^2 up to
// sigma^2. Points whose rates differ by less than 1e-4 bits are merged.
RdCurve rd_curve(const DiscreteSource& src, std::size_t n_points = kDefaultSlopeCount,
                 const BlahutOptions& opts = {});

// Single point of the curve at distortion d, found by searching the slope.
// The rate is moved from the nearest computed point to d along the tangent.
RdPoint rd_point_at(const DiscreteSource& src, double d, const BlahutOptions& opts = {});

// R_SH(D) = H0 - 0.5 log2(2 pi e D); may be negative.
double shannon_lower_bound(const GgdParams& p, double d);
// 0.5 log2(pi e / 6), the high-resolution scalar quantization penalty.
double koshelev_shift();
double koshelev_bound(const GgdParams& p, double d);

// Rate of the curve at distortion d; piecewise linear in (log D, R).
// Beyond the largest distortion the rate is zero. Throws RangeError below the
// smallest distortion.
double rate_at(const RdCurve& curve, double d);

// D0 with R(D0) = r, interpolated piecewise linearly in (R, log D).
// invert_rate(curve, 0) returns the zero-rate distortion.
double invert_rate(const RdCurve& curve, double r);

// -10 log10 D0 for a curve normalized to unit variance.
double g_max(const RdCurve& curve, double r);

}  // namespace ezq
