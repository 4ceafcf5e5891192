#pragma once

// Scalar quantizers with an enlarged zero zone.
//
// The zero cell is (-lambda 2^(j-1), lambda 2^(j-1)); every other cell has
// width lambda. j = 0 gives the plain uniform quantizer.
//
//   USQ    j = 0, midpoint reconstruction
//   OUSQ   j = 0, centroid reconstruction
//   EZZ    midpoint reconstruction
//   SOEZZ  cells +-1 share one transmitted magnitude a1, midpoints elsewhere
//   OEZZ   centroid reconstruction in every cell

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ezq/ggd.hpp"
#include "ezq/rate_distortion.hpp"

namespace ezq {

enum class QuantizerKind { Usq, Ousq, Ezz, Soezz, Oezz };

std::string to_string(QuantizerKind kind);
// Accepts the lower-case names ("usq", "soezz", ...). Throws ParseError.
QuantizerKind parse_kind(const std::string& name);

inline constexpr int kJMax = 8;

struct EzzScale {
  int j = 0;
  double lambda = 1.0;

  void validate() const;
  double zero_half_width() const;  // lambda 2^(j-1)
};

struct Cell {
  double lo = 0.0;
  double hi = 0.0;
};

Cell cell_bounds(const EzzScale& scale, std::int32_t k);

// Throws DomainError for non-finite x or an index beyond int32 range.
std::int32_t quantize(const EzzScale& scale, double x);
std::vector<std::int32_t> quantize(const EzzScale& scale, std::span<const double> xs);

double midpoint(const EzzScale& scale, std::int32_t k);

struct QuantizerSpec {
  QuantizerKind kind = QuantizerKind::Usq;
  EzzScale scale;
  // Reconstruction magnitudes a_1, a_2, ... for the centroid kinds; a single
  // entry a_1 for SOEZZ; empty for USQ and EZZ.
  std::vector<double> magnitudes;

  void validate() const;
};

// Value for index k. When the kind needs a magnitude the table does not hold,
// the midpoint is used and *fallback is set.
double reconstruct(const QuantizerSpec& spec, std::int32_t k, bool* fallback = nullptr);

struct CentroidTable {
  std::vector<double> a;          // a_1 .. a_max_k
  std::vector<std::uint8_t> empty;  // 1 where the cell held no sample (midpoint used)
};

// a_k = mean |x| over samples falling in cells +-k, for k = 1..max_k.
CentroidTable empirical_centroids(const EzzScale& scale, std::span<const double> samples, std::size_t max_k);

// Largest |k| among the samples' indices.
std::size_t max_index(const EzzScale& scale, std::span<const double> samples);

// Cells k = 1.. until the model mass beyond cell k drops below this.
inline constexpr double kModelTailMass = 1e-10;

// Number of positive cells enumerated for the model.
std::size_t model_cell_count(const EzzScale& scale, const GgdParams& p);
std::vector<double> model_centroids(const EzzScale& scale, const GgdParams& p);

// Reconstruction for kind at this scale, with magnitudes from the model or
// from the samples as the kind requires. USQ/OUSQ need j = 0.
QuantizerSpec model_spec(QuantizerKind kind, const EzzScale& scale, const GgdParams& p);
QuantizerSpec empirical_spec(QuantizerKind kind, const EzzScale& scale, std::span<const double> samples);

struct RateDistortion {
  double rate = 0.0;        // bits per sample
  double distortion = 0.0;  // mean squared error
  bool fallback = false;    // some occupied cell used a midpoint it should not have
};

RateDistortion model_rate_distortion(const QuantizerSpec& spec, const GgdParams& p);
RateDistortion empirical_rate_distortion(const QuantizerSpec& spec, std::span<const double> samples);

// Plug-in entropy of an index stream, bits per symbol.
double plugin_entropy(std::span<const std::int32_t> indices);

// 10 log10(sigma2 / d).
double gain(double sigma2, double d);
// G_max(r) - g.
double loss(const RdCurve& curve, double r, double g);

struct OperatingPoint {
  double rate = 0.0;
  double distortion = 0.0;
  int j = 0;
  double lambda = 0.0;
};

// Log-spaced steps from 2^(H0 - 6) up to 16 sigma, so rates run from about
// 6 bits/sample down to zero.
inline constexpr std::size_t kDefaultLambdaSteps = 96;
std::vector<double> default_lambda_grid(const GgdParams& p, std::size_t steps = kDefaultLambdaSteps);
std::vector<int> default_j_range(QuantizerKind kind);

// Points sorted by increasing rate with strictly decreasing distortion. Among
// exact duplicates the first in (j, lambda) enumeration order survives.
std::vector<OperatingPoint> pareto_frontier(std::vector<OperatingPoint> points);

std::vector<OperatingPoint> sweep_operating_points(const GgdParams& p, QuantizerKind kind,
                                                   std::span<const int> j_range,
                                                   std::span<const double> lambda_grid);
// Same sweep measured on samples instead of the model.
std::vector<OperatingPoint> sweep_operating_points(std::span<const double> samples, QuantizerKind kind,
                                                   std::span<const int> j_range,
                                                   std::span<const double> lambda_grid);

// Lower convex hull of a frontier: the points reachable by time sharing.
std::vector<OperatingPoint> lower_hull(std::span<const OperatingPoint> frontier);

// Rate reachable at distortion d by time sharing between frontier points.
// Throws RangeError outside the frontier's distortion range.
double frontier_rate_at(std::span<const OperatingPoint> frontier, double d);
// Distortion reachable at rate r, same interpolation.
double frontier_distortion_at(std::span<const OperatingPoint> frontier, double r);

}  // namespace ezq
