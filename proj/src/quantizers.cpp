#include "ezq/quantizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ezq/error.hpp"

namespace ezq {
namespace {

bool uses_table(QuantizerKind k) {
  return k == QuantizerKind::Ousq || k == QuantizerKind::Oezz;
}

bool uniform_kind(QuantizerKind k) { return k == QuantizerKind::Usq || k == QuantizerKind::Ousq; }

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

std::string to_string(QuantizerKind kind) {
  switch (kind) {
    case QuantizerKind::Usq: return "usq";
    case QuantizerKind::Ousq: return "ousq";
    case QuantizerKind::Ezz: return "ezz";
    case QuantizerKind::Soezz: return "soezz";
    case QuantizerKind::Oezz: return "oezz";
  }
  return "?";
}

QuantizerKind parse_kind(const std::string& name) {
  static const std::map<std::string, QuantizerKind> names = {
      {"usq", QuantizerKind::Usq},     {"ousq", QuantizerKind::Ousq}, {"ezz", QuantizerKind::Ezz},
      {"soezz", QuantizerKind::Soezz}, {"oezz", QuantizerKind::Oezz},
  };
  const auto it = names.find(name);
  if (it == names.end()) throw ParseError("unknown quantizer kind '" + name + "'");
  return it->second;
}

void EzzScale::validate() const {
  if (j < 0 || j > kJMax) throw DomainError("zero-zone exponent out of range");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("step must be positive and finite");
}

double EzzScale::zero_half_width() const { return std::ldexp(lambda, j - 1); }

Cell cell_bounds(const EzzScale& scale, std::int32_t k) {
  scale.validate();
  const double z = scale.zero_half_width();
  if (k == 0) return {-z, z};
  const double mag = std::abs(static_cast<double>(k));
  const Cell pos{z + (mag - 1.0) * scale.lambda, z + mag * scale.lambda};
  if (k > 0) return pos;
  return {-pos.hi, -pos.lo};
}

std::int32_t quantize(const EzzScale& scale, double x) {
  if (!std::isfinite(x)) throw DomainError("cannot quantize a non-finite value");
  const double z = scale.zero_half_width();
  const double mag = std::abs(x);
  if (mag < z) return 0;
  const double k = std::floor((mag - z) / scale.lambda) + 1.0;
  if (k > static_cast<double>(std::numeric_limits<std::int32_t>::max())) {
    throw DomainError("quantization index overflows 32 bits");
  }
  const auto idx = static_cast<std::int32_t>(k);
  return x < 0.0 ? -idx : idx;
}

std::vector<std::int32_t> quantize(const EzzScale& scale, std::span<const double> xs) {
  scale.validate();
  std::vector<std::int32_t> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = quantize(scale, xs[i]);
  return out;
}

double midpoint(const EzzScale& scale, std::int32_t k) {
  if (k == 0) return 0.0;
  const Cell c = cell_bounds(scale, k);
  return 0.5 * (c.lo + c.hi);
}

void QuantizerSpec::validate() const {
  scale.validate();
  if (uniform_kind(kind) && scale.j != 0) throw DomainError("uniform quantizers need j = 0");
  if ((kind == QuantizerKind::Usq || kind == QuantizerKind::Ezz) && !magnitudes.empty()) {
    throw DomainError("midpoint quantizers carry no reconstruction table");
  }
  if (kind == QuantizerKind::Soezz && magnitudes.size() > 1) {
    throw DomainError("SOEZZ carries at most one magnitude");
  }
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const Cell c = cell_bounds(scale, static_cast<std::int32_t>(i + 1));
    if (!(magnitudes[i] >= c.lo && magnitudes[i] <= c.hi)) {
      throw DomainError("reconstruction magnitude outside its cell");
    }
  }
}

double reconstruct(const QuantizerSpec& spec, std::int32_t k, bool* fallback) {
  if (k == 0) return 0.0;
  const auto mag = static_cast<std::size_t>(std::abs(static_cast<std::int64_t>(k)));
  bool wants_table = uses_table(spec.kind) || (spec.kind == QuantizerKind::Soezz && mag == 1);
  if (wants_table && mag <= spec.magnitudes.size()) {
    const double a = spec.magnitudes[mag - 1];
    return k < 0 ? -a : a;
  }
  if (wants_table && fallback) *fallback = true;
  return midpoint(spec.scale, k);
}

std::size_t max_index(const EzzScale& scale, std::span<const double> samples) {
  std::size_t m = 0;
  for (double x : samples) {
    m = std::max(m, static_cast<std::size_t>(std::abs(static_cast<std::int64_t>(quantize(scale, x)))));
  }
  return m;
}

CentroidTable empirical_centroids(const EzzScale& scale, std::span<const double> samples, std::size_t max_k) {
  scale.validate();
  std::vector<double> sum(max_k, 0.0);
  std::vector<std::size_t> count(max_k, 0);
  for (double x : samples) {
    const auto k = static_cast<std::size_t>(std::abs(static_cast<std::int64_t>(quantize(scale, x))));
    if (k >= 1 && k <= max_k) {
      sum[k - 1] += std::abs(x);
      ++count[k - 1];
    }
  }
  CentroidTable t;
  t.a.resize(max_k);
  t.empty.assign(max_k, 0);
  for (std::size_t k = 1; k <= max_k; ++k) {
    const Cell c = cell_bounds(scale, static_cast<std::int32_t>(k));
    if (count[k - 1] == 0) {
      t.a[k - 1] = 0.5 * (c.lo + c.hi);
      t.empty[k - 1] = 1;
    } else {
      t.a[k - 1] = std::clamp(sum[k - 1] / static_cast<double>(count[k - 1]), c.lo, c.hi);
    }
  }
  return t;
}

std::size_t model_cell_count(const EzzScale& scale, const GgdParams& p) {
  scale.validate();
  const double x = tail_quantile(p, kModelTailMass);
  const double z = scale.zero_half_width();
  if (x <= z) return 1;
  return static_cast<std::size_t>(std::ceil((x - z) / scale.lambda));
}

std::vector<double> model_centroids(const EzzScale& scale, const GgdParams& p) {
  const std::size_t n = model_cell_count(scale, p);
  std::vector<double> a(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const Cell c = cell_bounds(scale, static_cast<std::int32_t>(k));
    a[k - 1] = cell_stats(p, c.lo, c.hi).centroid;
  }
  return a;
}

QuantizerSpec model_spec(QuantizerKind kind, const EzzScale& scale, const GgdParams& p) {
  QuantizerSpec spec{kind, scale, {}};
  if (uses_table(kind)) {
    spec.magnitudes = model_centroids(scale, p);
  } else if (kind == QuantizerKind::Soezz) {
    const Cell c = cell_bounds(scale, 1);
    spec.magnitudes = {cell_stats(p, c.lo, c.hi).centroid};
  }
  spec.validate();
  return spec;
}

QuantizerSpec empirical_spec(QuantizerKind kind, const EzzScale& scale, std::span<const double> samples) {
  QuantizerSpec spec{kind, scale, {}};
  if (uses_table(kind)) {
    spec.magnitudes = empirical_centroids(scale, samples, max_index(scale, samples)).a;
  } else if (kind == QuantizerKind::Soezz) {
    spec.magnitudes = empirical_centroids(scale, samples, 1).a;
  }
  spec.validate();
  return spec;
}

namespace {

// Cell-by-cell accumulation over the positive half. recon(k, fallback) gives
// the reconstruction for cell k, or nothing for the cell's own centroid.
template <class Recon>
RateDistortion accumulate_model(const EzzScale& scale, const GgdParams& p, Recon&& recon) {
  const std::size_t n = model_cell_count(scale, p);
  const Cell zero = cell_bounds(scale, 0);
  const CellEval z = evaluate_cell(p, zero.lo, zero.hi, 0.0);
  double neg_entropy = xlog2x(z.mass);
  double dist = z.distortion;
  RateDistortion out;
  for (std::size_t k = 1; k <= n; ++k) {
    const auto ki = static_cast<std::int32_t>(k);
    const Cell c = cell_bounds(scale, ki);
    const std::optional<double> r = recon(ki, out.fallback);
    const CellEval e = evaluate_cell(p, c.lo, c.hi, r);
    neg_entropy += 2.0 * xlog2x(e.mass);
    dist += 2.0 * e.distortion;
  }
  out.rate = std::max(-neg_entropy, 0.0);
  out.distortion = dist;
  return out;
}

// Model point of a kind with its own model reconstruction, without building
// the centroid table first.
RateDistortion model_point(QuantizerKind kind, const EzzScale& scale, const GgdParams& p) {
  if (uniform_kind(kind) && scale.j != 0) throw DomainError("uniform quantizers need j = 0");
  return accumulate_model(scale, p, [&](std::int32_t k, bool&) -> std::optional<double> {
    if (uses_table(kind) || (kind == QuantizerKind::Soezz && k == 1)) return std::nullopt;
    return midpoint(scale, k);
  });
}

}  // namespace

RateDistortion model_rate_distortion(const QuantizerSpec& spec, const GgdParams& p) {
  spec.validate();
  p.validate();
  return accumulate_model(spec.scale, p, [&](std::int32_t k, bool& fallback) -> std::optional<double> {
    return reconstruct(spec, k, &fallback);
  });
}

double plugin_entropy(std::span<const std::int32_t> indices) {
  if (indices.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(indices.begin(), indices.end());
  const auto range = static_cast<std::size_t>(static_cast<std::int64_t>(*hi) - *lo) + 1;
  std::vector<std::size_t> counts;
  if (range <= 4 * indices.size() + 1024) {
    counts.assign(range, 0);
    for (std::int32_t k : indices) ++counts[static_cast<std::size_t>(static_cast<std::int64_t>(k) - *lo)];
  } else {
    std::map<std::int32_t, std::size_t> sparse;
    for (std::int32_t k : indices) ++sparse[k];
    for (const auto& [k, c] : sparse) counts.push_back(c);
  }
  const double n = static_cast<double>(indices.size());
  double h = 0.0;
  for (std::size_t c : counts) h -= xlog2x(static_cast<double>(c) / n);
  return std::max(h, 0.0);
}

RateDistortion empirical_rate_distortion(const QuantizerSpec& spec, std::span<const double> samples) {
  spec.validate();
  if (samples.empty()) throw DomainError("no samples");
  const std::vector<std::int32_t> idx = quantize(spec.scale, samples);
  RateDistortion out;
  double sse = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double e = samples[i] - reconstruct(spec, idx[i], &out.fallback);
    sse += e * e;
  }
  out.distortion = sse / static_cast<double>(samples.size());
  out.rate = plugin_entropy(idx);
  return out;
}

double gain(double sigma2, double d) {
  if (!(d > 0.0)) throw DomainError("distortion must be positive");
  if (!(sigma2 > 0.0)) throw DomainError("variance must be positive");
  return 10.0 * std::log10(sigma2 / d);
}

double loss(const RdCurve& curve, double r, double g) { return g_max(curve, r) - g; }

std::vector<double> default_lambda_grid(const GgdParams& p, std::size_t steps) {
  if (steps < 2) throw DomainError("lambda grid needs at least two steps");
  const double lo = std::exp2(differential_entropy(p) - 6.0);
  const double hi = 16.0 * p.sigma();
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
    grid[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  return grid;
}

std::vector<int> default_j_range(QuantizerKind kind) {
  if (uniform_kind(kind)) return {0};
  std::vector<int> js;
  for (int j = 0; j <= kJMax; ++j) js.push_back(j);
  return js;
}

std::vector<OperatingPoint> pareto_frontier(std::vector<OperatingPoint> points) {
  std::stable_sort(points.begin(), points.end(), [](const OperatingPoint& a, const OperatingPoint& b) {
    return a.rate < b.rate || (a.rate == b.rate && a.distortion < b.distortion);
  });
  std::vector<OperatingPoint> front;
  for (const OperatingPoint& pt : points) {
    if (front.empty() || pt.distortion < front.back().distortion) front.push_back(pt);
  }
  return front;
}

std::vector<OperatingPoint> sweep_operating_points(const GgdParams& p, QuantizerKind kind,
                                                   std::span<const int> j_range,
                                                   std::span<const double> lambda_grid) {
  if (j_range.empty() || lambda_grid.empty()) throw DomainError("empty sweep range");
  std::vector<OperatingPoint> all;
  for (int j : j_range) {
    for (double lambda : lambda_grid) {
      const EzzScale scale{j, lambda};
      scale.validate();
      const RateDistortion rd = model_point(kind, scale, p);
      all.push_back({rd.rate, rd.distortion, j, lambda});
    }
  }
  return pareto_frontier(std::move(all));
}

std::vector<OperatingPoint> sweep_operating_points(std::span<const double> samples, QuantizerKind kind,
                                                   std::span<const int> j_range,
                                                   std::span<const double> lambda_grid) {
  if (j_range.empty() || lambda_grid.empty()) throw DomainError("empty sweep range");
  std::vector<OperatingPoint> all;
  for (int j : j_range) {
    for (double lambda : lambda_grid) {
      const QuantizerSpec spec = empirical_spec(kind, EzzScale{j, lambda}, samples);
      const RateDistortion rd = empirical_rate_distortion(spec, samples);
      all.push_back({rd.rate, rd.distortion, j, lambda});
    }
  }
  return pareto_frontier(std::move(all));
}

std::vector<OperatingPoint> lower_hull(std::span<const OperatingPoint> frontier) {
  std::vector<OperatingPoint> hull;
  for (const OperatingPoint& pt : frontier) {
    while (hull.size() >= 2) {
      const OperatingPoint& a = hull[hull.size() - 2];
      const OperatingPoint& b = hull.back();
      // Drop b when it lies on or above the chord from a to pt.
      const double cross = (b.rate - a.rate) * (pt.distortion - a.distortion) -
                           (b.distortion - a.distortion) * (pt.rate - a.rate);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  return hull;
}

double frontier_rate_at(std::span<const OperatingPoint> frontier, double d) {
  if (frontier.empty()) throw RangeError("empty frontier");
  if (d > frontier.front().distortion || d < frontier.back().distortion) {
    throw RangeError("distortion outside the frontier");
  }
  const std::vector<OperatingPoint> h = lower_hull(frontier);
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const OperatingPoint& a = h[i];
    const OperatingPoint& b = h[i + 1];
    if (d <= a.distortion && d >= b.distortion) {
      const double t = (a.distortion - d) / (a.distortion - b.distortion);
      return a.rate + t * (b.rate - a.rate);
    }
  }
  return h.back().rate;
}

double frontier_distortion_at(std::span<const OperatingPoint> frontier, double r) {
  if (frontier.empty()) throw RangeError("empty frontier");
  if (r < frontier.front().rate || r > frontier.back().rate) throw RangeError("rate outside the frontier");
  const std::vector<OperatingPoint> h = lower_hull(frontier);
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const OperatingPoint& a = h[i];
    const OperatingPoint& b = h[i + 1];
    if (r >= a.rate && r <= b.rate) {
      const double t = (r - a.rate) / (b.rate - a.rate);
      return a.distortion + t * (b.distortion - a.distortion);
    }
  }
  return h.back().distortion;
}

}  // namespace ezq
