#include "ezq/rate_distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ezq/error.hpp"

namespace ezq {
namespace {

// Kernel entries below exp(-kBandExponent) relative to the nearest
// reproduction letter are treated as zero.
constexpr double kBandExponent = 40.0;
// Source letters lighter than this are down-weighted when forming the dual
// (lower-bound) certificate; their cost to the bound is at most ~1e-11 nats
// each.
constexpr double kDualWeightFloor = 1e-10;
// Step exponent schedule for the accelerated update.
// exp(kLogCap) bounds a single dual row weight.
constexpr double kLogCap = 600.0;
// A pruned letter rejoins at kRejoinFactor times the prune threshold once
// its multiplier exceeds 1 + kRejoinMargin.
constexpr double kRejoinMargin = 1e-9;
constexpr double kRejoinFactor = 10.0;
constexpr double kRelaxGrowth = 1.1;
constexpr double kRelaxMax = 4.0;

// Banded kernel K(x_i, y_j) = exp(s (x_i - y_j)^2 - offset_i) over the
// currently active reproduction letters. offset_i = s * (distance from x_i to
// the nearest active letter)^2 keeps every row's largest entry at one.
struct BandedKernel {
  std::vector<std::size_t> row_begin;  // first active column of row i
  std::vector<std::size_t> row_len;
  std::vector<std::size_t> row_offset;  // start of row i in values
  std::vector<double> values;
  std::vector<double> sqdist;
  std::vector<double> log_offset;

  void build(std::span<const double> xs, std::span<const double> ys, double s) {
    const std::size_t n = xs.size();
    row_begin.assign(n, 0);
    row_len.assign(n, 0);
    row_offset.assign(n + 1, 0);
    log_offset.assign(n, 0.0);
    values.clear();
    sqdist.clear();
    const double reach = kBandExponent / -s;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = xs[i];
      auto it = std::lower_bound(ys.begin(), ys.end(), x);
      double dmin = INFINITY;
      if (it != ys.end()) dmin = *it - x;
      if (it != ys.begin()) dmin = std::min(dmin, x - *std::prev(it));
      const double radius = std::sqrt(dmin * dmin + reach);
      const auto first = std::lower_bound(ys.begin(), ys.end(), x - radius);
      const auto last = std::upper_bound(first, ys.end(), x + radius);
      row_begin[i] = static_cast<std::size_t>(first - ys.begin());
      row_len[i] = static_cast<std::size_t>(last - first);
      row_offset[i] = values.size();
      log_offset[i] = s * dmin * dmin;
      for (auto y = first; y != last; ++y) {
        const double d = (x - *y) * (x - *y);
        sqdist.push_back(d);
        values.push_back(std::exp(s * d - log_offset[i]));
      }
    }
    row_offset[n] = values.size();
  }
};

struct BlahutState {
  std::vector<double> den;  // scaled: true denominator = den * exp(log_offset)
  std::vector<double> c;
};

void blahut_pass(const BandedKernel& k, std::span<const double> p, std::span<const double> q,
                 BlahutState& st) {
  const std::size_t n = p.size();
  st.den.assign(n, 0.0);
  st.c.assign(q.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* kv = k.values.data() + k.row_offset[i];
    const double* qv = q.data() + k.row_begin[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < k.row_len[i]; ++j) acc += kv[j] * qv[j];
    st.den[i] = acc;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double w = p[i] / st.den[i];
    const double* kv = k.values.data() + k.row_offset[i];
    double* cv = st.c.data() + k.row_begin[i];
    for (std::size_t j = 0; j < k.row_len[i]; ++j) cv[j] += w * kv[j];
  }
}

struct Bounds {
  double distortion;
  double upper_nats;  // mutual information of the current test channel
  double gap_nats;
  std::vector<double> c_full;  // Blahut multipliers c(y) over the full alphabet
};

// Upper bound: the mutual information of the test channel
// Q(y|x) = q(y) K(x,y) / den(x). Lower bound: Blahut's dual bound
// sD + sum p log lambda - log max_y sum_x p lambda K, evaluated at
// lambda(x) = w(x) / (den(x) M(x)), where M(x) >= 1 absorbs the excess of
// c(y) over one in the neighbourhood of x and w(x) <= 1 discounts negligible
// source letters. Any positive lambda gives a valid bound, but the max must
// run over the whole reproduction alphabet, pruned letters included.
Bounds evaluate_bounds(const BandedKernel& k, const BandedKernel& full, std::span<const double> p,
                       std::span<const double> q, const BlahutState& st, double s, std::size_t n_full) {
  const std::size_t n = p.size();
  double dist = 0.0, log_den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* kv = k.values.data() + k.row_offset[i];
    const double* dv = k.sqdist.data() + k.row_offset[i];
    const double* qv = q.data() + k.row_begin[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < k.row_len[i]; ++j) acc += kv[j] * qv[j] * dv[j];
    dist += p[i] * acc / st.den[i];
    log_den += p[i] * (std::log(st.den[i]) + k.log_offset[i]);
  }
  std::vector<double> log_c(q.size());
  double out_term = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    log_c[j] = std::log(st.c[j]);
    out_term += q[j] * st.c[j] * log_c[j];
  }
  const double upper = s * dist - log_den - out_term;

  // log lambda(x), capped so the column sums below stay finite; the cap only
  // changes which lambda is used, not the validity of the bound.
  std::vector<double> log_lambda(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* kv = k.values.data() + k.row_offset[i];
    const double* lc = log_c.data() + k.row_begin[i];
    double log_m = 0.0;
    for (std::size_t j = 0; j < k.row_len[i]; ++j) log_m = std::max(log_m, kv[j] * lc[j]);
    const double w = std::min(1.0, p[i] / kDualWeightFloor);
    const double raw = std::log(w) - log_m - std::log(st.den[i]) - k.log_offset[i];
    log_lambda[i] = std::min(raw, kLogCap - std::log(p[i]) - full.log_offset[i]);
  }
  auto column_sums = [&](std::vector<double>& out) {
    out.assign(n_full, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double scale = std::exp(std::log(p[i]) + log_lambda[i] + full.log_offset[i]);
      const double* fv = full.values.data() + full.row_offset[i];
      double* cv = out.data() + full.row_begin[i];
      for (std::size_t j = 0; j < full.row_len[i]; ++j) cv[j] += scale * fv[j];
    }
  };
  std::vector<double> c_dual;
  column_sums(c_dual);
  // Second round: divide lambda(x) by the largest column sum it touches, so
  // far-tail letters with a vanishing den(x) cannot dominate the max.
  for (std::size_t i = 0; i < n; ++i) {
    const double* cv = c_dual.data() + full.row_begin[i];
    double m2 = 0.0;
    for (std::size_t j = 0; j < full.row_len[i]; ++j) m2 = std::max(m2, cv[j]);
    log_lambda[i] -= std::log(m2);
  }
  column_sums(c_dual);
  std::vector<double> c_full(n_full, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = p[i] * std::exp(std::min(full.log_offset[i] - k.log_offset[i], 700.0)) / st.den[i];
    const double* fv = full.values.data() + full.row_offset[i];
    double* cv = c_full.data() + full.row_begin[i];
    for (std::size_t j = 0; j < full.row_len[i]; ++j) cv[j] += scale * fv[j];
  }
  double sum_log_lambda = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum_log_lambda += p[i] * log_lambda[i];
  const double max_c = *std::max_element(c_dual.begin(), c_dual.end());
  const double lower = s * dist + sum_log_lambda - std::log(max_c);
  return {dist, upper, std::max(upper - lower, 0.0), std::move(c_full)};
}

// Zero-rate candidate: all reproduction mass on the letter y0 nearest the
// mean. The dual bound with lambda(x) = exp(-s (x - y0)^2) leaves a gap of
// log max_y sum_x p(x) exp(s[(x - y)^2 - (x - y0)^2]) nats.
BlahutResult zero_rate_candidate(std::span<const double> xs, std::span<const double> p, double s) {
  double mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) mean += p[i] * xs[i];
  const auto it = std::lower_bound(xs.begin(), xs.end(), mean);
  double y0 = it == xs.end() ? xs.back() : *it;
  if (it != xs.begin() && (it == xs.end() || mean - *std::prev(it) < *it - mean)) y0 = *std::prev(it);

  double dist = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) dist += p[i] * (xs[i] - y0) * (xs[i] - y0);
  double worst = 0.0;  // log c(y0) = 0
  std::vector<double> e(xs.size());
  for (double y : xs) {
    double top = -INFINITY;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      e[i] = std::log(p[i]) + s * ((xs[i] - y) * (xs[i] - y) - (xs[i] - y0) * (xs[i] - y0));
      top = std::max(top, e[i]);
    }
    double acc = 0.0;
    for (double v : e) acc += std::exp(v - top);
    worst = std::max(worst, top + std::log(acc));
  }
  BlahutResult r;
  r.rate = 0.0;
  r.distortion = dist;
  r.slope = s;
  r.gap_bits = worst / std::numbers::ln2;
  return r;
}

}  // namespace

double DiscreteSource::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) m += probs[i] * points[i];
  return m;
}

double DiscreteSource::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) v += probs[i] * (points[i] - m) * (points[i] - m);
  return v;
}

void DiscreteSource::validate() const {
  if (points.empty() || points.size() != probs.size()) {
    throw DomainError("discrete source needs equally sized, nonempty points and probs");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(points[i])) throw DomainError("invalid discrete source entry");
    if (i > 0 && !(points[i] > points[i - 1])) throw DomainError("discrete source points must increase");
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("discrete source probabilities must sum to one");
}

double default_span(double alpha) { return alpha >= 0.25 ? 20.0 : 40.0; }

DiscreteSource discretize_ggd(const GgdParams& p, double span, std::size_t m_points) {
  p.validate();
  if (!(span > 0.0)) throw DomainError("span must be positive");
  if (m_points < 16) throw DomainError("discretization needs at least 16 points");
  const double half = span * p.sigma();
  const double h = 2.0 * half / static_cast<double>(m_points - 1);
  DiscreteSource src;
  src.points.resize(m_points);
  src.probs.resize(m_points);
  for (std::size_t i = 0; i < m_points; ++i) {
    src.points[i] = -half + h * static_cast<double>(i);
  }
  // Compute the nonnegative half and mirror it, so probs are exactly symmetric.
  for (std::size_t i = 0; i < (m_points + 1) / 2; ++i) {
    const std::size_t mirror = m_points - 1 - i;
    const double x = src.points[mirror];
    const double mass = cell_moments(p, x - h / 2, x + h / 2).m0;
    src.probs[i] = mass;
    src.probs[mirror] = mass;
  }
  const double total = std::accumulate(src.probs.begin(), src.probs.end(), 0.0);
  for (double& pr : src.probs) pr /= total;
  return src;
}

DiscreteSource discretize_ggd(const GgdParams& p) {
  return discretize_ggd(p, default_span(p.alpha), kDefaultGridPoints);
}

DiscreteSource discretize_empirical(std::span<const double> samples, std::size_t m_points) {
  if (m_points < 2) throw DomainError("histogram needs at least two points");
  if (samples.size() < m_points) throw DomainError("fewer samples than histogram points");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *mn, hi = *mx;
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("non-finite sample");
  if (!(hi > lo)) throw DegenerateSourceError("constant input has no histogram");
  const double h = (hi - lo) / static_cast<double>(m_points - 1);
  DiscreteSource src;
  src.points.resize(m_points);
  for (std::size_t i = 0; i < m_points; ++i) src.points[i] = lo + h * static_cast<double>(i);
  src.points.back() = hi;
  std::vector<std::size_t> counts(m_points, 0);
  for (double x : samples) {
    const auto bin = static_cast<std::size_t>(std::llround((x - lo) / h));
    ++counts[std::min(bin, m_points - 1)];
  }
  src.probs.resize(m_points);
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < m_points; ++i) src.probs[i] = static_cast<double>(counts[i]) / n;
  return src;
}

BlahutResult blahut_point(const DiscreteSource& src, double slope, const BlahutOptions& opts) {
  src.validate();
  if (!(slope < 0.0) || !std::isfinite(slope)) throw DomainError("Blahut slope must be negative");

  std::vector<double> xs, p;
  for (std::size_t i = 0; i < src.points.size(); ++i) {
    if (src.probs[i] > opts.source_floor) {
      xs.push_back(src.points[i]);
      p.push_back(src.probs[i]);
    }
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;

  // Slopes steeper than -1/(2 var) always give positive rate.
  double var = 0.0;
  {
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) m += p[i] * xs[i];
    for (std::size_t i = 0; i < xs.size(); ++i) var += p[i] * (xs[i] - m) * (xs[i] - m);
  }
  if (slope * var > -1.0) {
    BlahutResult zero = zero_rate_candidate(xs, p, slope);
    if (zero.gap_bits < opts.gap_tolerance_bits) {
      zero.converged = true;
      return zero;
    }
  }

  std::vector<double> ys = xs;  // reproduction alphabet = source alphabet
  std::vector<std::size_t> active(xs.size());
  std::iota(active.begin(), active.end(), std::size_t{0});
  std::vector<double> q = p;
  BandedKernel kernel;
  kernel.build(xs, ys, slope);
  const BandedKernel full = kernel;
  BlahutState st;

  BlahutResult res;
  res.slope = slope;
  const int check = std::max(opts.check_interval, 1);
  // Over-relaxed update q <- q c^mu. A step is kept only if it lowers
  // -sum p log den, which plain Blahut (mu = 1) always does.
  double mu = 1.0;
  double obj_prev = INFINITY;
  std::vector<double> q_prev;
  int last_check = -check;
  for (int it = 0;; ++it) {
    blahut_pass(kernel, p, q, st);
    double obj = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) obj -= p[i] * (std::log(st.den[i]) + kernel.log_offset[i]);
    if (mu > 1.0 && obj > obj_prev) {
      q = q_prev;
      mu = 1.0;
      blahut_pass(kernel, p, q, st);
      obj = obj_prev;
    } else if (std::isfinite(obj_prev)) {
      mu = std::min(mu * kRelaxGrowth, kRelaxMax);
    }
    obj_prev = obj;
    const bool last = it >= opts.max_iterations;
    // bounds cost a few passes; space the checks out as iterations grow
    if (last || it - last_check >= std::max(check, it / 16)) {
      last_check = it;
      const Bounds b = evaluate_bounds(kernel, full, p, q, st, slope, xs.size());
      res.iterations = it;
      res.distortion = b.distortion;
      res.rate = std::max(b.upper_nats, 0.0) / std::numbers::ln2;
      res.gap_bits = b.gap_nats / std::numbers::ln2;
      res.converged = res.gap_bits < opts.gap_tolerance_bits;
      if (res.converged || last) break;
      // Pruned letters whose multiplier now exceeds one would grow again.
      std::vector<char> is_active(xs.size(), 0);
      for (std::size_t a : active) is_active[a] = 1;
      std::vector<std::size_t> back;
      for (std::size_t y = 0; y < xs.size(); ++y) {
        if (!is_active[y] && b.c_full[y] > 1.0 + kRejoinMargin) back.push_back(y);
      }
      if (!back.empty()) {
        std::vector<double> q_full(xs.size(), 0.0);
        for (std::size_t a = 0; a < active.size(); ++a) q_full[active[a]] = q[a];
        for (std::size_t y : back) {
          q_full[y] = kRejoinFactor * opts.prune_threshold;
          is_active[y] = 1;
        }
        active.clear();
        ys.clear();
        q.clear();
        for (std::size_t y = 0; y < xs.size(); ++y) {
          if (!is_active[y]) continue;
          active.push_back(y);
          ys.push_back(xs[y]);
          q.push_back(q_full[y]);
        }
        const double t = std::accumulate(q.begin(), q.end(), 0.0);
        for (double& v : q) v /= t;
        kernel.build(xs, ys, slope);
        obj_prev = INFINITY;
        mu = 1.0;
        continue;
      }
    }

    q_prev = q;
    double norm = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      q[j] *= mu == 1.0 ? st.c[j] : std::pow(st.c[j], mu);
      norm += q[j];
    }
    bool prune = false;
    for (double& v : q) {
      v /= norm;
      prune = prune || v < opts.prune_threshold;
    }
    if (prune) {
      std::vector<double> keep_y, keep_q;
      std::vector<std::size_t> keep_a;
      for (std::size_t j = 0; j < q.size(); ++j) {
        if (q[j] >= opts.prune_threshold) {
          keep_y.push_back(ys[j]);
          keep_q.push_back(q[j]);
          keep_a.push_back(active[j]);
        }
      }
      active = std::move(keep_a);
      const double kept = std::accumulate(keep_q.begin(), keep_q.end(), 0.0);
      for (double& v : keep_q) v /= kept;
      ys = std::move(keep_y);
      q = std::move(keep_q);
      kernel.build(xs, ys, slope);
      obj_prev = INFINITY;
      mu = 1.0;
    }
  }
  return res;
}

bool RdCurve::all_converged() const {
  return std::all_of(points.begin(), points.end(), [](const RdPoint& pt) { return pt.converged; });
}

double RdCurve::max_gap_bits() const {
  double g = 0.0;
  for (const RdPoint& pt : points) g = std::max(g, pt.gap_bits);
  return g;
}

double RdCurve::min_distortion() const { return points.empty() ? sigma2 : points.front().distortion; }
double RdCurve::max_distortion() const { return sigma2; }
double RdCurve::max_rate() const { return points.empty() ? 0.0 : points.front().rate; }

RdCurve rd_curve(const DiscreteSource& src, std::size_t n_points, const BlahutOptions& opts) {
  if (n_points < 2) throw DomainError("rate-distortion sweep needs at least two slopes");
  src.validate();
  const double var = src.variance();
  if (!(var > 0.0)) throw DegenerateSourceError("source has zero variance");

  const double s_flat = -0.02 / var;
  const double s_steep = -5000.0 / var;
  std::vector<RdPoint> raw;
  raw.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n_points - 1);
    const double s = -std::exp(std::log(-s_flat) + frac * (std::log(-s_steep) - std::log(-s_flat)));
    const BlahutResult r = blahut_point(src, s, opts);
    raw.push_back({r.rate, r.distortion, r.slope, r.gap_bits, r.converged});
  }
  std::sort(raw.begin(), raw.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.distortion < b.distortion; });

  RdCurve curve;
  curve.sigma2 = var;
  for (const RdPoint& pt : raw) {
    if (!curve.points.empty() && std::abs(curve.points.back().rate - pt.rate) < 1e-4) continue;
    curve.points.push_back(pt);
  }
  return curve;
}

RdPoint rd_point_at(const DiscreteSource& src, double d, const BlahutOptions& opts) {
  src.validate();
  if (!(d > 0.0)) throw DomainError("distortion must be positive");
  const double var = src.variance();
  if (d >= var) return {0.0, d, 0.0, 0.0, true};

  // Bracket the slope in log|s|; D grows as s approaches zero.
  double steep = NAN, flat = NAN, d_steep = NAN, d_flat = NAN;
  double log_s = std::log(0.5 / d);
  BlahutResult r;
  for (int it = 0; it < 40; ++it) {
    r = blahut_point(src, -std::exp(log_s), opts);
    const double err = std::log(r.distortion) - std::log(d);
    if (std::abs(err) < 1e-3) break;
    if (err < 0.0) {
      steep = log_s;
      d_steep = std::log(r.distortion);
    } else {
      flat = log_s;
      d_flat = std::log(r.distortion);
    }
    if (std::isnan(steep)) {
      log_s += 1.0;
    } else if (std::isnan(flat)) {
      log_s -= 1.0;
    } else if (d_flat > d_steep) {
      log_s = steep + (std::log(d) - d_steep) * (flat - steep) / (d_flat - d_steep);
    } else {
      log_s = 0.5 * (steep + flat);
    }
  }
  // R'(D) = s in nats, so move along the tangent to d.
  const double rate = std::max(r.rate + r.slope * (d - r.distortion) / std::numbers::ln2, 0.0);
  return {rate, d, r.slope, r.gap_bits, r.converged};
}

double shannon_lower_bound(const GgdParams& p, double d) {
  if (!(d > 0.0)) throw DomainError("distortion must be positive");
  return differential_entropy(p) - 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * d);
}

double koshelev_shift() { return 0.5 * std::log2(std::numbers::pi * std::numbers::e / 6.0); }

double koshelev_bound(const GgdParams& p, double d) { return shannon_lower_bound(p, d) + koshelev_shift(); }

namespace {

// Curve vertices in increasing distortion, closed by the zero-rate endpoint.
std::vector<RdPoint> closed_vertices(const RdCurve& curve) {
  if (curve.points.empty()) throw RangeError("empty rate-distortion curve");
  std::vector<RdPoint> v;
  for (const RdPoint& pt : curve.points) {
    if (pt.distortion < curve.sigma2) v.push_back(pt);
  }
  v.push_back({0.0, curve.sigma2, 0.0, 0.0, true});
  return v;
}

}  // namespace

double rate_at(const RdCurve& curve, double d) {
  if (!(d > 0.0)) throw DomainError("distortion must be positive");
  const std::vector<RdPoint> v = closed_vertices(curve);
  if (d >= curve.sigma2) return 0.0;
  if (d < v.front().distortion) throw RangeError("distortion below the computed curve");
  const auto hi = std::upper_bound(v.begin(), v.end(), d,
                                   [](double x, const RdPoint& pt) { return x < pt.distortion; });
  if (hi == v.begin()) return v.front().rate;
  const auto lo = std::prev(hi);
  if (hi == v.end()) return lo->rate;
  const double t = (std::log(d) - std::log(lo->distortion)) / (std::log(hi->distortion) - std::log(lo->distortion));
  return lo->rate + t * (hi->rate - lo->rate);
}

double invert_rate(const RdCurve& curve, double r) {
  const std::vector<RdPoint> v = closed_vertices(curve);
  if (!(r >= 0.0) || r > v.front().rate) throw RangeError("rate outside the computed curve");
  if (r == 0.0) return curve.sigma2;
  // v has decreasing rate; find the segment whose rate range contains r.
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const RdPoint& a = v[i];
    const RdPoint& b = v[i + 1];
    if (r <= a.rate && r >= b.rate) {
      if (a.rate == b.rate) return a.distortion;
      const double t = (a.rate - r) / (a.rate - b.rate);
      return std::exp(std::log(a.distortion) + t * (std::log(b.distortion) - std::log(a.distortion)));
    }
  }
  return curve.sigma2;
}

double g_max(const RdCurve& curve, double r) { return -10.0 * std::log10(invert_rate(curve, r)); }

}  // namespace ezq
