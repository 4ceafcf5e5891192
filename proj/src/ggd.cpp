#include "ezq/ggd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "ezq/error.hpp"

namespace ezq {
namespace {

using Policy = boost::math::policies::policy<boost::math::policies::promote_double<false>>;

double lgam(double x) { return boost::math::lgamma(x, Policy()); }
double reg_lower(double s, double t) {
  if (t <= 0.0) return 0.0;
  if (!std::isfinite(t)) return 1.0;
  return boost::math::gamma_p(s, t, Policy());
}
double reg_upper(double s, double t) {
  if (t <= 0.0) return 1.0;
  if (!std::isfinite(t)) return 0.0;
  return boost::math::gamma_q(s, t, Policy());
}

// Gauss-Legendre rules on [-1, 1], computed once by Newton iteration.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule make_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule& fine_rule() {
  static const GaussRule rule = make_rule(24);
  return rule;
}

const GaussRule& coarse_rule() {
  static const GaussRule rule = make_rule(8);
  return rule;
}

// Quantities shared by all evaluations for one parameter set.
struct Shape {
  double alpha;
  double eta;
  double log_norm;  // log(alpha eta / (2 Gamma(1/alpha)))
  double lgamma_inv;

  explicit Shape(const GgdParams& p)
      : alpha(p.alpha),
        eta(ezq::eta(p.alpha, p.sigma())),
        log_norm(std::log(p.alpha) + std::log(eta) - std::numbers::ln2 - lgam(1.0 / p.alpha)),
        lgamma_inv(lgam(1.0 / p.alpha)) {}

  double t(double u) const { return std::pow(eta * u, alpha); }
  double density(double u) const { return std::exp(log_norm - t(u)); }
};

// Narrow cells away from the origin are integrated by Gauss-Legendre on
// pieces over which the exponent changes by at most this much.
constexpr double kMaxExponentStep = 4.0;
constexpr int kMaxPieces = 64;

bool use_quadrature(const Shape& s, double a, double b) {
  return a > 0.0 && std::isfinite(b) && b <= 2.0 * a &&
         (s.t(b) - s.t(a)) <= kMaxExponentStep * kMaxPieces;
}

// Moments of f on [a, b] about the point c: int (u - c)^k f(u) du, k = 0..2.
// Very narrow cells with a small exponent change get the 8-point rule.
CellMoments quadrature(const Shape& s, double a, double b, double c) {
  const double dt = s.t(b) - s.t(a);
  const bool coarse = dt <= 1.0 && (b - a) <= 0.25 * a;
  const GaussRule& rule = coarse ? coarse_rule() : fine_rule();
  const int pieces = coarse ? 1 : std::clamp(static_cast<int>(std::ceil(dt / kMaxExponentStep)), 1, kMaxPieces);
  const double w = (b - a) / pieces;
  CellMoments total;
  for (int piece = 0; piece < pieces; ++piece) {
    const double half = 0.5 * w, mid = a + piece * w + half;
    CellMoments acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = mid + half * rule.nodes[i];
      const double f = rule.weights[i] * s.density(u);
      acc.m0 += f;
      acc.m1 += f * (u - c);
      acc.m2 += f * (u - c) * (u - c);
    }
    total.m0 += acc.m0 * half;
    total.m1 += acc.m1 * half;
    total.m2 += acc.m2 * half;
  }
  return total;
}

// Raw moments from moments about c.
CellMoments shift_to_origin(const CellMoments& m, double c) {
  return {m.m0, m.m1 + c * m.m0, m.m2 + 2.0 * c * m.m1 + c * c * m.m0};
}

// int_a^b u^k f(u) du for 0 <= a < b <= inf via regularized incomplete gamma.
double half_moment_gamma(const Shape& s, double a, double b, int k) {
  const double shape = (k + 1) / s.alpha;
  const double scale = std::exp(lgam(shape) - s.lgamma_inv - k * std::log(s.eta)) / 2.0;
  const double ta = s.t(a);
  const double tb = std::isfinite(b) ? s.t(b) : INFINITY;
  const double pa = reg_lower(shape, ta);
  double diff;
  if (pa < 0.5) {
    diff = reg_lower(shape, tb) - pa;
  } else {
    diff = reg_upper(shape, ta) - reg_upper(shape, tb);
  }
  return scale * std::max(diff, 0.0);
}

CellMoments half_moments(const Shape& s, double a, double b) {
  CellMoments m;
  if (!(a < b)) return m;
  if (use_quadrature(s, a, b)) {
    const double c = 0.5 * (a + b);
    m = shift_to_origin(quadrature(s, a, b, c), c);
  } else {
    m.m0 = half_moment_gamma(s, a, b, 0);
    m.m1 = half_moment_gamma(s, a, b, 1);
    m.m2 = half_moment_gamma(s, a, b, 2);
  }
  return m;
}

CellMoments mirrored(const CellMoments& m) { return {m.m0, -m.m1, m.m2}; }

CellMoments moments_impl(const Shape& s, double lo, double hi) {
  if (lo >= 0.0) return half_moments(s, lo, hi);
  if (hi <= 0.0) return mirrored(half_moments(s, -hi, -lo));
  const CellMoments left = mirrored(half_moments(s, 0.0, -lo));
  const CellMoments right = half_moments(s, 0.0, hi);
  return {left.m0 + right.m0, left.m1 + right.m1, left.m2 + right.m2};
}

void check_interval(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw DomainError("cell requires lo < hi");
  }
}

// Bit generator helpers. Only the engine's raw output is used so sequences
// are identical across standard library implementations.
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  // Marsaglia polar method; the second variate is discarded so each call
  // consumes a whole number of engine outputs.
  for (;;) {
    const double u = 2.0 * uniform_open(rng) - 1.0;
    const double v = 2.0 * uniform_open(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

// Marsaglia & Tsang (2000), unit scale. Shapes below one use the
// Gamma(a) = Gamma(a + 1) * U^(1/a) boost.
double standard_gamma(double shape, std::mt19937_64& rng) {
  if (shape < 1.0) {
    const double g = standard_gamma(shape + 1.0, rng);
    return g * std::exp(std::log(uniform_open(rng)) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

GgdParams GgdParams::make(double alpha, double sigma2) {
  GgdParams p{alpha, sigma2, 0.0};
  p.validate();
  return p;
}

double GgdParams::sigma() const { return std::sqrt(sigma2); }

void GgdParams::validate() const {
  if (!(alpha >= kAlphaMin && alpha <= kAlphaMax)) {
    throw DomainError("GGD shape alpha must lie in [0.1, 10]");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("GGD variance must be positive and finite");
  }
  if (mean != 0.0) throw DomainError("only zero-mean GGD sources are supported");
}

double moment_ratio(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("moment_ratio requires alpha > 0");
  return std::exp(lgam(1.0 / alpha) + lgam(3.0 / alpha) - 2.0 * lgam(2.0 / alpha));
}

double eta(double alpha, double sigma) {
  if (!(alpha > 0.0) || !(sigma > 0.0)) throw DomainError("eta requires alpha > 0 and sigma > 0");
  return std::exp(0.5 * (lgam(3.0 / alpha) - lgam(1.0 / alpha))) / sigma;
}

double pdf(double x, const GgdParams& p) {
  p.validate();
  const Shape s(p);
  return s.density(std::abs(x - p.mean));
}

double differential_entropy(const GgdParams& p) {
  p.validate();
  const Shape s(p);
  return -s.log_norm / std::numbers::ln2 + 1.0 / (p.alpha * std::numbers::ln2);
}

double solve_alpha(double ratio, bool* clamped) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("moment ratio must be positive");
  if (clamped) *clamped = false;
  const double ratio_at_min = moment_ratio(kAlphaMin);
  const double ratio_at_max = moment_ratio(kAlphaMax);
  if (ratio >= ratio_at_min) {
    if (clamped) *clamped = ratio > ratio_at_min;
    return kAlphaMin;
  }
  if (ratio <= ratio_at_max) {
    if (clamped) *clamped = ratio < ratio_at_max;
    return kAlphaMax;
  }
  // moment_ratio is strictly decreasing in alpha.
  double lo = std::log(kAlphaMin), hi = std::log(kAlphaMax);
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double err = moment_ratio(std::exp(mid)) - ratio;
    if (std::abs(err) < 1e-9 || hi - lo < 1e-15) break;
    if (err > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(mid);
}

CellMoments cell_moments(const GgdParams& p, double lo, double hi) {
  check_interval(lo, hi);
  p.validate();
  return moments_impl(Shape(p), lo, hi);
}

CellEval evaluate_cell(const GgdParams& p, double lo, double hi, std::optional<double> r) {
  check_interval(lo, hi);
  p.validate();
  const Shape s(p);
  CellEval out;
  // Moments about a reference point inside the cell keep the distortion free
  // of cancellation for narrow cells.
  CellMoments about;
  double ref = 0.0;
  if (lo >= 0.0 && use_quadrature(s, lo, hi)) {
    ref = 0.5 * (lo + hi);
    about = quadrature(s, lo, hi, ref);
  } else if (hi <= 0.0 && use_quadrature(s, -hi, -lo)) {
    ref = 0.5 * (lo + hi);
    about = quadrature(s, -hi, -lo, -ref);
    about.m1 = -about.m1;
  } else {
    about = moments_impl(s, lo, hi);
  }
  out.mass = std::clamp(about.m0, 0.0, 1.0);
  if (about.m0 > 0.0 && std::isfinite(about.m1 / about.m0)) {
    out.centroid = ref + about.m1 / about.m0;
  } else if (std::isfinite(lo) && std::isfinite(hi)) {
    out.centroid = 0.5 * (lo + hi);
  } else if (std::isfinite(lo)) {
    out.centroid = lo;
  } else if (std::isfinite(hi)) {
    out.centroid = hi;
  } else {
    out.centroid = 0.0;
  }
  out.centroid = std::clamp(out.centroid, lo, hi);
  const double d = r.value_or(out.centroid) - ref;
  out.distortion = std::max(about.m2 - 2.0 * d * about.m1 + d * d * about.m0, 0.0);
  return out;
}

CellStats cell_stats(const GgdParams& p, double lo, double hi) {
  const CellEval e = evaluate_cell(p, lo, hi);
  return {e.mass, e.centroid};
}

double cell_distortion(const GgdParams& p, double lo, double hi, double r) {
  return evaluate_cell(p, lo, hi, r).distortion;
}

double upper_tail_mass(const GgdParams& p, double x) {
  p.validate();
  if (x < 0.0) throw DomainError("upper_tail_mass requires x >= 0");
  const Shape s(p);
  return 0.5 * reg_upper(1.0 / p.alpha, std::isfinite(x) ? s.t(x) : INFINITY);
}

double tail_quantile(const GgdParams& p, double mass) {
  p.validate();
  if (!(mass > 0.0 && mass <= 0.5)) throw DomainError("tail_quantile requires mass in (0, 0.5]");
  const double t = boost::math::gamma_q_inv(1.0 / p.alpha, 2.0 * mass, Policy());
  return std::pow(t, 1.0 / p.alpha) / Shape(p).eta;
}

GgdEstimate estimate_params(std::span<const double> samples) {
  if (samples.size() < 2) throw DomainError("parameter estimation needs at least two samples");
  double sum_sq = 0.0, sum_abs = 0.0;
  for (double x : samples) {
    if (!std::isfinite(x)) throw DomainError("non-finite sample");
    sum_sq += x * x;
    sum_abs += std::abs(x);
  }
  if (sum_abs == 0.0) throw DegenerateSourceError("all samples are zero");

  GgdEstimate est;
  const double n = static_cast<double>(samples.size());
  est.moments = {sum_sq / n, sum_abs / n, samples.size()};
  const double ratio = est.moments.sigma2_hat / (est.moments.mu_hat * est.moments.mu_hat);
  est.params.alpha = solve_alpha(ratio, &est.clamped);
  est.params.sigma2 = est.moments.sigma2_hat;
  est.params.mean = 0.0;
  return est;
}

std::vector<double> sample(const GgdParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  const double shape = 1.0 / p.alpha;
  const double inv_eta = 1.0 / eta(p.alpha, p.sigma());
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (double& x : out) {
    const double w = standard_gamma(shape, rng);
    const double magnitude = std::pow(w, shape) * inv_eta;
    x = (rng() >> 63) ? -magnitude : magnitude;
  }
  return out;
}

}  // namespace ezq
