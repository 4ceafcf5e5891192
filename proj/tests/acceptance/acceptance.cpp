// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ezq/adaptive.hpp"
#include "ezq/experiments.hpp"
#include "ezq/ggd.hpp"
#include "ezq/quantizers.hpp"
#include "ezq/rate_distortion.hpp"

using namespace ezq;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

bool within(double v, double want, double tol) { return std::abs(v - want) <= tol; }

const ExperimentConfig& cfg() {
  static const ExperimentConfig c;
  return c;
}

const RdCurve& gauss_curve() {
  static const RdCurve c = model_curve(2.0, cfg());
  return c;
}

const CheckpointResult& checkpoints() {
  static const CheckpointResult r = run_checkpoints(cfg());
  return r;
}

double checkpoint(const std::string& name) {
  for (const Checkpoint& c : checkpoints().values)
    if (c.name == name) return c.value;
  return NAN;
}

// Only the slopes that land above ~3 bits; the low-rate end is not needed.
RdCurve high_rate_curve(double alpha) {
  const DiscreteSource src = model_source(alpha, cfg());
  RdCurve c;
  c.sigma2 = src.variance();
  const int n = 24;
  for (int i = 0; i < n; ++i) {
    const double s = -10.0 * std::pow(500.0, static_cast<double>(i) / (n - 1));
    const BlahutResult b = blahut_point(src, s / c.sigma2);
    c.points.push_back({b.rate, b.distortion, b.slope, b.gap_bits, b.converged});
  }
  std::sort(c.points.begin(), c.points.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.distortion < b.distortion; });
  return c;
}

Outcome c1() {
  const double r = checkpoint("alpha2_d0.01_rate_rd");
  const double ousq = checkpoint("alpha2_d0.01_rate_ousq");
  const double gap = checkpoint("alpha2_d0.01_blahut_gap_bits");
  return {within(r, 3.32, 0.05) && within(ousq, 3.58, 0.08),
          fmt("R(0.01)=%.4f OUSQ=%.4f blahut_gap=%.1e", r, ousq, gap)};
}

Outcome c2() {
  const double r = checkpoint("alpha0.25_d0.01_rate_rd");
  const double zone = checkpoint("alpha0.25_d0.01_rate_best_zero_zone");
  const double gap_g = checkpoint("alpha2_d0.01_best_zero_zone_minus_rd");
  const double gap_ousq = checkpoint("alpha2_d0.01_rate_ousq") - checkpoint("alpha2_d0.01_rate_rd");
  const bool ok = within(r, 1.50, 0.10) && within(zone, 1.61, 0.10) && within(zone - r, 0.11, 0.05) &&
                  within(gap_g, 0.25, 0.05);
  return {ok, fmt("alpha=0.25: R=%.4f zone=%.4f gap=%.4f; alpha=2: zone gap=%.4f ousq gap=%.4f", r, zone, zone - r,
                  gap_g, gap_ousq)};
}

Outcome c3() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const RdCurve c = high_rate_curve(alpha);
    const RdCurvesResult res = run_rdcurves(alpha, cfg(), &c);
    double lo = INFINITY, hi = -INFINITY;
    int rows = 0;
    for (const RdCurvesRow& row : res.rows) {
      if (!row.r || !row.r_ousq || *row.r < 3.0) continue;
      const double diff = *row.r_ousq - *row.r;
      lo = std::min(lo, diff);
      hi = std::max(hi, diff);
      ++rows;
    }
    ok = ok && rows >= 5 && lo >= 0.0 && hi <= 0.26;
    detail += fmt("alpha=%g: %d rows diff [%.4f, %.4f] bits (%.2f..%.2f dB) gap=%.1e; ", alpha, rows, lo, hi,
                  lo * 20 * std::log10(2.0), hi * 20 * std::log10(2.0), res.max_gap_bits);
  }
  return {ok, detail};
}

Outcome c4() {
  const Fig3Result r = run_fig3(0.67, cfg());
  return {r.max_abs_diff <= 0.05, fmt("max|R_th-R_emp|=%.4f over %zu D values, blahut_gap=%.1e", r.max_abs_diff,
                                      r.rows.size(), r.max_gap_bits)};
}

Outcome c5() {
  const LossResult heavy = run_losscurves(0.25, cfg());
  const LossResult gauss = run_losscurves(2.0, cfg(), &gauss_curve());
  double soezz_at_1 = NAN;
  for (const LossRow& row : heavy.rows)
    if (std::abs(row.r - 1.0) < 1e-9) soezz_at_1 = row.loss[3];
  const bool ok = within(heavy.peak_soezz_gain_db, 0.5, 0.2) && within(gauss.peak_soezz_gain_db, 1.0, 0.3) &&
                  soezz_at_1 <= 0.6;
  return {ok, fmt("alpha=0.25 (%s): peak %.3f dB at R=%.2f, L_SOEZZ(1)=%.3f dB; alpha=2: peak %.3f dB at R=%.2f",
                  heavy.simulated ? "simulated" : "model", heavy.peak_soezz_gain_db, heavy.peak_rate, soezz_at_1,
                  gauss.peak_soezz_gain_db, gauss.peak_rate)};
}

Outcome c6() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ua(std::log(0.2), std::log(3.0));
  std::uniform_int_distribution<int> uj(0, kJMax);
  std::uniform_real_distribution<double> ul(-6.0, 2.0);
  int tested = 0, bad = 0;
  for (int t = 0; t < 300; ++t) {
    const double alpha = std::exp(ua(rng));
    const EzzScale s{uj(rng), std::exp2(ul(rng))};
    const std::vector<double> xs = sample(GgdParams::make(alpha, 1.0), 5000, 500 + t);
    const double e = empirical_rate_distortion(empirical_spec(QuantizerKind::Ezz, s, xs), xs).distortion;
    const double so = empirical_rate_distortion(empirical_spec(QuantizerKind::Soezz, s, xs), xs).distortion;
    const double o = empirical_rate_distortion(empirical_spec(QuantizerKind::Oezz, s, xs), xs).distortion;
    if (!(e >= so && so >= o)) ++bad;
    ++tested;
  }
  return {tested >= 200 && bad == 0, fmt("%d configurations, %d violations", tested, bad)};
}

Outcome c7() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.3, 0.5, 1.0, 2.0}) {
    std::vector<double> err;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const std::vector<double> xs = sample(GgdParams::make(alpha, 1.0), 100000, seed);
      err.push_back(std::abs(estimate_params(xs).params.alpha - alpha) / alpha);
    }
    std::sort(err.begin(), err.end());
    const double med = 0.5 * (err[9] + err[10]);
    ok = ok && med <= 0.05;
    detail += fmt("alpha=%g median rel err %.4f; ", alpha, med);
  }
  return {ok, detail};
}

Outcome c8() {
  const std::vector<double> grid = default_alpha_grid();
  const OperatingPointTable table = build_table(grid, QuantizerKind::Soezz);
  const std::vector<double> xs = sample(GgdParams::make(0.5, 1.0), 100000, 2024);
  double energy = 0.0;
  for (double x : xs) energy += x * x;
  energy /= static_cast<double>(xs.size());
  const double target = energy / 100.0;
  const EncodeResult r = adaptive_encode(xs, target, table);
  const std::vector<double> y = adaptive_decode(r.block);
  double mse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) mse += (y[i] - xs[i]) * (y[i] - xs[i]);
  mse /= static_cast<double>(xs.size());
  const double realized = 10.0 * std::log10(energy / mse);
  const std::vector<std::uint8_t> bytes = serialize(r.block.side);
  std::size_t used = 0;
  const bool side_ok = parse_side_info(bytes, &used) == r.block.side && used == bytes.size() &&
                       serialize(parse_side_info(bytes)) == bytes;
  const bool ok = within(realized, 20.0, 1.0) && std::abs(r.report.rate - r.report.predicted_rate) <= 0.1 &&
                  mse == r.report.distortion && side_ok && !r.report.unreachable;
  return {ok, fmt("gain=%.3f dB rate=%.4f predicted=%.4f mse==reported:%s side round trip:%s", realized,
                  r.report.rate, r.report.predicted_rate, mse == r.report.distortion ? "yes" : "no",
                  side_ok ? "yes" : "no")};
}

bool same_frontier(const std::vector<OperatingPoint>& a, const std::vector<OperatingPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rate != b[i].rate || a[i].distortion != b[i].distortion || a[i].j != b[i].j ||
        a[i].lambda != b[i].lambda)
      return false;
  }
  return true;
}

// Keeps p unless some other point is at least as good in both and better in one,
// or an identical point came first.
std::vector<OperatingPoint> brute_pareto(const std::vector<OperatingPoint>& pts) {
  std::vector<OperatingPoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool keep = true;
    for (std::size_t k = 0; k < pts.size() && keep; ++k) {
      if (k == i) continue;
      const bool le = pts[k].rate <= pts[i].rate && pts[k].distortion <= pts[i].distortion;
      const bool strict = pts[k].rate < pts[i].rate || pts[k].distortion < pts[i].distortion;
      if (le && (strict || k < i)) keep = false;
    }
    if (keep) out.push_back(pts[i]);
  }
  std::sort(out.begin(), out.end(), [](const OperatingPoint& a, const OperatingPoint& b) { return a.rate < b.rate; });
  return out;
}

Outcome c9() {
  // Gaussian closed form
  double worst = 0.0;
  for (int k = -30; k <= 0; ++k) {
    const double d = std::min(std::pow(10.0, k / 10.0), 0.9);
    worst = std::max(worst, std::abs(rate_at(gauss_curve(), d) - 0.5 * std::log2(1.0 / d)));
  }

  // model vs n = 1e6 samples
  struct C {
    double alpha;
    QuantizerKind kind;
    int j;
    double lambda;
  };
  double worst_rate = 0.0, worst_dist = 0.0;
  for (const C c : {C{0.5, QuantizerKind::Soezz, 2, 0.4}, C{1.0, QuantizerKind::Oezz, 1, 0.8},
                    C{2.0, QuantizerKind::Ousq, 0, 0.3}, C{0.3, QuantizerKind::Ezz, 4, 0.1},
                    C{0.67, QuantizerKind::Usq, 0, 0.6}}) {
    const GgdParams p = GgdParams::make(c.alpha, 1.0);
    const std::vector<double> xs = sample(p, 1000000, 99);
    const RateDistortion m = model_rate_distortion(model_spec(c.kind, {c.j, c.lambda}, p), p);
    const RateDistortion e = empirical_rate_distortion(empirical_spec(c.kind, {c.j, c.lambda}, xs), xs);
    worst_rate = std::max(worst_rate, std::abs(m.rate - e.rate));
    worst_dist = std::max(worst_dist, std::abs(m.distortion - e.distortion) / m.distortion);
  }

  // sweep frontier vs enumeration of every (j, lambda)
  bool pareto_ok = true;
  for (double alpha : {0.4, 1.5}) {
    const GgdParams p = GgdParams::make(alpha, 1.0);
    const std::vector<double> xs = sample(p, 50000, 3);
    const std::vector<double> grid = default_lambda_grid(p, 48);
    for (QuantizerKind k : kLossKinds) {
      const std::vector<int> js = default_j_range(k);
      std::vector<OperatingPoint> all;
      for (int j : js)
        for (double l : grid) {
          const RateDistortion rd = empirical_rate_distortion(empirical_spec(k, {j, l}, xs), xs);
          all.push_back({rd.rate, rd.distortion, j, l});
        }
      pareto_ok = pareto_ok && same_frontier(sweep_operating_points(xs, k, js, grid), brute_pareto(all));
    }
  }
  const bool ok = worst <= 0.02 && worst_rate <= 0.01 && worst_dist <= 0.02 && pareto_ok;
  return {ok, fmt("gaussian max err %.2e bits; model vs empirical %.4f bits / %.2f%%; pareto exact:%s", worst,
                  worst_rate, 100 * worst_dist, pareto_ok ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s  %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
