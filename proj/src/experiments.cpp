#include "ezq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ezq/error.hpp"

namespace ezq {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

double zone_family_rate(const GgdParams& p, double d) {
  double best = INFINITY;
  for (QuantizerKind k : {QuantizerKind::Ezz, QuantizerKind::Soezz, QuantizerKind::Oezz}) {
    const std::vector<int> js = default_j_range(k);
    const auto f = sweep_operating_points(p, k, js, default_lambda_grid(p));
    best = std::min(best, frontier_rate_at(f, d));
  }
  return best;
}

}  // namespace

LossMethod parse_method(const std::string& name) {
  if (name == "auto") return LossMethod::Auto;
  if (name == "model") return LossMethod::Model;
  if (name == "simulation") return LossMethod::Simulation;
  throw ParseError("unknown method '" + name + "'");
}

std::string metadata_line(const std::string& experiment, const ExperimentConfig& cfg) {
  std::ostringstream s;
  s << "tool=ezq version=" << kToolVersion << " experiment=" << experiment << " alphas=";
  for (std::size_t i = 0; i < cfg.alphas.size(); ++i) s << (i ? ";" : "") << num(cfg.alphas[i]);
  s << " n=" << cfg.n << " seed=" << cfg.seed << " grid_points=" << cfg.grid_points
    << " span=" << (cfg.span > 0.0 ? num(cfg.span) : std::string("default")) << " slopes=" << cfg.slopes;
  return s.str();
}

DiscreteSource model_source(double alpha, const ExperimentConfig& cfg) {
  const GgdParams p = GgdParams::make(alpha, 1.0);
  return discretize_ggd(p, cfg.span > 0.0 ? cfg.span : default_span(alpha), cfg.grid_points);
}

RdCurve model_curve(double alpha, const ExperimentConfig& cfg) {
  return rd_curve(model_source(alpha, cfg), cfg.slopes);
}

std::vector<double> decade_grid(int lo_exp, int hi_exp, int per_decade) {
  std::vector<double> g;
  for (int k = lo_exp * per_decade; k <= hi_exp * per_decade; ++k) {
    g.push_back(std::pow(10.0, static_cast<double>(k) / per_decade));
  }
  return g;
}

Fig3Result run_fig3(double alpha, const ExperimentConfig& cfg) {
  if (cfg.n < 1000) throw DomainError("Monte Carlo experiments need n >= 1000");
  Fig3Result res;
  res.alpha = alpha;
  const RdCurve theory = model_curve(alpha, cfg);
  const std::vector<double> xs = sample(GgdParams::make(alpha, 1.0), cfg.n, cfg.seed);
  const RdCurve empirical = rd_curve(discretize_empirical(xs, cfg.grid_points), cfg.slopes);
  res.max_gap_bits = std::max(theory.max_gap_bits(), empirical.max_gap_bits());
  for (double d : decade_grid(-3, 0, 10)) {
    const Fig3Row row{d, rate_at(theory, d), rate_at(empirical, d)};
    res.max_abs_diff = std::max(res.max_abs_diff, std::abs(row.r_theoretical - row.r_empirical));
    res.rows.push_back(row);
  }
  return res;
}

void write_fig3_csv(std::ostream& out, const Fig3Result& r, const std::string& metadata) {
  out << "# " << metadata << "\n";
  out << "alpha,distortion,rate_theoretical,rate_empirical\n";
  for (const Fig3Row& row : r.rows) {
    out << num(r.alpha) << ',' << num(row.d) << ',' << num(row.r_theoretical) << ',' << num(row.r_empirical) << "\n";
  }
  out << "# max_abs_rate_difference=" << num(r.max_abs_diff) << " max_blahut_gap_bits=" << num(r.max_gap_bits)
      << "\n";
}

RdCurvesResult run_rdcurves(double alpha, const ExperimentConfig& cfg, const RdCurve* curve) {
  RdCurvesResult res;
  res.alpha = alpha;
  const GgdParams p = GgdParams::make(alpha, 1.0);
  const RdCurve own = curve ? RdCurve{} : model_curve(alpha, cfg);
  const RdCurve& c = curve ? *curve : own;
  res.max_gap_bits = c.max_gap_bits();
  const std::vector<double> grid = default_lambda_grid(p);
  const std::vector<int> j0{0};
  const auto usq = sweep_operating_points(p, QuantizerKind::Usq, j0, grid);
  const auto ousq = sweep_operating_points(p, QuantizerKind::Ousq, j0, grid);
  auto frontier_rate = [](const std::vector<OperatingPoint>& f, double d) -> std::optional<double> {
    if (d > f.front().distortion || d < f.back().distortion) return std::nullopt;
    return frontier_rate_at(f, d);
  };
  for (double d : decade_grid(-4, 0, 10)) {
    RdCurvesRow row;
    row.d = d;
    if (d >= c.min_distortion()) row.r = rate_at(c, d);
    row.r_sh = std::max(shannon_lower_bound(p, d), 0.0);
    row.r_koshelev = std::max(koshelev_bound(p, d), 0.0);
    row.r_usq = frontier_rate(usq, d);
    row.r_ousq = frontier_rate(ousq, d);
    res.rows.push_back(row);
  }
  return res;
}

void write_rdcurves_csv(std::ostream& out, const RdCurvesResult& r, const std::string& metadata) {
  out << "# " << metadata << "\n";
  out << "alpha,distortion,rate_rd,rate_shannon_lower,rate_koshelev,rate_usq,rate_ousq\n";
  for (const RdCurvesRow& row : r.rows) {
    out << num(r.alpha) << ',' << num(row.d) << ',' << opt(row.r) << ',' << opt(row.r_sh) << ','
        << opt(row.r_koshelev) << ',' << opt(row.r_usq) << ',' << opt(row.r_ousq) << "\n";
  }
  out << "# max_blahut_gap_bits=" << num(r.max_gap_bits) << "\n";
}

std::vector<std::vector<OperatingPoint>> loss_frontiers(double alpha, bool simulated, const ExperimentConfig& cfg) {
  const GgdParams p = GgdParams::make(alpha, 1.0);
  const std::vector<double> grid = default_lambda_grid(p);
  std::vector<double> xs;
  if (simulated) {
    if (cfg.n < 1000) throw DomainError("Monte Carlo experiments need n >= 1000");
    xs = sample(p, cfg.n, cfg.seed);
  }
  std::vector<std::vector<OperatingPoint>> out;
  for (QuantizerKind k : kLossKinds) {
    const std::vector<int> js = default_j_range(k);
    out.push_back(simulated ? sweep_operating_points(xs, k, js, grid) : sweep_operating_points(p, k, js, grid));
  }
  return out;
}

LossResult run_losscurves(double alpha, const ExperimentConfig& cfg, const RdCurve* curve) {
  LossResult res;
  res.alpha = alpha;
  res.simulated = cfg.method == LossMethod::Simulation || (cfg.method == LossMethod::Auto && alpha < 1.0);
  const RdCurve own = curve ? RdCurve{} : model_curve(alpha, cfg);
  const RdCurve& c = curve ? *curve : own;
  res.max_gap_bits = c.max_gap_bits();
  const auto fronts = loss_frontiers(alpha, res.simulated, cfg);
  for (int step = 0; step <= 76; ++step) {
    LossRow row;
    row.r = 0.2 + 0.05 * step;
    const double gmax = g_max(c, row.r);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
      row.loss[k] = gmax - gain(1.0, frontier_distortion_at(fronts[k], row.r));
    }
    const double soezz_gain = row.loss[0] - row.loss[3];
    if (soezz_gain > res.peak_soezz_gain_db) {
      res.peak_soezz_gain_db = soezz_gain;
      res.peak_rate = row.r;
    }
    res.rows.push_back(row);
  }
  return res;
}

void write_losscurves_csv(std::ostream& out, const LossResult& r, const std::string& metadata) {
  out << "# " << metadata << " method=" << (r.simulated ? "simulation" : "model") << "\n";
  out << "alpha,rate";
  for (QuantizerKind k : kLossKinds) out << ",loss_" << to_string(k) << "_db";
  out << "\n";
  for (const LossRow& row : r.rows) {
    out << num(r.alpha) << ',' << num(row.r);
    for (double l : row.loss) out << ',' << num(l);
    out << "\n";
  }
  out << "# peak_usq_minus_soezz_db=" << num(r.peak_soezz_gain_db) << " at_rate=" << num(r.peak_rate)
      << " max_blahut_gap_bits=" << num(r.max_gap_bits) << "\n";
}

CheckpointResult run_checkpoints(const ExperimentConfig& cfg) {
  CheckpointResult res;
  const double d = 0.01;
  for (double alpha : {2.0, 0.25}) {
    const GgdParams p = GgdParams::make(alpha, 1.0);
    const RdPoint rd = rd_point_at(model_source(alpha, cfg), d);
    res.max_gap_bits = std::max(res.max_gap_bits, rd.gap_bits);
    const std::vector<int> j0{0};
    const double ousq = frontier_rate_at(sweep_operating_points(p, QuantizerKind::Ousq, j0, default_lambda_grid(p)), d);
    const double zone = zone_family_rate(p, d);
    const std::string tag = "alpha" + num(alpha) + "_d0.01_";
    res.values.push_back({tag + "rate_rd", rd.rate});
    res.values.push_back({tag + "rate_ousq", ousq});
    res.values.push_back({tag + "rate_best_zero_zone", zone});
    res.values.push_back({tag + "best_zero_zone_minus_rd", zone - rd.rate});
    res.values.push_back({tag + "blahut_gap_bits", rd.gap_bits});
  }
  return res;
}

void write_checkpoints_csv(std::ostream& out, const CheckpointResult& r, const std::string& metadata) {
  out << "# " << metadata << "\n";
  out << "name,value\n";
  for (const Checkpoint& c : r.values) out << c.name << ',' << num(c.value) << "\n";
}

}  // namespace ezq
