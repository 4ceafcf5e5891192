#pragma once

// Experiment drivers behind the CLI. Each returns its numbers and can write
// them as CSV with a leading "# key=value ..." metadata line.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ezq/ggd.hpp"
#include "ezq/quantizers.hpp"
#include "ezq/rate_distortion.hpp"

namespace ezq {

inline constexpr const char* kToolVersion = "0.1.0";

enum class LossMethod { Auto, Model, Simulation };

struct ExperimentConfig {
  std::vector<double> alphas;
  std::size_t n = 1000000;
  std::uint64_t seed = 1;
  std::size_t grid_points = kDefaultGridPoints;
  double span = 0.0;  // multiples of sigma; 0 picks default_span(alpha)
  std::size_t slopes = kDefaultSlopeCount;
  LossMethod method = LossMethod::Auto;
};

LossMethod parse_method(const std::string& name);

std::string metadata_line(const std::string& experiment, const ExperimentConfig& cfg);

DiscreteSource model_source(double alpha, const ExperimentConfig& cfg);
RdCurve model_curve(double alpha, const ExperimentConfig& cfg);

// log-spaced distortions 10^(lo_exp + k / per_decade) up to 10^hi_exp.
std::vector<double> decade_grid(int lo_exp, int hi_exp, int per_decade);

struct Fig3Row {
  double d = 0.0;
  double r_theoretical = 0.0;
  double r_empirical = 0.0;
};

struct Fig3Result {
  double alpha = 0.0;
  std::vector<Fig3Row> rows;  // D in [1e-3, 1]
  double max_abs_diff = 0.0;
  double max_gap_bits = 0.0;
};

Fig3Result run_fig3(double alpha, const ExperimentConfig& cfg);
void write_fig3_csv(std::ostream& out, const Fig3Result& r, const std::string& metadata);

struct RdCurvesRow {
  double d = 0.0;
  std::optional<double> r, r_sh, r_koshelev, r_usq, r_ousq;
};

struct RdCurvesResult {
  double alpha = 0.0;
  std::vector<RdCurvesRow> rows;
  double max_gap_bits = 0.0;
};

RdCurvesResult run_rdcurves(double alpha, const ExperimentConfig& cfg, const RdCurve* curve = nullptr);
void write_rdcurves_csv(std::ostream& out, const RdCurvesResult& r, const std::string& metadata);

inline constexpr QuantizerKind kLossKinds[] = {QuantizerKind::Usq, QuantizerKind::Ousq, QuantizerKind::Ezz,
                                               QuantizerKind::Soezz, QuantizerKind::Oezz};

struct LossRow {
  double r = 0.0;
  double loss[5] = {};  // dB, in kLossKinds order
};

struct LossResult {
  double alpha = 0.0;
  bool simulated = false;
  std::vector<LossRow> rows;  // R in [0.2, 4]
  double peak_soezz_gain_db = 0.0;  // max over R of L_USQ - L_SOEZZ
  double peak_rate = 0.0;
  double max_gap_bits = 0.0;
};

// Frontiers per kind at unit variance, from the model or from seeded samples.
std::vector<std::vector<OperatingPoint>> loss_frontiers(double alpha, bool simulated, const ExperimentConfig& cfg);
LossResult run_losscurves(double alpha, const ExperimentConfig& cfg, const RdCurve* curve = nullptr);
void write_losscurves_csv(std::ostream& out, const LossResult& r, const std::string& metadata);

struct Checkpoint {
  std::string name;
  double value = 0.0;
};

struct CheckpointResult {
  std::vector<Checkpoint> values;
  double max_gap_bits = 0.0;
};

// Rates at D = 0.01 for alpha = 2 and alpha = 0.25: R(D), OUSQ, best of the
// zero-zone family, and their differences.
CheckpointResult run_checkpoints(const ExperimentConfig& cfg);
void write_checkpoints_csv(std::ostream& out, const CheckpointResult& r, const std::string& metadata);

}  // namespace ezq
