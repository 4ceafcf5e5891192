// ezq: command-line front end for the zero-zone quantization library.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ezq/adaptive.hpp"
#include "ezq/coefficient_io.hpp"
#include "ezq/error.hpp"
#include "ezq/experiments.hpp"

namespace fs = std::filesystem;
using namespace ezq;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNonConvergence = 3;

// Blahut gaps above this many bits make an experiment exit with status 3.
constexpr double kGapFailBits = 1e-3;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Writes to --out when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ParseError("cannot write " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// One file per alpha inside directory out, or everything to stdout.
std::ostream& per_alpha(const std::string& out, const std::string& stem, double alpha,
                        std::unique_ptr<std::ofstream>& holder) {
  if (out.empty()) return std::cout;
  fs::create_directories(out);
  const fs::path path = fs::path(out) / (stem + "_alpha" + short_num(alpha) + ".csv");
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw ParseError("cannot write " + path.string());
  return *holder;
}

int check_gap(double gap) {
  if (gap > kGapFailBits) {
    std::cerr << "ezq: rate-distortion iteration did not converge (gap " << gap << " bits)\n";
    return kExitNonConvergence;
  }
  return 0;
}

struct Common {
  std::vector<double> alphas;
  std::size_t n = 1000000;
  std::uint64_t seed = 1;
  std::size_t grid_points = kDefaultGridPoints;
  double span = 0.0;
  std::size_t slopes = kDefaultSlopeCount;
  std::string method = "auto";
  std::string out;

  ExperimentConfig config() const {
    ExperimentConfig c;
    c.alphas = alphas;
    c.n = n;
    c.seed = seed;
    c.grid_points = grid_points;
    c.span = span;
    c.slopes = slopes;
    c.method = parse_method(method);
    return c;
  }
};

void add_experiment_flags(CLI::App* cmd, Common& c, bool sampled) {
  cmd->add_option("--alpha", c.alphas, "GGD shape parameter(s)")->delimiter(',');
  if (sampled) {
    cmd->add_option("--n", c.n, "sample count")->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
    cmd->add_option("--seed", c.seed, "random seed");
  }
  cmd->add_option("--grid-points", c.grid_points, "discretization points")->check(CLI::Range(16, 100001));
  cmd->add_option("--span", c.span, "discretization half-width in sigmas (default depends on alpha)");
  cmd->add_option("--slopes", c.slopes, "slope count of the rate-distortion sweep")->check(CLI::Range(2, 10000));
}

struct CodecArgs {
  std::string input;
  std::string format = "text";
  std::string bands;
  std::string kind = "soezz";
  std::string table;
  std::string out;
  std::string report;
  double target_db = NAN;
  double target_mse = NAN;
};

std::vector<Band> load_bands(const std::string& path, std::size_t n) {
  if (path.empty()) return {Band{0, n}};
  return read_bands(fs::path(path), n);
}

int cmd_estimate(const CodecArgs& a) {
  const std::vector<double> xs = read_samples(fs::path(a.input), parse_format(a.format));
  if (xs.empty()) throw ParseError("input holds no samples");
  const std::vector<Band> bands = load_bands(a.bands, xs.size());
  Sink sink(a.out);
  std::ostream& out = sink.get();
  out << "# tool=ezq version=" << kToolVersion << " experiment=estimate input=" << a.input << "\n";
  out << "band,start,end,n,alpha,sigma2,mu,clamped,degenerate\n";
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const std::span<const double> block(xs.data() + bands[b].start, bands[b].end - bands[b].start);
    out << b << ',' << bands[b].start << ',' << bands[b].end << ',' << block.size() << ',';
    try {
      const GgdEstimate e = estimate_params(block);
      out << num(e.params.alpha) << ',' << num(e.moments.sigma2_hat) << ',' << num(e.moments.mu_hat) << ','
          << (e.clamped ? 1 : 0) << ",0\n";
    } catch (const DegenerateSourceError&) {
      out << ",0,0,0,1\n";
    } catch (const DomainError&) {
      out << ",,,0,1\n";
    }
  }
  return 0;
}

OperatingPointTable load_or_build_table(const CodecArgs& a) {
  if (!a.table.empty()) {
    std::ifstream in(a.table);
    if (!in) throw ParseError("cannot open " + a.table);
    OperatingPointTable t = read_table_csv(in);
    if (t.kind != parse_kind(a.kind)) throw ParseError("table kind does not match --kind");
    return t;
  }
  const std::vector<double> grid = default_alpha_grid();
  return build_table(grid, parse_kind(a.kind));
}

int cmd_encode(const CodecArgs& a) {
  if (std::isnan(a.target_db) == std::isnan(a.target_mse)) {
    throw CLI::ValidationError("encode", "give exactly one of --target-db and --target-mse");
  }
  if (!std::isnan(a.target_mse) && !(a.target_mse > 0.0)) throw CLI::ValidationError("--target-mse", "must be positive");
  const QuantizerKind kind = parse_kind(a.kind);
  if (kind == QuantizerKind::Usq || kind == QuantizerKind::Ousq) {
    throw CLI::ValidationError("--kind", "encode supports ezz, soezz and oezz");
  }
  const std::vector<double> xs = read_samples(fs::path(a.input), parse_format(a.format));
  if (xs.empty()) throw ParseError("input holds no samples");
  const std::vector<Band> bands = load_bands(a.bands, xs.size());
  const OperatingPointTable table = load_or_build_table(a);

  std::vector<EncodedBlock> blocks;
  Sink sink(a.report);
  std::ostream& rep = sink.get();
  rep << "# tool=ezq version=" << kToolVersion << " experiment=encode kind=" << a.kind << " input=" << a.input
      << "\n";
  rep << "band,start,end,n,alpha_hat,table_alpha,j,lambda,rate_bits_per_sample,side_info_bits,distortion,gain_db,"
         "predicted_rate,predicted_distortion,unreachable,degenerate\n";
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const std::span<const double> block(xs.data() + bands[b].start, bands[b].end - bands[b].start);
    double energy = 0.0;
    for (double x : block) energy += x * x;
    energy /= static_cast<double>(block.size());
    double target = a.target_mse;
    if (!std::isnan(a.target_db)) target = energy > 0.0 ? energy * std::pow(10.0, -a.target_db / 10.0) : 1.0;
    const EncodeResult r = adaptive_encode(block, target, table);
    const EncodeReport& e = r.report;
    rep << b << ',' << bands[b].start << ',' << bands[b].end << ',' << block.size() << ','
        << (e.degenerate ? std::string() : num(e.estimate.params.alpha)) << ',' << num(e.table_alpha) << ','
        << r.block.side.j << ',' << num(static_cast<double>(r.block.side.lambda)) << ',' << num(e.rate) << ','
        << num(e.side_bits) << ',' << num(e.distortion) << ',' << num(e.gain_db) << ',' << num(e.predicted_rate)
        << ',' << num(e.predicted_distortion) << ',' << (e.unreachable ? 1 : 0) << ',' << (e.degenerate ? 1 : 0)
        << "\n";
    blocks.push_back(r.block);
  }
  write_container(fs::path(a.out), blocks);
  return 0;
}

int cmd_decode(const CodecArgs& a) {
  const std::vector<EncodedBlock> blocks = read_container(fs::path(a.input));
  std::vector<double> all;
  for (const EncodedBlock& b : blocks) {
    const std::vector<double> r = adaptive_decode(b);
    all.insert(all.end(), r.begin(), r.end());
  }
  write_samples(fs::path(a.out), all, parse_format(a.format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-zone scalar quantization experiments and block codec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Common common;
  CodecArgs codec;

  auto* estimate = app.add_subcommand("estimate", "per-subband GGD parameter estimates");
  estimate->add_option("input", codec.input, "coefficient file")->required();
  estimate->add_option("--format", codec.format, "text or f32le")->check(CLI::IsMember({"text", "f32le"}));
  estimate->add_option("--bands", codec.bands, "subband boundary file");
  estimate->add_option("--out", codec.out, "output CSV (default stdout)");

  auto* fig3 = app.add_subcommand("fig3", "model versus sample rate-distortion curves");
  add_experiment_flags(fig3, common, true);
  fig3->add_option("--out", common.out, "output CSV (default stdout)");

  auto* rdcurves = app.add_subcommand("rdcurves", "R(D), bounds and uniform quantizer rates per alpha");
  add_experiment_flags(rdcurves, common, false);
  rdcurves->add_option("--out", common.out, "output directory (default stdout)");

  auto* losscurves = app.add_subcommand("losscurves", "loss against the rate-distortion limit per quantizer");
  add_experiment_flags(losscurves, common, true);
  losscurves->add_option("--method", common.method, "auto, model or simulation")
      ->check(CLI::IsMember({"auto", "model", "simulation"}));
  losscurves->add_option("--out", common.out, "output directory (default stdout)");

  std::string table_kind = "soezz";
  auto* table = app.add_subcommand("soezz-table", "operating point table per alpha");
  table->add_option("--alpha", common.alphas, "GGD shape parameter(s)")->delimiter(',');
  table->add_option("--kind", table_kind, "ezz, soezz or oezz")->check(CLI::IsMember({"ezz", "soezz", "oezz"}));
  table->add_option("--out", common.out, "output CSV (default stdout)");

  auto* checkpoints = app.add_subcommand("checkpoints", "rates at D = 0.01 for alpha = 2 and 0.25");
  checkpoints->add_option("--out", common.out, "output CSV (default stdout)");

  auto* encode = app.add_subcommand("encode", "adaptive quantization of a coefficient file");
  encode->add_option("input", codec.input, "coefficient file")->required();
  encode->add_option("--format", codec.format, "text or f32le")->check(CLI::IsMember({"text", "f32le"}));
  encode->add_option("--bands", codec.bands, "subband boundary file");
  encode->add_option("--target-db", codec.target_db, "target gain per subband in dB");
  encode->add_option("--target-mse", codec.target_mse, "target mean squared error per subband");
  encode->add_option("--kind", codec.kind, "ezz, soezz or oezz")->check(CLI::IsMember({"ezz", "soezz", "oezz"}));
  encode->add_option("--table", codec.table, "operating point table CSV (default: built on the fly)");
  encode->add_option("--out", codec.out, "encoded container")->required();
  encode->add_option("--report", codec.report, "report CSV (default stdout)");

  auto* decode = app.add_subcommand("decode", "reconstruct coefficients from a container");
  decode->add_option("input", codec.input, "encoded container")->required();
  decode->add_option("--format", codec.format, "text or f32le")->check(CLI::IsMember({"text", "f32le"}));
  decode->add_option("--out", codec.out, "output coefficient file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(codec);
    if (encode->parsed()) return cmd_encode(codec);
    if (decode->parsed()) return cmd_decode(codec);

    ExperimentConfig cfg = common.config();
    if (fig3->parsed()) {
      if (cfg.alphas.empty()) cfg.alphas = {0.67};
      if (cfg.alphas.size() != 1) throw CLI::ValidationError("--alpha", "fig3 takes a single alpha");
      const Fig3Result r = run_fig3(cfg.alphas[0], cfg);
      Sink sink(common.out);
      write_fig3_csv(sink.get(), r, metadata_line("fig3", cfg));
      return check_gap(r.max_gap_bits);
    }
    if (rdcurves->parsed() || losscurves->parsed()) {
      if (cfg.alphas.empty()) cfg.alphas = {0.25, 0.5, 1.0, 2.0};
      double gap = 0.0;
      for (double alpha : cfg.alphas) {
        std::unique_ptr<std::ofstream> holder;
        if (rdcurves->parsed()) {
          const RdCurvesResult r = run_rdcurves(alpha, cfg);
          write_rdcurves_csv(per_alpha(common.out, "rdcurves", alpha, holder), r, metadata_line("rdcurves", cfg));
          gap = std::max(gap, r.max_gap_bits);
        } else {
          const LossResult r = run_losscurves(alpha, cfg);
          write_losscurves_csv(per_alpha(common.out, "losscurves", alpha, holder), r,
                               metadata_line("losscurves", cfg));
          gap = std::max(gap, r.max_gap_bits);
        }
      }
      return check_gap(gap);
    }
    if (table->parsed()) {
      if (cfg.alphas.empty()) cfg.alphas = default_alpha_grid();
      std::sort(cfg.alphas.begin(), cfg.alphas.end());
      const OperatingPointTable t = build_table(cfg.alphas, parse_kind(table_kind));
      Sink sink(common.out);
      write_table_csv(sink.get(), t, metadata_line("soezz-table", cfg) + " kind=" + table_kind);
      return 0;
    }
    if (checkpoints->parsed()) {
      const CheckpointResult r = run_checkpoints(cfg);
      Sink sink(common.out);
      write_checkpoints_csv(sink.get(), r, metadata_line("checkpoints", cfg));
      return check_gap(r.max_gap_bits);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "ezq: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "ezq: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const Error& e) {
    std::cerr << "ezq: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "ezq: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
