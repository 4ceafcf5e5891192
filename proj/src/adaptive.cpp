#include "ezq/adaptive.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ezq/error.hpp"

namespace ezq {
namespace {

bool zone_kind(QuantizerKind k) {
  return k == QuantizerKind::Ezz || k == QuantizerKind::Soezz || k == QuantizerKind::Oezz;
}

std::uint8_t kind_code(QuantizerKind k) {
  switch (k) {
    case QuantizerKind::Ezz: return 0;
    case QuantizerKind::Soezz: return 1;
    case QuantizerKind::Oezz: return 2;
    default: throw DomainError("side info supports EZZ, SOEZZ and OEZZ only");
  }
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_f32(std::vector<std::uint8_t>& out, float f) {
  const auto v = std::bit_cast<std::uint32_t>(f);
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xff));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

float get_f32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
  return std::bit_cast<float>(v);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Nearest float to v that still lies in [lo, hi].
float float_in_cell(double v, double lo, double hi) {
  float f = static_cast<float>(v);
  for (int i = 0; i < 4 && static_cast<double>(f) < lo; ++i) f = std::nextafter(f, INFINITY);
  for (int i = 0; i < 4 && static_cast<double>(f) > hi; ++i) f = std::nextafter(f, -INFINITY);
  if (static_cast<double>(f) < lo || static_cast<double>(f) > hi) {
    throw DomainError("cell too narrow for a 32-bit reconstruction value");
  }
  return f;
}

}  // namespace

std::vector<double> default_alpha_grid() { return {0.25, 0.4, 0.5, 0.67, 0.8, 1.0, 1.3, 2.0}; }

std::size_t OperatingPointTable::nearest_row(double alpha) const {
  if (alpha_grid.empty()) throw RangeError("empty operating point table");
  if (!(alpha > 0.0)) throw DomainError("shape must be positive");
  std::size_t best = 0;
  for (std::size_t i = 1; i < alpha_grid.size(); ++i) {
    if (std::abs(std::log(alpha / alpha_grid[i])) < std::abs(std::log(alpha / alpha_grid[best]))) best = i;
  }
  return best;
}

void OperatingPointTable::validate() const {
  if (alpha_grid.empty() || rows.size() != alpha_grid.size()) throw DomainError("table rows do not match the alpha grid");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0.0) || (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))) {
      throw DomainError("alpha grid must be positive and increasing");
    }
    const auto& row = rows[i];
    if (row.empty()) throw DomainError("empty table row");
    for (std::size_t k = 0; k < row.size(); ++k) {
      EzzScale{row[k].j, row[k].lambda}.validate();
      if (k > 0 && !(row[k].rate >= row[k - 1].rate && row[k].distortion < row[k - 1].distortion)) {
        throw DomainError("table row is not a Pareto list");
      }
    }
  }
}

OperatingPointTable build_table(std::span<const double> alpha_grid, QuantizerKind kind,
                                std::span<const int> j_range, std::span<const double> lambda_grid) {
  if (alpha_grid.empty()) throw DomainError("empty alpha grid");
  OperatingPointTable t;
  t.kind = kind;
  t.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  std::vector<int> js(j_range.begin(), j_range.end());
  if (js.empty()) js = default_j_range(kind);
  for (double a : alpha_grid) {
    const GgdParams p = GgdParams::make(a, 1.0);
    const std::vector<double> grid =
        lambda_grid.empty() ? default_lambda_grid(p) : std::vector<double>(lambda_grid.begin(), lambda_grid.end());
    t.rows.push_back(sweep_operating_points(p, kind, js, grid));
  }
  t.validate();
  return t;
}

OperatingPointTable build_table(std::span<const double> alpha_grid, QuantizerKind kind) {
  return build_table(alpha_grid, kind, {}, {});
}

void write_table_csv(std::ostream& out, const OperatingPointTable& table, const std::string& metadata) {
  out << "# " << metadata << "\n";
  out << "kind,alpha,rate,distortion,j,lambda\n";
  for (std::size_t i = 0; i < table.alpha_grid.size(); ++i) {
    for (const OperatingPoint& pt : table.rows[i]) {
      out << to_string(table.kind) << ',' << fmt(table.alpha_grid[i]) << ',' << fmt(pt.rate) << ','
          << fmt(pt.distortion) << ',' << pt.j << ',' << fmt(pt.lambda) << "\n";
    }
  }
}

OperatingPointTable read_table_csv(std::istream& in) {
  OperatingPointTable t;
  std::string line;
  bool header = false, have_kind = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "kind,alpha,rate,distortion,j,lambda") throw ParseError("unexpected table header");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string f[6];
    for (auto& field : f) {
      if (!std::getline(ss, field, ',')) throw ParseError("short table row at line " + std::to_string(line_no));
    }
    const QuantizerKind kind = parse_kind(f[0]);
    if (have_kind && kind != t.kind) throw ParseError("mixed kinds in one table");
    t.kind = kind;
    have_kind = true;
    OperatingPoint pt;
    double alpha = 0.0;
    try {
      alpha = std::stod(f[1]);
      pt.rate = std::stod(f[2]);
      pt.distortion = std::stod(f[3]);
      pt.j = std::stoi(f[4]);
      pt.lambda = std::stod(f[5]);
    } catch (const std::exception&) {
      throw ParseError("bad number in table at line " + std::to_string(line_no));
    }
    if (t.alpha_grid.empty() || alpha != t.alpha_grid.back()) {
      t.alpha_grid.push_back(alpha);
      t.rows.emplace_back();
    }
    t.rows.back().push_back(pt);
  }
  if (!header || t.rows.empty()) throw ParseError("table has no rows");
  try {
    t.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return t;
}

std::size_t select_entry(std::span<const OperatingPoint> row, double target, bool* reachable) {
  if (row.empty()) throw RangeError("empty table row");
  std::size_t best = row.size();
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i].distortion <= target && (best == row.size() || row[i].rate < row[best].rate)) best = i;
  }
  if (reachable) *reachable = best != row.size();
  if (best != row.size()) return best;
  std::size_t lowest = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i].distortion < row[lowest].distortion) lowest = i;
  }
  return lowest;
}

void SideInfo::validate() const {
  if (!zone_kind(kind)) throw DomainError("side info supports EZZ, SOEZZ and OEZZ only");
  if ((flags & ~(kUnreachable | kDegenerate)) != 0) throw DomainError("unknown side info flags");
  if (kind == QuantizerKind::Ezz && !a_table.empty()) throw DomainError("EZZ side info carries no table");
  if (a_table.size() > std::numeric_limits<std::uint16_t>::max()) throw DomainError("reconstruction table too long");
  spec().validate();
}

QuantizerSpec SideInfo::spec() const {
  QuantizerSpec s{kind, EzzScale{j, static_cast<double>(lambda)}, {}};
  for (float a : a_table) s.magnitudes.push_back(static_cast<double>(a));
  return s;
}

std::size_t SideInfo::payload_bytes() const { return 6 + 4 * a_table.size(); }
std::size_t SideInfo::total_bytes() const { return kSideInfoHeaderBytes + 4 * a_table.size(); }

std::vector<std::uint8_t> serialize(const SideInfo& side) {
  side.validate();
  std::vector<std::uint8_t> out;
  out.reserve(side.total_bytes());
  out.push_back('E');
  out.push_back('Z');
  out.push_back(kSideInfoVersion);
  out.push_back(kind_code(side.kind));
  out.push_back(side.flags);
  out.push_back(static_cast<std::uint8_t>(side.j));
  put_f32(out, side.lambda);
  put_u16(out, static_cast<std::uint16_t>(side.a_table.size()));
  for (float a : side.a_table) put_f32(out, a);
  return out;
}

SideInfo parse_side_info(std::span<const std::uint8_t> bytes, std::size_t* consumed) {
  if (bytes.size() < kSideInfoHeaderBytes) throw ParseError("truncated side info header");
  if (bytes[0] != 'E' || bytes[1] != 'Z') throw ParseError("bad side info magic");
  if (bytes[2] != kSideInfoVersion) throw ParseError("unsupported side info version");
  SideInfo s;
  switch (bytes[3]) {
    case 0: s.kind = QuantizerKind::Ezz; break;
    case 1: s.kind = QuantizerKind::Soezz; break;
    case 2: s.kind = QuantizerKind::Oezz; break;
    default: throw ParseError("unknown quantizer kind in side info");
  }
  s.flags = bytes[4];
  s.j = bytes[5];
  s.lambda = get_f32(bytes, 6);
  const std::size_t count = get_u16(bytes, 10);
  const std::size_t total = kSideInfoHeaderBytes + 4 * count;
  if (bytes.size() < total) throw ParseError("truncated side info table");
  for (std::size_t i = 0; i < count; ++i) s.a_table.push_back(get_f32(bytes, kSideInfoHeaderBytes + 4 * i));
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid side info: ") + e.what());
  }
  if (consumed) *consumed = total;
  return s;
}

std::vector<double> adaptive_decode(const EncodedBlock& block) {
  block.side.validate();
  const QuantizerSpec spec = block.side.spec();
  std::vector<double> out(block.indices.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(static_cast<float>(reconstruct(spec, block.indices[i])));
  }
  return out;
}

EncodeResult adaptive_encode(std::span<const double> samples, double target_d, const OperatingPointTable& table) {
  if (!zone_kind(table.kind)) throw DomainError("adaptive coding needs an EZZ, SOEZZ or OEZZ table");
  if (!(target_d > 0.0)) throw DomainError("target distortion must be positive");
  if (samples.size() < 2) throw DomainError("adaptive coding needs at least two samples");
  table.validate();

  EncodeResult res;
  EncodeReport& rep = res.report;
  SideInfo& side = res.block.side;
  side.kind = table.kind;

  try {
    rep.estimate = estimate_params(samples);
  } catch (const DegenerateSourceError&) {
    side.flags = SideInfo::kDegenerate;
    res.block.indices.assign(samples.size(), 0);
    rep.degenerate = true;
    rep.side_bits = 8.0 * static_cast<double>(side.total_bytes());
    rep.gain_db = INFINITY;
    return res;
  }
  const double sigma2 = rep.estimate.params.sigma2;
  const double sigma = std::sqrt(sigma2);
  const std::size_t row_index = table.nearest_row(rep.estimate.params.alpha);
  rep.table_alpha = table.alpha_grid[row_index];
  const auto& row = table.rows[row_index];

  if (target_d >= sigma2) {
    // Zero rate: the widest zone covering every sample.
    double peak = 0.0;
    for (double x : samples) peak = std::max(peak, std::abs(x));
    side.j = kJMax;
    float lambda = static_cast<float>(std::ldexp(peak, 1 - kJMax));
    while (std::ldexp(static_cast<double>(lambda), kJMax - 1) <= peak) lambda = std::nextafter(lambda, INFINITY);
    side.lambda = lambda;
    rep.entry = {0.0, 1.0, side.j, static_cast<double>(lambda) / sigma};
  } else {
    bool reachable = true;
    rep.entry = row[select_entry(row, target_d / sigma2, &reachable)];
    rep.unreachable = !reachable;
    if (!reachable) side.flags |= SideInfo::kUnreachable;
    side.j = rep.entry.j;
    side.lambda = static_cast<float>(rep.entry.lambda * sigma);
    if (!(side.lambda > 0.0f) || !std::isfinite(side.lambda)) throw DomainError("step not representable as float");
  }
  rep.predicted_rate = rep.entry.rate;
  rep.predicted_distortion = rep.entry.distortion * sigma2;

  const EzzScale scale{side.j, static_cast<double>(side.lambda)};
  res.block.indices = quantize(scale, samples);
  if (side.kind != QuantizerKind::Ezz) {
    std::size_t max_k = 0;
    for (std::int32_t k : res.block.indices) max_k = std::max<std::size_t>(max_k, static_cast<std::size_t>(std::abs(static_cast<std::int64_t>(k))));
    if (side.kind == QuantizerKind::Soezz) max_k = std::min<std::size_t>(max_k, 1);
    const CentroidTable ct = empirical_centroids(scale, samples, max_k);
    for (std::size_t k = 1; k <= max_k; ++k) {
      const Cell c = cell_bounds(scale, static_cast<std::int32_t>(k));
      side.a_table.push_back(float_in_cell(ct.a[k - 1], c.lo, c.hi));
    }
  }

  const std::vector<double> recon = adaptive_decode(res.block);
  double sse = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sse += (samples[i] - recon[i]) * (samples[i] - recon[i]);
  rep.distortion = sse / static_cast<double>(samples.size());
  rep.rate = plugin_entropy(res.block.indices);
  rep.side_bits = 8.0 * static_cast<double>(side.total_bytes());
  rep.gain_db = rep.distortion > 0.0 ? gain(sigma2, rep.distortion) : INFINITY;
  return res;
}

}  // namespace ezq
