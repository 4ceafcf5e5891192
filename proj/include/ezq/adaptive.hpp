#pragma once

// Block-adaptive quantization: estimate the source model of a block, pick a
// zero-zone quantizer from a precomputed table, and describe it to the
// decoder in a small side-information record.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ezq/ggd.hpp"
#include "ezq/quantizers.hpp"

namespace ezq {

std::vector<double> default_alpha_grid();

struct OperatingPointTable {
  QuantizerKind kind = QuantizerKind::Soezz;
  std::vector<double> alpha_grid;                 // increasing
  std::vector<std::vector<OperatingPoint>> rows;  // Pareto lists at unit variance

  // Row whose alpha is nearest in log scale.
  std::size_t nearest_row(double alpha) const;
  void validate() const;
};

// Sweeps at unit variance. The lambda grid defaults to default_lambda_grid
// for each alpha; j_range defaults to default_j_range(kind).
OperatingPointTable build_table(std::span<const double> alpha_grid, QuantizerKind kind,
                                std::span<const int> j_range, std::span<const double> lambda_grid);
OperatingPointTable build_table(std::span<const double> alpha_grid, QuantizerKind kind);

// CSV with columns kind,alpha,rate,distortion,j,lambda; values written with enough
// digits to reload bit-exactly.
void write_table_csv(std::ostream& out, const OperatingPointTable& table, const std::string& metadata);
OperatingPointTable read_table_csv(std::istream& in);

// Index of the lowest-rate entry with distortion <= target, or of the
// minimum-distortion entry when none qualifies (*reachable set to false).
std::size_t select_entry(std::span<const OperatingPoint> row, double target, bool* reachable);

struct SideInfo {
  static constexpr std::uint8_t kUnreachable = 0x01;
  static constexpr std::uint8_t kDegenerate = 0x02;

  QuantizerKind kind = QuantizerKind::Ezz;  // Ezz, Soezz or Oezz
  std::uint8_t flags = 0;
  int j = 0;
  float lambda = 1.0f;
  std::vector<float> a_table;

  void validate() const;
  QuantizerSpec spec() const;
  std::size_t payload_bytes() const;  // kind, j, lambda and the table
  std::size_t total_bytes() const;
  bool operator==(const SideInfo&) const = default;
};

inline constexpr std::uint8_t kSideInfoVersion = 1;
inline constexpr std::size_t kSideInfoHeaderBytes = 12;

std::vector<std::uint8_t> serialize(const SideInfo& side);
// Parses one record from the front of bytes; *consumed receives its length.
// Throws ParseError on bad magic, version, kind, table or truncation.
SideInfo parse_side_info(std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr);

struct EncodedBlock {
  SideInfo side;
  std::vector<std::int32_t> indices;
  bool operator==(const EncodedBlock&) const = default;
};

struct EncodeReport {
  GgdEstimate estimate;
  double table_alpha = 0.0;
  OperatingPoint entry;          // unit-variance table entry
  double predicted_rate = 0.0;   // entry.rate
  double predicted_distortion = 0.0;  // entry.distortion * sigma2_hat
  double rate = 0.0;             // plug-in entropy of the indices
  double distortion = 0.0;       // mean squared error of the decoded block
  double side_bits = 0.0;
  double gain_db = 0.0;          // 10 log10(sigma2_hat / distortion), inf when lossless
  bool unreachable = false;
  bool degenerate = false;
};

struct EncodeResult {
  EncodedBlock block;
  EncodeReport report;
};

// Kinds other than EZZ, SOEZZ and OEZZ are rejected.
EncodeResult adaptive_encode(std::span<const double> samples, double target_d, const OperatingPointTable& table);

// Every returned value is exactly representable as a 32-bit float.
std::vector<double> adaptive_decode(const EncodedBlock& block);

}  // namespace ezq
