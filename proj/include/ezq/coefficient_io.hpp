#pragma once

// Coefficient files, subband boundary files and the encoded container.
//
// Container: one section per subband, each
//   u32 n (little-endian), side-info record, n x i32 little-endian indices.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ezq/adaptive.hpp"

namespace ezq {

enum class SampleFormat { Text, F32le };

SampleFormat parse_format(const std::string& name);

// Text: one number per line, blank lines ignored. F32le: raw 32-bit floats.
std::vector<double> read_samples(std::istream& in, SampleFormat fmt);
std::vector<double> read_samples(const std::filesystem::path& path, SampleFormat fmt);
// Text output uses 17 significant digits so doubles reload exactly.
void write_samples(std::ostream& out, std::span<const double> xs, SampleFormat fmt);
void write_samples(const std::filesystem::path& path, std::span<const double> xs, SampleFormat fmt);

// Half-open index range [start, end).
struct Band {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Band&) const = default;
};

// One "start,end" pair per line; '#' starts a comment. Bands must be
// ascending, non-overlapping and cover [0, n) exactly.
std::vector<Band> read_bands(std::istream& in, std::size_t n);
std::vector<Band> read_bands(const std::filesystem::path& path, std::size_t n);
void validate_bands(std::span<const Band> bands, std::size_t n);

void write_container(std::ostream& out, std::span<const EncodedBlock> blocks);
void write_container(const std::filesystem::path& path, std::span<const EncodedBlock> blocks);
std::vector<EncodedBlock> read_container(std::istream& in);
std::vector<EncodedBlock> read_container(const std::filesystem::path& path);

}  // namespace ezq
