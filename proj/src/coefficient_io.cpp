#include "ezq/coefficient_io.hpp"

#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "ezq/error.hpp"

namespace ezq {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError("bad number '" + text + "' at line " + std::to_string(line_no));
  }
  return v;
}

std::size_t parse_index(const std::string& text, std::size_t line_no) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("bad band bound '" + text + "' at line " + std::to_string(line_no));
  }
  return static_cast<std::size_t>(std::stoull(text));
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() == 0) return false;
  if (in.gcount() != 4) throw ParseError("truncated container");
  v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
      (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  return true;
}

}  // namespace

SampleFormat parse_format(const std::string& name) {
  if (name == "text") return SampleFormat::Text;
  if (name == "f32le") return SampleFormat::F32le;
  throw ParseError("unknown sample format '" + name + "'");
}

std::vector<double> read_samples(std::istream& in, SampleFormat fmt) {
  std::vector<double> xs;
  if (fmt == SampleFormat::Text) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string t = trim(line);
      if (!t.empty()) xs.push_back(parse_double(t, line_no));
    }
    return xs;
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0) throw ParseError("f32le input length is not a multiple of 4");
  xs.reserve(bytes.size() / 4);
  for (std::size_t i = 0; i < bytes.size(); i += 4) {
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
    const float f = std::bit_cast<float>(v);
    if (!std::isfinite(f)) throw ParseError("non-finite value in f32le input");
    xs.push_back(static_cast<double>(f));
  }
  return xs;
}

std::vector<double> read_samples(const std::filesystem::path& path, SampleFormat fmt) {
  std::ifstream in = open_in(path);
  return read_samples(in, fmt);
}

void write_samples(std::ostream& out, std::span<const double> xs, SampleFormat fmt) {
  if (fmt == SampleFormat::Text) {
    char buf[40];
    for (double x : xs) {
      std::snprintf(buf, sizeof buf, "%.17g\n", x);
      out << buf;
    }
    return;
  }
  for (double x : xs) {
    const auto v = std::bit_cast<std::uint32_t>(static_cast<float>(x));
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
  }
}

void write_samples(const std::filesystem::path& path, std::span<const double> xs, SampleFormat fmt) {
  std::ofstream out = open_out(path);
  write_samples(out, xs, fmt);
}

void validate_bands(std::span<const Band> bands, std::size_t n) {
  std::size_t next = 0;
  for (const Band& b : bands) {
    if (b.start != next) throw ParseError("bands must be ascending, contiguous and start at 0");
    if (!(b.end > b.start)) throw ParseError("empty or reversed band");
    next = b.end;
  }
  if (next != n) throw ParseError("bands do not cover the input exactly");
}

std::vector<Band> read_bands(std::istream& in, std::size_t n) {
  std::vector<Band> bands;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) throw ParseError("expected start,end at line " + std::to_string(line_no));
    bands.push_back({parse_index(trim(t.substr(0, comma)), line_no), parse_index(trim(t.substr(comma + 1)), line_no)});
  }
  if (bands.empty()) throw ParseError("band file lists no bands");
  validate_bands(bands, n);
  return bands;
}

std::vector<Band> read_bands(const std::filesystem::path& path, std::size_t n) {
  std::ifstream in = open_in(path);
  return read_bands(in, n);
}

void write_container(std::ostream& out, std::span<const EncodedBlock> blocks) {
  for (const EncodedBlock& b : blocks) {
    if (b.indices.size() > 0xffffffffu) throw DomainError("block too long for the container");
    put_u32(out, static_cast<std::uint32_t>(b.indices.size()));
    const std::vector<std::uint8_t> side = serialize(b.side);
    out.write(reinterpret_cast<const char*>(side.data()), static_cast<std::streamsize>(side.size()));
    for (std::int32_t k : b.indices) put_u32(out, static_cast<std::uint32_t>(k));
  }
}

void write_container(const std::filesystem::path& path, std::span<const EncodedBlock> blocks) {
  std::ofstream out = open_out(path);
  write_container(out, blocks);
}

std::vector<EncodedBlock> read_container(std::istream& in) {
  std::vector<EncodedBlock> blocks;
  std::uint32_t n = 0;
  while (get_u32(in, n)) {
    EncodedBlock b;
    std::vector<std::uint8_t> head(kSideInfoHeaderBytes);
    in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
    if (in.gcount() != static_cast<std::streamsize>(head.size())) throw ParseError("truncated side info");
    const std::size_t count = head[10] | (head[11] << 8);
    head.resize(kSideInfoHeaderBytes + 4 * count);
    in.read(reinterpret_cast<char*>(head.data() + kSideInfoHeaderBytes), static_cast<std::streamsize>(4 * count));
    if (in.gcount() != static_cast<std::streamsize>(4 * count)) throw ParseError("truncated side info");
    b.side = parse_side_info(head);
    b.indices.resize(n);
    for (std::int32_t& k : b.indices) {
      std::uint32_t v = 0;
      if (!get_u32(in, v)) throw ParseError("truncated index stream");
      k = static_cast<std::int32_t>(v);
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

std::vector<EncodedBlock> read_container(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_container(in);
}

}  // namespace ezq
