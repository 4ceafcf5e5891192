#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ezq/adaptive.hpp"
#include "ezq/coefficient_io.hpp"
#include "ezq/ggd.hpp"

using namespace ezq;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(EZQ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(st));
  return WEXITSTATUS(st);
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / ("ezq_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("cli usage errors exit 1") {
  CHECK(run("") == 1);
  CHECK(run("nosuchcommand") == 1);
  CHECK(run("decode") == 1);
  CHECK(run("fig3 --n 5") == 1);
  CHECK(run("encode x --out y") == 1);  // no target
  CHECK(run("encode x --out y --target-db 10 --target-mse 1") == 1);
  CHECK(run("encode x --out y --target-db 10 --kind usq") == 1);
  CHECK(run("estimate x --format wav") == 1);
  CHECK(run("--version") == 0);
  CHECK(run("--help") == 0);
}

TEST_CASE("cli data errors exit 2") {
  const fs::path d = scratch();
  CHECK(run("estimate " + (d / "missing.txt").string()) == 2);
  {
    std::ofstream(d / "bad.txt") << "1.0\nabc\n";
  }
  CHECK(run("estimate " + (d / "bad.txt").string()) == 2);
  {
    std::ofstream(d / "junk.ezq") << "xyz";
  }
  CHECK(run("decode " + (d / "junk.ezq").string() + " --out " + (d / "o.txt").string()) == 2);
  {
    std::ofstream(d / "ok.txt") << "1\n2\n3\n4\n";
    std::ofstream(d / "bands.txt") << "0,3\n";
  }
  CHECK(run("estimate " + (d / "ok.txt").string() + " --bands " + (d / "bands.txt").string()) == 2);
  fs::remove_all(d);
}

TEST_CASE("cli encode and decode round trip") {
  const fs::path d = scratch();
  std::vector<double> xs = sample(GgdParams::make(0.5, 4.0), 20000, 3);
  const std::vector<double> ys = sample(GgdParams::make(2.0, 0.25), 10000, 4);
  xs.insert(xs.end(), ys.begin(), ys.end());
  xs.insert(xs.end(), 500, 0.0);
  write_samples(d / "in.f32", xs, SampleFormat::F32le);
  {
    std::ofstream(d / "bands.txt") << "0,20000\n20000,30000\n30000,30500\n";
  }
  const std::string common = (d / "in.f32").string() + " --format f32le --bands " + (d / "bands.txt").string();
  REQUIRE(run("encode " + common + " --target-db 15 --out " + (d / "c.ezq").string() + " --report " +
              (d / "rep.csv").string()) == 0);
  REQUIRE(run("decode " + (d / "c.ezq").string() + " --format f32le --out " + (d / "out.f32").string()) == 0);

  const std::vector<EncodedBlock> blocks = read_container(d / "c.ezq");
  REQUIRE(blocks.size() == 3);
  CHECK((blocks[2].side.flags & SideInfo::kDegenerate) != 0);
  std::vector<double> want;
  for (const EncodedBlock& b : blocks) {
    const std::vector<double> r = adaptive_decode(b);
    want.insert(want.end(), r.begin(), r.end());
  }
  const std::vector<double> got = read_samples(d / "out.f32", SampleFormat::F32le);
  REQUIRE(got.size() == xs.size());
  CHECK(got == want);

  // report distortion is the mse of the decoded block
  const std::vector<std::string> rep = lines(d / "rep.csv");
  REQUIRE(rep.size() == 5);
  CHECK(rep[0].rfind("# tool=ezq", 0) == 0);
  const std::vector<std::string> head = split(rep[1]);
  std::size_t dist_col = 0, start_col = 0, end_col = 0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (head[i] == "distortion") dist_col = i;
    if (head[i] == "start") start_col = i;
    if (head[i] == "end") end_col = i;
  }
  REQUIRE(dist_col > 0);
  for (int b = 0; b < 3; ++b) {
    const std::vector<std::string> row = split(rep[2 + b]);
    REQUIRE(row.size() == head.size());
    const std::size_t s = std::stoul(row[start_col]), e = std::stoul(row[end_col]);
    double mse = 0.0, energy = 0.0;
    for (std::size_t i = s; i < e; ++i) {
      mse += (got[i] - xs[i]) * (got[i] - xs[i]);
      energy += xs[i] * xs[i];
    }
    mse /= static_cast<double>(e - s);
    CAPTURE(b);
    CHECK(std::stod(row[dist_col]) == doctest::Approx(mse).epsilon(1e-6));
    if (b < 2) CHECK(10.0 * std::log10(energy / (e - s) / mse) == doctest::Approx(15.0).epsilon(1.0 / 15.0));
  }

  // text output carries the same values
  REQUIRE(run("decode " + (d / "c.ezq").string() + " --out " + (d / "out.txt").string()) == 0);
  CHECK(read_samples(d / "out.txt", SampleFormat::Text) == want);
  fs::remove_all(d);
}

TEST_CASE("cli table written then reused") {
  const fs::path d = scratch();
  REQUIRE(run("soezz-table --alpha 0.5 --alpha 1 --out " + (d / "t.csv").string()) == 0);
  std::ifstream in(d / "t.csv");
  const OperatingPointTable t = read_table_csv(in);
  CHECK(t.kind == QuantizerKind::Soezz);
  CHECK(t.alpha_grid == std::vector<double>{0.5, 1.0});

  write_samples(d / "in.txt", sample(GgdParams::make(1.0, 1.0), 5000, 9), SampleFormat::Text);
  CHECK(run("encode " + (d / "in.txt").string() + " --target-mse 0.01 --table " + (d / "t.csv").string() +
            " --out " + (d / "c.ezq").string()) == 0);
  // table kind mismatch is a data error
  CHECK(run("encode " + (d / "in.txt").string() + " --target-mse 0.01 --kind ezz --table " + (d / "t.csv").string() +
            " --out " + (d / "c.ezq").string()) == 2);
  fs::remove_all(d);
}
