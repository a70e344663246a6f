#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "primsynth/manifest.hpp"
#include "primsynth/preview.hpp"
#include "primsynth/volio.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`, capturing stdout and stderr together.
Result run(const std::string& args) {
  const std::string cmd = std::string("\"") + PRIMSYNTH_CLI + "\" " + args + " 2>&1";
  Result r;
  std::FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("generate, validate, stats and preview") {
  testing::TempDir dir;
  std::ofstream(dir / "cfg.json") << "{ // small run\n \"grid\": [40, 40, 40], \"m_objects\": 4, \"n_samples\": 3 }\n";
  const auto out = dir / "ds";

  const auto gen = run("generate " + q(dir / "cfg.json") + " --out " + q(out) + " --seed 11 --workers 2");
  CHECK_MESSAGE(gen.code == 0, gen.out);
  CHECK(gen.out.find("generated 3 samples") != std::string::npos);
  CHECK(fs::exists(out / "manifest.json"));

  const auto val = run("validate " + q(out / "manifest.json") + " --spot-check 1");
  CHECK_MESSAGE(val.code == 0, val.out);
  CHECK(val.out.find("PASS") != std::string::npos);

  const auto st = run("stats " + q(out / "manifest.json") + " --json");
  REQUIRE_MESSAGE(st.code == 0, st.out);
  const auto j = nlohmann::json::parse(st.out);
  CHECK(j.at("sample_count") == 3);
  CHECK(j.at("class_histogram").size() == 32);
  CHECK(j.at("foreground_fractions").size() == 3);
  std::int64_t drawn = 0;
  for (const auto& c : j.at("class_histogram")) drawn += c.at("drawn").get<std::int64_t>();
  CHECK(drawn == 12);

  const auto table = run("stats " + q(out / "manifest.json"));
  CHECK(table.code == 0);
  CHECK(table.out.find("rejection rate") != std::string::npos);

  const auto pv = run("preview " + q(out / "manifest.json") + " --sample 1 --axis y --out " + q(dir / "p.png"));
  CHECK_MESSAGE(pv.code == 0, pv.out);
  const auto img = primsynth::read_png(dir / "p.png");
  CHECK(img.width == 2 * 40 + primsynth::kPanelGap);
  CHECK(img.height == 40);

  const auto bad_slice = run("preview " + q(out / "manifest.json") + " --slice 10000 --out " + q(dir / "q.png"));
  CHECK(bad_slice.code != 0);
  CHECK(bad_slice.out.find("out of range") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "q.png"));

  // Corrupt one S voxel: validation exits 1 and names the sample.
  const auto manifest = primsynth::read_manifest(out / "manifest.json");
  auto s = primsynth::read_volume(out / manifest.samples[1].s_path);
  s.grid(0, 0, 0) = 7;
  primsynth::write_volume(s.grid, s.header, out / manifest.samples[1].s_path);
  const auto fail = run("validate " + q(out / "manifest.json"));
  CHECK(fail.code == 1);
  CHECK(fail.out.find("sample 1: value_domain") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit 2") {
  testing::TempDir dir;
  std::ofstream(dir / "typo.json") << R"({"intencity": 128})";
  const auto typo = run("generate " + q(dir / "typo.json") + " --out " + q(dir / "x"));
  CHECK(typo.code == 2);
  CHECK(typo.out.find("intencity") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "x" / "manifest.json"));

  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("generate").code == 2);
  CHECK(run("validate " + q(dir / "missing.json")).code == 2);
  CHECK(run("generate --out " + q(dir / "y") + " --profile no-such-profile").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("profiles compose and the planar profile yields flat objects") {
  const auto list = run("profiles");
  CHECK(list.code == 0);
  CHECK(list.out.find("planar") != std::string::npos);
  CHECK(list.out.find("classes-8x4") != std::string::npos);

  testing::TempDir dir;
  std::ofstream(dir / "small.json") << R"({"grid": [48, 48, 48], "m_objects": 5})";
  const auto out = dir / "planar";
  const auto gen = run("generate " + q(dir / "small.json") + " --profile planar --samples 2 --out " + q(out));
  REQUIRE_MESSAGE(gen.code == 0, gen.out);
  const auto m = primsynth::read_manifest(out / "manifest.json");
  CHECK(m.config.planar_mode);
  CHECK(m.samples.size() == 2);
  for (const auto& e : m.samples) {
    for (const auto& p : e.placements) {
      CHECK(p.z_extent == 1);
      CHECK(p.shape_class.z == primsynth::ZRule::Cone);
      if (p.accepted) CHECK(p.overlap_ratio == 0.0);
    }
  }
  CHECK(run("validate " + q(out / "manifest.json")).code == 0);
}
