#include <fstream>

#include "doctest.h"
#include "primsynth/pipeline.hpp"
#include "primsynth/validate.hpp"
#include "test_support.hpp"

using namespace primsynth;
namespace fs = std::filesystem;

namespace {

struct Dataset {
  testing::TempDir dir;
  DatasetManifest manifest;
  fs::path manifest_path;

  explicit Dataset(GenConfig c = {}) {
    c.grid = Dims{40, 40, 40};
    c.m_objects = 5;
    c.n_samples = 4;
    c.master_seed = 5;
    manifest = generate_dataset(c, dir.path(), 2);
    manifest_path = dir / "manifest.json";
  }

  void edit_volume(const std::string& rel, int x, int y, int z, std::uint16_t value) const {
    auto v = read_volume(dir.path() / rel);
    v.grid(x, y, z) = value;
    write_volume(v.grid, v.header, dir.path() / rel);
  }
};

ValidationReport full_check(const fs::path& manifest) {
  ValidationOptions o;
  o.spot_check_fraction = 1.0;
  return validate_dataset(manifest, o);
}

bool only_sample_fails(const ValidationReport& r, std::int64_t index, Check check) {
  for (const auto& s : r.samples) {
    if (s.index == index) {
      if (s[check].status != CheckResult::Status::Fail) return false;
    } else if (!s.passed()) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("a freshly generated dataset validates") {
  const Dataset d;
  const auto r = full_check(d.manifest_path);
  CHECK(r.passed());
  CHECK(r.samples.size() == 4);
  for (const auto& s : r.samples) {
    for (const auto& c : s.checks) CHECK(c.status == CheckResult::Status::Pass);
  }
}

TEST_CASE("other label modes and formats validate") {
  GenConfig c;
  c.label_mode = LabelMode::Instance;
  c.output_format = VolumeFormat::Raw;
  const Dataset inst(c);
  CHECK(full_check(inst.manifest_path).passed());
  GenConfig b;
  b.label_mode = LabelMode::Binary;
  b.overlap_enabled = false;
  const Dataset bin(b);
  CHECK(full_check(bin.manifest_path).passed());
}

TEST_CASE("a foreign S value fails the value-domain check on that sample only") {
  const Dataset d;
  d.edit_volume(d.manifest.samples[2].s_path, 0, 0, 0, 7);
  const auto r = full_check(d.manifest_path);
  CHECK_FALSE(r.passed());
  CHECK(r.failed_samples() == 1);
  CHECK(only_sample_fails(r, 2, Check::ValueDomain));
}

TEST_CASE("a relabeled mask voxel fails the overwrite check") {
  const Dataset d;
  const auto& e = d.manifest.samples[1];
  const auto m = read_volume(d.dir.path() / e.m_path);
  // Find a labeled voxel and give it another valid class label.
  std::size_t idx = 0;
  while (m.grid.data()[idx] == 0) ++idx;
  const int x = static_cast<int>(idx % 40);
  const int y = static_cast<int>(idx / 40 % 40);
  const int z = static_cast<int>(idx / 1600);
  const std::uint16_t other = m.grid.data()[idx] == 1 ? 2 : 1;
  d.edit_volume(e.m_path, x, y, z, other);
  const auto r = full_check(d.manifest_path);
  CHECK(only_sample_fails(r, 1, Check::Overwrite));
}

TEST_CASE("a missing volume fails the files check") {
  const Dataset d;
  fs::remove(d.dir.path() / d.manifest.samples[3].m_path);
  const auto r = full_check(d.manifest_path);
  CHECK(only_sample_fails(r, 3, Check::Files));
}

TEST_CASE("an S voxel erased from a shell fails the shell check") {
  const Dataset d;
  const auto& e = d.manifest.samples[0];
  const auto s = read_volume(d.dir.path() / e.s_path);
  std::size_t idx = 0;
  while (s.grid.data()[idx] == 0) ++idx;
  d.edit_volume(e.s_path, static_cast<int>(idx % 40), static_cast<int>(idx / 40 % 40), static_cast<int>(idx / 1600), 0);
  const auto r = full_check(d.manifest_path);
  CHECK(only_sample_fails(r, 0, Check::ShellMask));
}

TEST_CASE("tampered placement records are caught") {
  Dataset d;
  auto m = d.manifest;
  m.samples[2].placements[0].overlap_ratio = 0.5;
  m.samples[2].placements[0].accepted = true;
  write_manifest(m, d.manifest_path);
  const auto r = full_check(d.manifest_path);
  CHECK_FALSE(r.passed());
  CHECK(r.failed_samples() == 1);
  CHECK_FALSE(r.samples[2].passed());
}

TEST_CASE("dataset-level problems") {
  Dataset d;
  auto m = d.manifest;
  m.samples.pop_back();
  write_manifest(m, d.manifest_path);
  std::ofstream(d.dir / "INCOMPLETE") << "x";
  const auto r = full_check(d.manifest_path);
  CHECK_FALSE(r.passed());
  CHECK(r.dataset_errors.size() >= 2);
  CHECK_THROWS((void)validate_dataset(d.dir / "nope.json"));
}

TEST_CASE("spot-check selection") {
  CHECK(is_spot_checked(0, 0.1));
  int n = 0;
  for (int i = 0; i < 200; ++i) n += is_spot_checked(i, 0.1);
  CHECK((n >= 20 && n <= 21));
  CHECK_FALSE(is_spot_checked(5, 0.0));
  CHECK(is_spot_checked(5, 1.0));
}
