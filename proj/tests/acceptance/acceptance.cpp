// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.
//
// PRIMSYNTH_ACCEPTANCE_DIR selects the scratch directory (default: system temp).

#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <thread>

#include "oracles.hpp"
#include "primsynth/assembly.hpp"
#include "primsynth/geometry.hpp"
#include "primsynth/manifest.hpp"
#include "primsynth/stats.hpp"
#include "primsynth/validate.hpp"
#include "primsynth/volio.hpp"
#include "test_support.hpp"

using namespace primsynth;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kScaleHours = 2.0;
constexpr double kScaleBytes = 6e9;
constexpr double kValidateSeconds = 300.0;
constexpr double kAlpha = 0.001;
constexpr int kDeterminismSamples = 40;
constexpr int kInvariantSamples = 200;
constexpr int kAblationSamples = 50;
constexpr int kRoundTrips = 500;
constexpr int kRasterShapes = 1000;
constexpr int kShellGrids = 100;
constexpr int kProfileDraws = 10000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Outcome& o) {
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  failures += !o.pass;
}

void run_criterion(const std::string& name, const std::function<Outcome()>& fn) {
  try {
    report(name, fn());
  } catch (const std::exception& e) {
    report(name, Outcome{false, std::string("exception: ") + e.what()});
  }
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int precision = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PRIMSYNTH_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::uintmax_t tree_bytes(const fs::path& root) {
  std::uintmax_t total = 0;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) total += e.file_size();
  }
  return total;
}

bool same_bytes(const fs::path& a, const fs::path& b) { return read_file_bytes(a) == read_file_bytes(b); }

fs::path scratch_root() {
  if (const char* env = std::getenv("PRIMSYNTH_ACCEPTANCE_DIR"); env != nullptr && *env != '\0') return env;
  return fs::temp_directory_path();
}

int machine_workers() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

double chi_square_critical(int dof) {
  return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), kAlpha));
}

// ---------------------------------------------------------------------------

struct ScaleRun {
  double seconds = 0.0;
  std::uintmax_t bytes = 0;
  std::array<std::int64_t, kShapeClassCount> drawn{};
  std::int64_t samples = 0;
  int exit_code = -1;
};

ScaleRun run_scale(const fs::path& dir) {
  ScaleRun r;
  const auto t0 = Clock::now();
  r.exit_code = cli("generate --profile 5k --seed 2024 --workers " + std::to_string(machine_workers()) + " --out " +
                    q(dir / "5k"));
  r.seconds = seconds_since(t0);
  if (r.exit_code != 0) return r;
  r.bytes = tree_bytes(dir / "5k");
  const auto st = stats_from_manifest(read_manifest(dir / "5k" / kManifestFileName), dir / "5k", false);
  r.drawn = st.drawn_class_histogram;
  r.samples = st.sample_count;
  return r;
}

Outcome scale_criterion(const ScaleRun& r) {
  if (r.exit_code != 0) return {false, "generate exited with " + std::to_string(r.exit_code)};
  const bool time_ok = r.seconds < kScaleHours * 3600.0;
  const bool size_ok = static_cast<double>(r.bytes) < kScaleBytes;
  std::string detail = std::to_string(r.samples) + " samples in " + fmt(r.seconds / 60.0, 1) + " min on " +
                       std::to_string(machine_workers()) + " worker(s) (limit " + fmt(kScaleHours, 0) + " h: " +
                       (time_ok ? "ok" : "exceeded") + "); output " + fmt(static_cast<double>(r.bytes) / 1e9, 3) +
                       " GB (limit " + fmt(kScaleBytes / 1e9, 0) + " GB: " + (size_ok ? "ok" : "exceeded") + ")";
  return {time_ok && size_ok && r.samples == 5000, detail};
}

Outcome uniformity_criterion(const ScaleRun& r) {
  if (r.exit_code != 0) return {false, "no 5k dataset to draw from"};
  std::int64_t total = 0;
  for (auto h : r.drawn) total += h;
  const double expected = static_cast<double>(total) / kShapeClassCount;
  double chi2 = 0.0;
  for (auto h : r.drawn) chi2 += (static_cast<double>(h) - expected) * (static_cast<double>(h) - expected) / expected;
  const double critical = chi_square_critical(kShapeClassCount - 1);
  return {total >= 3200 && chi2 < critical, "chi2 = " + fmt(chi2, 3) + " over " + std::to_string(total) +
                                                " draws; critical value " + fmt(critical, 3) + " (31 dof, alpha " +
                                                fmt(kAlpha, 3) + ")"};
}

Outcome determinism_criterion(const fs::path& dir) {
  const std::string common = "generate --samples " + std::to_string(kDeterminismSamples) + " --seed 99 --out ";
  if (cli(common + q(dir / "w1") + " --workers 1") != 0) return {false, "workers=1 run failed"};
  if (cli(common + q(dir / "w8") + " --workers 8") != 0) return {false, "workers=8 run failed"};
  std::size_t files = 0;
  std::size_t differing = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "w1")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir / "w1");
    ++files;
    if (!fs::exists(dir / "w8" / rel) || !same_bytes(e.path(), dir / "w8" / rel)) ++differing;
  }
  std::size_t other = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "w8")) other += e.is_regular_file();
  return {differing == 0 && files == other && files == 2 * kDeterminismSamples + 1,
          std::to_string(files) + " files compared, " + std::to_string(differing) + " differ"};
}

Outcome invariant_criterion(const fs::path& dir) {
  if (cli("generate --samples " + std::to_string(kInvariantSamples) + " --seed 7 --out " + q(dir / "inv") +
          " --workers " + std::to_string(machine_workers())) != 0) {
    return {false, "generate failed"};
  }
  const auto t0 = Clock::now();
  const auto report = validate_dataset(dir / "inv" / kManifestFileName);
  const double secs = seconds_since(t0);
  return {report.passed() && report.samples.size() == kInvariantSamples && secs < kValidateSeconds,
          report.summary() + "; validation took " + fmt(secs, 1) + " s (limit " + fmt(kValidateSeconds, 0) + " s)"};
}

Outcome oracle_criterion() {
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> radius(kRadiusMin, 30.0);
  std::uniform_real_distribution<double> scale(0.0, 1.0);
  std::uniform_int_distribution<int> rule(0, XyRule::kCount - 1);
  RandomStream rng(4242);
  std::size_t bad_pixels = 0;
  std::size_t bad_shapes = 0;
  int largest = 0;
  for (int n = 0; n < kRasterShapes; ++n) {
    const double r_max = radius(gen);
    SliceShape shape = sample_xy_shape(XyRule::from_index(rule(gen)), r_max, rng);
    // Every fourth polygon gets half-integer vertices so edges pass through pixel centers.
    if (auto* p = std::get_if<PolygonShape>(&shape); p != nullptr && n % 4 == 0) {
      for (auto& v : p->vertices) v = Point2{std::round(2.0 * v.x) / 2.0, std::round(2.0 * v.y) / 2.0};
    }
    const double s = n % 8 == 0 ? 1.0 : scale(gen);
    const int h = half_extent_for(r_max);
    largest = std::max(largest, 2 * h + 1);
    const auto got = rasterize_slice(shape, s, h);
    const auto want = oracle::slice(shape, s, h);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < got.data().size(); ++i) diff += got.data()[i] != want.data()[i];
    bad_pixels += diff;
    bad_shapes += diff != 0;
  }

  std::uniform_int_distribution<int> side(1, 32);
  std::uniform_real_distribution<double> density(0.05, 0.95);
  std::size_t bad_voxels = 0;
  std::size_t bad_grids = 0;
  for (int n = 0; n < kShellGrids; ++n) {
    Mask3 g(Dims{side(gen), side(gen), side(gen)});
    std::bernoulli_distribution fill(density(gen));
    for (auto& v : g.data()) v = fill(gen);
    const auto got = extract_shell(g);
    const auto want = oracle::shell(g);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < got.size(); ++i) diff += got.data()[i] != want.data()[i];
    bad_voxels += diff;
    bad_grids += diff != 0;
  }
  return {bad_pixels == 0 && bad_voxels == 0 && largest <= 64,
          std::to_string(kRasterShapes) + " shapes (largest " + std::to_string(largest) + "^2): " +
              std::to_string(bad_pixels) + " mismatching pixels in " + std::to_string(bad_shapes) + " shapes; " +
              std::to_string(kShellGrids) + " shell grids: " + std::to_string(bad_voxels) + " mismatching voxels in " +
              std::to_string(bad_grids) + " grids"};
}

Outcome profile_criterion() {
  RandomStream rng(1010);
  std::size_t knot = 0;
  std::size_t pillar = 0;
  std::size_t cone = 0;
  for (int n = 0; n < kProfileDraws; ++n) {
    const ZRule rule = z_rule_from_index(n % kZRuleCount);
    const auto p = sample_profile_params(rule, true, rng);
    if (detail::rising_branch(p, p.z_c) != detail::falling_branch(p, p.z_c) || similarity_ratio(p, p.z_c) != p.o2) {
      ++knot;
    }
    if (rule == ZRule::Pillar) {
      for (int z = 0; z <= p.z_max; ++z) pillar += similarity_ratio(p, z) != 1.0;
    }
    if (rule == ZRule::Cone) cone += similarity_ratio(p, 0) != 0.0 || similarity_ratio(p, p.z_max) != 1.0;
  }
  return {knot == 0 && pillar == 0 && cone == 0,
          std::to_string(kProfileDraws) + " draws: " + std::to_string(knot) + " knot mismatches, " +
              std::to_string(pillar) + " non-unit pillar values, " + std::to_string(cone) + " bad cone endpoints"};
}

Outcome ablation_criterion(const fs::path& dir) {
  std::vector<std::string> problems;
  auto dataset = [&](const std::string& profile) {
    const fs::path out = dir / ("abl-" + profile);
    if (cli("generate --profile " + profile + " --samples " + std::to_string(kAblationSamples) + " --seed 3 --out " +
            q(out) + " --workers " + std::to_string(machine_workers())) != 0) {
      throw std::runtime_error("generate --profile " + profile + " failed");
    }
    return std::pair{read_manifest(out / kManifestFileName), dataset_stats(out / kManifestFileName)};
  };
  std::ostringstream detail;

  {
    const auto [m, st] = dataset("planar");
    std::size_t thick = 0;
    std::size_t samples_with_objects = 0;
    for (const auto& e : m.samples) {
      samples_with_objects += e.accepted_count() > 0;
      for (const auto& p : e.placements) thick += p.z_extent != 1;
    }
    if (thick != 0 || st.max_z_extent != 1 || samples_with_objects != m.samples.size()) {
      problems.push_back("planar");
    }
    detail << "planar: max z-extent " << st.max_z_extent << ", " << thick << " thick objects; ";
  }
  {
    const auto [m, st] = dataset("classes-1x1");
    int classes = 0;
    for (auto h : st.class_histogram) classes += h != 0;
    int drawn = 0;
    for (auto h : st.drawn_class_histogram) drawn += h != 0;
    if (classes != 1 || drawn != 1) problems.push_back("classes-1x1");
    detail << "classes-1x1: " << classes << " class(es) present; ";
  }
  {
    const auto [m, st] = dataset("no-overlap");
    if (st.mean_accepted_overlap != 0.0) problems.push_back("no-overlap");
    detail << "no-overlap: mean accepted overlap " << st.mean_accepted_overlap << "; ";
  }
  {
    const auto [m, st] = dataset("no-ia");
    std::int64_t worst = 0;
    for (auto n : st.distinct_profiles_per_z_rule) worst = std::max(worst, n);
    if (worst > 1) problems.push_back("no-ia");
    detail << "no-ia: at most " << worst << " distinct profile(s) per z-rule";
  }
  std::string names;
  for (const auto& p : problems) names += " " + p;
  if (!problems.empty()) detail << "; failing:" << names;
  return {problems.empty(), detail.str()};
}

Outcome roundtrip_criterion(const fs::path& dir) {
  std::mt19937_64 gen(5150);
  std::uniform_int_distribution<int> side(1, 64);
  std::bernoulli_distribution sparse(0.5);
  std::size_t bad = 0;
  for (int n = 0; n < kRoundTrips; ++n) {
    const bool wide = n % 2 == 1;
    const VolumeHeader header{Dims{side(gen), side(gen), side(gen)}, wide ? VoxelType::UInt16 : VoxelType::UInt8,
                              {1.0, 1.0, 1.0}};
    LabelVolume g(header.dims);
    std::uniform_int_distribution<int> value(0, wide ? 65535 : 255);
    const bool mostly_zero = sparse(gen);
    std::bernoulli_distribution keep(0.1);
    for (auto& v : g.data()) v = (!mostly_zero || keep(gen)) ? static_cast<std::uint16_t>(value(gen)) : 0;
    for (const char* ext : {".nii", ".raw"}) {
      const fs::path p = dir / ("rt" + std::string(ext));
      write_volume(g, header, p);
      const auto back = read_volume(p);
      bad += !(back.grid == g && back.header == header);
    }
  }
  return {bad == 0, std::to_string(kRoundTrips) + " volumes x 2 formats: " + std::to_string(bad) + " mismatches"};
}

}  // namespace

int main() {
  std::cout << "acceptance: scratch under " << scratch_root() << ", " << machine_workers() << " hardware thread(s)"
            << std::endl;
  testing::TempDir scratch_base("primsynth-acceptance");
  const fs::path scratch = scratch_root() == fs::temp_directory_path() ? scratch_base.path() : scratch_root();

  run_criterion("oracle-equivalence", oracle_criterion);
  run_criterion("profile-properties", profile_criterion);
  run_criterion("io-roundtrip", [&] {
    testing::TempDir d("primsynth-rt");
    return roundtrip_criterion(d.path());
  });
  run_criterion("determinism", [&] {
    testing::TempDir d("primsynth-det");
    return determinism_criterion(d.path());
  });
  run_criterion("invariant-suite", [&] {
    testing::TempDir d("primsynth-inv");
    return invariant_criterion(d.path());
  });
  run_criterion("ablation-profiles", [&] {
    testing::TempDir d("primsynth-abl");
    return ablation_criterion(d.path());
  });

  ScaleRun scale;
  {
    const fs::path d = scratch / "scale";
    fs::remove_all(d);
    fs::create_directories(d);
    try {
      scale = run_scale(d);
    } catch (const std::exception& e) {
      std::cout << "scale run error: " << e.what() << std::endl;
    }
    fs::remove_all(d);
  }
  run_criterion("generation-scale", [&] { return scale_criterion(scale); });
  run_criterion("class-uniformity", [&] { return uniformity_criterion(scale); });

  std::cout << "acceptance: " << (8 - failures) << "/8 criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
