// primsynth: generate, validate, summarize and preview synthetic
// primitive-shape segmentation datasets.
//
// Exit codes: 0 success, 1 validation/content failure, 2 usage, configuration or I/O failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "primsynth/config.hpp"
#include "primsynth/errors.hpp"
#include "primsynth/manifest.hpp"
#include "primsynth/pipeline.hpp"
#include "primsynth/preview.hpp"
#include "primsynth/stats.hpp"
#include "primsynth/validate.hpp"
#include "primsynth/volio.hpp"

namespace fs = std::filesystem;
using namespace primsynth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitContent = 1;
constexpr int kExitUsage = 2;

struct GenerateArgs {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  int workers = 0;
  std::vector<std::string> profiles;
};

int cmd_generate(const GenerateArgs& args) {
  GenConfig config;
  for (const auto& p : args.profiles) apply_config_json(config, load_profile(p));
  if (!args.config_path.empty()) apply_config_json(config, read_config_file(args.config_path));
  if (args.seed) config.master_seed = *args.seed;
  if (args.samples) config.n_samples = *args.samples;
  config.validate();

  const int workers = args.workers > 0 ? args.workers : default_worker_count();
  const auto t0 = std::chrono::steady_clock::now();
  const DatasetManifest manifest = generate_dataset(config, args.out, workers);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  for (const auto& s : manifest.samples) {
    for (const auto& p : s.placements) (p.accepted ? accepted : rejected) += 1;
  }
  const double rate = accepted + rejected == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(accepted + rejected);
  std::cout << "generated " << manifest.samples.size() << " samples in " << std::fixed << std::setprecision(1)
            << seconds << " s with " << workers << " workers; rejected objects " << rejected << "/"
            << accepted + rejected << " (" << std::setprecision(2) << 100.0 * rate << "%); manifest "
            << (fs::path(args.out) / kManifestFileName).string() << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& manifest_path, double spot_check) {
  ValidationOptions options;
  options.spot_check_fraction = spot_check;
  const ValidationReport report = validate_dataset(manifest_path, options);
  for (const auto& e : report.dataset_errors) std::cout << "dataset: " << e << "\n";
  for (const auto& s : report.samples) {
    for (std::size_t c = 0; c < kCheckCount; ++c) {
      if (s.checks[c].status == CheckResult::Status::Fail) {
        std::cout << "sample " << s.index << ": " << check_name(static_cast<Check>(c)) << ": " << s.checks[c].detail
                  << "\n";
      }
    }
  }
  std::cout << (report.passed() ? "PASS: " : "FAIL: ") << report.summary() << "\n";
  return report.passed() ? kExitOk : kExitContent;
}

int cmd_stats(const std::string& manifest_path, bool as_json) {
  const DatasetStats st = dataset_stats(manifest_path);
  if (as_json) {
    std::cout << stats_to_json(st).dump(2) << "\n";
  } else {
    std::cout << stats_table(st);
  }
  return st.unreadable_samples.empty() ? kExitOk : kExitContent;
}

int cmd_preview(const std::string& manifest_path, std::int64_t sample_index, const std::string& axis_name,
                std::optional<int> slice, const std::string& out) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  if (sample_index < 0 || sample_index >= static_cast<std::int64_t>(manifest.samples.size())) {
    std::cerr << "error: sample index " << sample_index << " out of range [0, " << manifest.samples.size() << ")\n";
    return kExitUsage;
  }
  const auto& entry = manifest.samples[static_cast<std::size_t>(sample_index)];
  const fs::path root = fs::path(manifest_path).parent_path();
  AssembledSample sample;
  sample.s_volume = read_volume(root / entry.s_path).grid;
  sample.m_volume = read_volume(root / entry.m_path).grid;
  sample.placements = entry.placements;
  sample.sample_seed = entry.sample_seed;

  const Axis axis = parse_axis(axis_name);
  const Dims d = sample.s_volume.dims();
  const int depth = axis == Axis::X ? d.x : axis == Axis::Y ? d.y : d.z;
  const int index = slice.value_or(depth / 2);
  if (index < 0 || index >= depth) {
    std::cerr << "error: slice " << index << " out of range [0, " << depth << ") along " << axis_name << "\n";
    return kExitUsage;
  }
  render_preview(sample, axis, index, out);
  std::cout << "wrote " << out << " (sample " << sample_index << ", axis " << axis_name << ", slice " << index << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic primitive-shape volumes and segmentation masks"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a dataset of (S, m) volume pairs");
  generate->add_option("config", gen.config_path, "JSON config file (comments allowed)");
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--seed", gen.seed, "Master seed (overrides config)");
  generate->add_option("--samples", gen.samples, "Sample count (overrides config)");
  generate->add_option("--workers", gen.workers, "Worker threads (default: $PRIMSYNTH_WORKERS or all cores)");
  generate->add_option("--profile", gen.profiles, "Named profile; repeat to combine (applied before the config file)");

  std::string manifest_path;
  double spot_check = 0.1;
  auto* validate = app.add_subcommand("validate", "Audit a generated dataset");
  validate->add_option("manifest", manifest_path, "Path to manifest.json")->required();
  validate->add_option("--spot-check", spot_check, "Fraction of samples regenerated and byte-compared")
      ->check(CLI::Range(0.0, 1.0));

  bool as_json = false;
  auto* stats = app.add_subcommand("stats", "Summarize a generated dataset");
  stats->add_option("manifest", manifest_path, "Path to manifest.json")->required();
  stats->add_flag("--json", as_json, "Emit a JSON document");

  std::int64_t sample_index = 0;
  std::string axis = "z";
  std::optional<int> slice;
  std::string out = "preview.png";
  auto* preview = app.add_subcommand("preview", "Render one slice of a sample to PNG");
  preview->add_option("manifest", manifest_path, "Path to manifest.json")->required();
  preview->add_option("--sample", sample_index, "Sample index");
  preview->add_option("--axis", axis, "Slice normal: x, y or z")->check(CLI::IsMember({"x", "y", "z"}));
  preview->add_option("--slice", slice, "Slice index (default: middle)");
  preview->add_option("--out", out, "Output PNG path");

  auto* profiles = app.add_subcommand("profiles", "List the shipped config profiles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*validate) return cmd_validate(manifest_path, spot_check);
    if (*stats) return cmd_stats(manifest_path, as_json);
    if (*preview) return cmd_preview(manifest_path, sample_index, axis, slice, out);
    if (*profiles) {
      for (const auto& p : available_profiles()) std::cout << p << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
