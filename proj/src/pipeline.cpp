#include "primsynth/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "primsynth/errors.hpp"

namespace primsynth {

namespace fs = std::filesystem;

std::uint64_t sample_seed_for(std::uint64_t master_seed, std::int64_t sample_index, int attempt) {
  const std::uint64_t base = derive_key(master_seed, static_cast<std::uint64_t>(sample_index));
  return attempt == 0 ? base : derive_key(base, static_cast<std::uint64_t>(attempt));
}

RandomStream derive_sample_stream(std::uint64_t master_seed, std::int64_t sample_index) {
  return RandomStream(sample_seed_for(master_seed, sample_index));
}

std::vector<ShapeClass> draw_classes(const GenConfig& config, RandomStream& class_stream) {
  const auto allowed = config.allowed_classes();
  int count = config.m_objects;
  if (config.m_objects_max > config.m_objects) {
    count = static_cast<int>(class_stream.uniform_int(config.m_objects, config.m_objects_max));
  }
  std::vector<ShapeClass> classes;
  classes.reserve(static_cast<std::size_t>(count));
  const auto last = static_cast<std::int64_t>(allowed.size()) - 1;
  for (int i = 0; i < count; ++i) {
    classes.push_back(allowed[static_cast<std::size_t>(class_stream.uniform_int(0, last))]);
  }
  return classes;
}

PrimitiveObject rebuild_object(const GenConfig& config, std::uint64_t sample_seed, const PlacementRecord& record) {
  RandomStream stream =
      RandomStream(sample_seed).substream(kObjectStreamBase + static_cast<std::uint64_t>(record.draw_index));
  return build_primitive(record.shape_class, config, stream);
}

AssembledSample generate_sample_from_seed(const GenConfig& config, std::uint64_t sample_seed) {
  const RandomStream root(sample_seed);
  RandomStream class_stream = root.substream(kClassStream);
  const auto classes = draw_classes(config, class_stream);

  std::vector<PrimitiveObject> objects;
  objects.reserve(classes.size());
  std::vector<std::size_t> volumes;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    RandomStream obj_stream = root.substream(kObjectStreamBase + j);
    objects.push_back(build_primitive(classes[j], config, obj_stream));
    volumes.push_back(objects.back().volume);
  }
  const auto order = volume_order(volumes);

  RandomStream placement_stream = root.substream(kPlacementStream);
  OccupancyAccumulator state(config.grid);
  std::vector<PlacementRecord> records;
  std::vector<PlacedObject> placed;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const PrimitiveObject& obj = objects[order[n]];
    const Footprint fp = Footprint::of(obj.occupancy, local_origin(obj));
    PlacementRecord rec = place_object(state, obj, fp, config, placement_stream);
    rec.order_index = static_cast<int>(n);
    rec.draw_index = static_cast<int>(order[n]);
    if (rec.accepted) placed.push_back(PlacedObject{&obj, rec.center});
    records.push_back(rec);
  }

  AssembledSample sample = composite(placed, config);
  sample.placements = std::move(records);
  sample.sample_seed = sample_seed;
  return sample;
}

AssembledSample generate_sample(const GenConfig& config, std::int64_t sample_index) {
  config.validate();
  AssembledSample sample;
  for (int attempt = 0; attempt <= kMaxRegenerations; ++attempt) {
    sample = generate_sample_from_seed(config, sample_seed_for(config.master_seed, sample_index, attempt));
    sample.regeneration_attempts = attempt;
    if (sample.accepted_count() > 0) break;
  }
  return sample;
}

VolumeHeader s_volume_header(const GenConfig& config) { return VolumeHeader{config.grid, VoxelType::UInt8}; }

VolumeHeader m_volume_header(const GenConfig& config) {
  return VolumeHeader{config.grid, config.label_mode == LabelMode::Instance ? VoxelType::UInt16 : VoxelType::UInt8};
}

std::string sample_file_name(std::int64_t index, char which, VolumeFormat format) {
  std::ostringstream os;
  os << "samples/sample_" << std::setw(6) << std::setfill('0') << index << '_' << which << volume_extension(format);
  return os.str();
}

int default_worker_count() {
  if (const char* env = std::getenv("PRIMSYNTH_WORKERS"); env != nullptr && *env != '\0') {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

std::optional<std::string> reproducible_timestamp() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (env == nullptr || *env == '\0') return std::nullopt;
  const std::time_t t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

}  // namespace

DatasetManifest generate_dataset(const GenConfig& config, const fs::path& output_dir, int workers) {
  config.validate();
  if (workers < 1) throw ConfigError("workers must be >= 1");

  std::error_code ec;
  fs::create_directories(output_dir / "samples", ec);
  if (ec) throw IoError("cannot create output directory " + output_dir.string() + ": " + ec.message());
  const fs::path marker = output_dir / kIncompleteMarker;
  {
    std::FILE* f = std::fopen(marker.c_str(), "w");
    if (f == nullptr) throw IoError("output directory " + output_dir.string() + " is not writable");
    std::fputs("generation in progress or aborted\n", f);
    std::fclose(f);
  }

  DatasetManifest manifest;
  manifest.tool_version = tool_version();
  manifest.created_at = reproducible_timestamp();
  manifest.config = config;
  manifest.samples.resize(static_cast<std::size_t>(config.n_samples));

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<std::int64_t> failed_index;
  std::string failure;

  const VolumeHeader s_header = s_volume_header(config);
  const VolumeHeader m_header = m_volume_header(config);

  auto worker = [&]() {
    while (!failed.load()) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= config.n_samples) return;
      try {
        AssembledSample sample = generate_sample(config, i);
        SampleEntry& entry = manifest.samples[static_cast<std::size_t>(i)];
        entry.index = i;
        entry.sample_seed = sample.sample_seed;
        entry.regeneration_attempts = sample.regeneration_attempts;
        entry.s_path = sample_file_name(i, 's', config.output_format);
        entry.m_path = sample_file_name(i, 'm', config.output_format);
        write_volume(sample.s_volume, s_header, output_dir / entry.s_path);
        write_volume(sample.m_volume, m_header, output_dir / entry.m_path);
        entry.placements = std::move(sample.placements);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failed_index || i < *failed_index) {
          failed_index = i;
          failure = e.what();
        }
        failed.store(true);
      }
    }
  };

  const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, std::max<std::int64_t>(1, config.n_samples)));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  if (failed_index) {
    throw IoError("sample " + std::to_string(*failed_index) + " failed: " + failure);
  }
  write_manifest(manifest, output_dir / kManifestFileName);
  fs::remove(marker, ec);
  return manifest;
}

}  // namespace primsynth
