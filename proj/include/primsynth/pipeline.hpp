#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "primsynth/assembly.hpp"
#include "primsynth/config.hpp"
#include "primsynth/manifest.hpp"
#include "primsynth/random.hpp"
#include "primsynth/volio.hpp"

namespace primsynth {

/// Samples whose every object was rejected are redrawn from the next
/// substream, at most this many times.
inline constexpr int kMaxRegenerations = 16;

/// Substream indices below a sample key. Object j (in draw order) uses kObjectStreamBase + j.
inline constexpr std::uint64_t kClassStream = 0;
inline constexpr std::uint64_t kPlacementStream = 1;
inline constexpr std::uint64_t kObjectStreamBase = 2;

/// Key of sample `index`; attempt > 0 selects a regeneration substream.
[[nodiscard]] std::uint64_t sample_seed_for(std::uint64_t master_seed, std::int64_t sample_index, int attempt = 0);

/// Stream of sample `index`; a pure function of (master_seed, index).
[[nodiscard]] RandomStream derive_sample_stream(std::uint64_t master_seed, std::int64_t sample_index);

/// Object count and classes for one sample, drawn uniformly from the allowed set.
[[nodiscard]] std::vector<ShapeClass> draw_classes(const GenConfig& config, RandomStream& class_stream);

/// One assembly attempt keyed directly by a sample seed.
[[nodiscard]] AssembledSample generate_sample_from_seed(const GenConfig& config, std::uint64_t sample_seed);

/// Rebuilds object `draw_index` of a sample exactly as the generator did.
[[nodiscard]] PrimitiveObject rebuild_object(const GenConfig& config, std::uint64_t sample_seed,
                                             const PlacementRecord& record);

/// Full sample including regeneration of all-rejected draws.
[[nodiscard]] AssembledSample generate_sample(const GenConfig& config, std::int64_t sample_index);

[[nodiscard]] VolumeHeader s_volume_header(const GenConfig& config);
[[nodiscard]] VolumeHeader m_volume_header(const GenConfig& config);

/// Relative file names used for sample `index`.
[[nodiscard]] std::string sample_file_name(std::int64_t index, char which, VolumeFormat format);

/// Writes n_samples pairs under output_dir/samples and the manifest last.
/// Output bytes do not depend on `workers`. An INCOMPLETE marker exists in
/// output_dir until the manifest has been written. I/O failures throw
/// IoError naming the failing sample index.
DatasetManifest generate_dataset(const GenConfig& config, const std::filesystem::path& output_dir, int workers);

/// Worker count from PRIMSYNTH_WORKERS, else hardware concurrency.
[[nodiscard]] int default_worker_count();

}  // namespace primsynth
