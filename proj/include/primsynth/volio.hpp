#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "primsynth/config.hpp"
#include "primsynth/grid.hpp"

namespace primsynth {

enum class VoxelType { UInt8, UInt16 };

[[nodiscard]] std::string_view voxel_type_name(VoxelType type);
[[nodiscard]] int voxel_type_bytes(VoxelType type);

struct VolumeHeader {
  Dims dims;
  VoxelType datatype = VoxelType::UInt8;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};

  friend bool operator==(const VolumeHeader&, const VolumeHeader&) = default;
};

struct LoadedVolume {
  LabelVolume grid;
  VolumeHeader header;
};

inline constexpr std::size_t kNiftiHeaderSize = 348;
inline constexpr std::size_t kNiftiVoxOffset = 352;

/// Single-file NIfTI-1 image: 348-byte header, 4 zero extension bytes, then
/// the payload, all little-endian. Throws DatatypeOverflow when a value does
/// not fit header.datatype.
[[nodiscard]] std::vector<std::uint8_t> encode_nifti(const LabelVolume& grid, const VolumeHeader& header);
[[nodiscard]] LoadedVolume decode_nifti(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

/// Little-endian x-fastest payload for the raw format.
[[nodiscard]] std::vector<std::uint8_t> encode_raw_payload(const LabelVolume& grid, const VolumeHeader& header);
[[nodiscard]] std::string encode_raw_sidecar(const VolumeHeader& header);

/// Sidecar document path paired with a .raw payload.
[[nodiscard]] std::filesystem::path raw_sidecar_path(const std::filesystem::path& raw_path);

/// File extension used for a volume format (".nii" or ".raw").
[[nodiscard]] std::string volume_extension(VolumeFormat format);

/// Format chosen from the extension: ".nii" writes NIfTI-1, ".raw" writes the
/// payload plus a ".json" sidecar next to it.
void write_volume(const LabelVolume& grid, const VolumeHeader& header, const std::filesystem::path& path);
[[nodiscard]] LoadedVolume read_volume(const std::filesystem::path& path);

[[nodiscard]] std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace primsynth
