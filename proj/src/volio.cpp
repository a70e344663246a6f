#include "primsynth/volio.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "primsynth/errors.hpp"

namespace primsynth {

namespace fs = std::filesystem;

namespace {

constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtUint16 = 512;
constexpr std::int16_t kXformScannerAnat = 1;

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v & 0xFF);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}
void put_i16(std::uint8_t* p, std::int16_t v) { put_u16(p, static_cast<std::uint16_t>(v)); }
void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF);
}
void put_i32(std::uint8_t* p, std::int32_t v) { put_u32(p, static_cast<std::uint32_t>(v)); }
void put_f32(std::uint8_t* p, float v) { put_u32(p, std::bit_cast<std::uint32_t>(v)); }

std::uint16_t get_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }
std::int16_t get_i16(const std::uint8_t* p) { return static_cast<std::int16_t>(get_u16(p)); }
std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
std::int32_t get_i32(const std::uint8_t* p) { return static_cast<std::int32_t>(get_u32(p)); }
float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

std::uint16_t max_value(VoxelType type) { return type == VoxelType::UInt8 ? 0xFF : 0xFFFF; }

void check_shape(const LabelVolume& grid, const VolumeHeader& header) {
  if (grid.dims() != header.dims) throw std::invalid_argument("volume dims do not match header");
  if (header.dims.x < 1 || header.dims.y < 1 || header.dims.z < 1 || header.dims.x > 32767 ||
      header.dims.y > 32767 || header.dims.z > 32767) {
    throw std::invalid_argument("volume dims must lie in [1, 32767]");
  }
}

void append_payload(std::vector<std::uint8_t>& out, const LabelVolume& grid, VoxelType type) {
  const auto limit = max_value(type);
  const std::size_t start = out.size();
  const int bytes = voxel_type_bytes(type);
  out.resize(start + grid.size() * static_cast<std::size_t>(bytes));
  std::uint8_t* p = out.data() + start;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint16_t v = grid.data()[i];
    if (v > limit) {
      throw DatatypeOverflow("voxel value " + std::to_string(v) + " does not fit " +
                             std::string(voxel_type_name(type)));
    }
    if (bytes == 1) {
      p[i] = static_cast<std::uint8_t>(v);
    } else {
      put_u16(p + 2 * i, v);
    }
  }
}

void decode_payload(const std::uint8_t* p, LabelVolume& grid, VoxelType type) {
  auto& data = grid.data();
  if (type == VoxelType::UInt8) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = p[i];
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = get_u16(p + 2 * i);
  }
}

}  // namespace

std::string_view voxel_type_name(VoxelType type) { return type == VoxelType::UInt8 ? "uint8" : "uint16"; }
int voxel_type_bytes(VoxelType type) { return type == VoxelType::UInt8 ? 1 : 2; }

std::vector<std::uint8_t> encode_nifti(const LabelVolume& grid, const VolumeHeader& header) {
  check_shape(grid, header);
  std::vector<std::uint8_t> out(kNiftiVoxOffset, 0);
  std::uint8_t* h = out.data();
  put_i32(h + 0, static_cast<std::int32_t>(kNiftiHeaderSize));
  h[38] = 'r';
  put_i16(h + 40, 3);
  put_i16(h + 42, static_cast<std::int16_t>(header.dims.x));
  put_i16(h + 44, static_cast<std::int16_t>(header.dims.y));
  put_i16(h + 46, static_cast<std::int16_t>(header.dims.z));
  for (int i = 4; i < 8; ++i) put_i16(h + 40 + 2 * i, 1);
  const bool u8 = header.datatype == VoxelType::UInt8;
  put_i16(h + 70, u8 ? kDtUint8 : kDtUint16);
  put_i16(h + 72, u8 ? 8 : 16);
  put_f32(h + 76, 1.0f);  // qfac
  for (int i = 0; i < 3; ++i) put_f32(h + 80 + 4 * i, static_cast<float>(header.spacing[static_cast<std::size_t>(i)]));
  for (int i = 3; i < 7; ++i) put_f32(h + 80 + 4 * i, 1.0f);
  put_f32(h + 108, static_cast<float>(kNiftiVoxOffset));
  put_f32(h + 112, 1.0f);  // scl_slope
  put_f32(h + 116, 0.0f);  // scl_inter
  const char descrip[] = "primsynth synthetic volume";
  std::memcpy(h + 148, descrip, sizeof(descrip) - 1);
  put_i16(h + 252, kXformScannerAnat);
  put_i16(h + 254, kXformScannerAnat);
  // Identity quaternion and identity sform scaled by spacing.
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      const float v = (r == c) ? static_cast<float>(header.spacing[static_cast<std::size_t>(r)]) : 0.0f;
      put_f32(h + 280 + 16 * r + 4 * c, v);
    }
  }
  std::memcpy(h + 344, "n+1\0", 4);
  append_payload(out, grid, header.datatype);
  return out;
}

LoadedVolume decode_nifti(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
  if (bytes.size() < kNiftiHeaderSize) {
    throw FormatError(origin + ": truncated NIfTI header (" + std::to_string(bytes.size()) + " bytes)");
  }
  const std::uint8_t* h = bytes.data();
  const std::int32_t sizeof_hdr = get_i32(h);
  if (sizeof_hdr != static_cast<std::int32_t>(kNiftiHeaderSize)) {
    const std::uint32_t swapped = (std::uint32_t{h[0]} << 24) | (std::uint32_t{h[1]} << 16) |
                                  (std::uint32_t{h[2]} << 8) | std::uint32_t{h[3]};
    if (swapped == kNiftiHeaderSize) {
      throw FormatError(origin + ": big-endian NIfTI files are not supported");
    }
    if (sizeof_hdr == 540) throw FormatError(origin + ": NIfTI-2 files are not supported");
    throw FormatError(origin + ": not a NIfTI-1 file (sizeof_hdr=" + std::to_string(sizeof_hdr) + ")");
  }
  if (std::memcmp(h + 344, "ni1\0", 4) == 0) {
    throw FormatError(origin + ": two-file NIfTI (.hdr/.img, magic 'ni1') is not supported");
  }
  if (std::memcmp(h + 344, "n+1\0", 4) != 0) {
    throw FormatError(origin + ": bad NIfTI magic");
  }
  const int ndim = get_i16(h + 40);
  if (ndim < 3 || ndim > 7) throw FormatError(origin + ": unsupported dimensionality " + std::to_string(ndim));
  for (int i = 4; i <= ndim; ++i) {
    if (get_i16(h + 40 + 2 * i) != 1) throw FormatError(origin + ": only 3D volumes are supported");
  }
  VolumeHeader header;
  header.dims = Dims{get_i16(h + 42), get_i16(h + 44), get_i16(h + 46)};
  if (header.dims.x < 1 || header.dims.y < 1 || header.dims.z < 1) {
    throw FormatError(origin + ": non-positive dimension");
  }
  const std::int16_t datatype = get_i16(h + 70);
  const std::int16_t bitpix = get_i16(h + 72);
  if (datatype == kDtUint8 && bitpix == 8) {
    header.datatype = VoxelType::UInt8;
  } else if (datatype == kDtUint16 && bitpix == 16) {
    header.datatype = VoxelType::UInt16;
  } else {
    throw FormatError(origin + ": unsupported datatype " + std::to_string(datatype) + " (bitpix " +
                      std::to_string(bitpix) + ")");
  }
  for (int i = 0; i < 3; ++i) header.spacing[static_cast<std::size_t>(i)] = get_f32(h + 80 + 4 * i);
  const float slope = get_f32(h + 112);
  const float inter = get_f32(h + 116);
  if (!((slope == 0.0f || slope == 1.0f) && inter == 0.0f)) {
    throw FormatError(origin + ": intensity scaling (scl_slope/scl_inter) is not supported");
  }
  const float vox_offset = get_f32(h + 108);
  if (!(vox_offset >= static_cast<float>(kNiftiVoxOffset)) || vox_offset != std::floor(vox_offset)) {
    throw FormatError(origin + ": invalid vox_offset");
  }
  const auto offset = static_cast<std::size_t>(vox_offset);
  const std::size_t payload = header.dims.count() * static_cast<std::size_t>(voxel_type_bytes(header.datatype));
  if (bytes.size() < offset + payload) {
    throw FormatError(origin + ": truncated payload (" + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(offset + payload) + ")");
  }
  LoadedVolume out{LabelVolume(header.dims), header};
  decode_payload(bytes.data() + offset, out.grid, header.datatype);
  return out;
}

std::vector<std::uint8_t> encode_raw_payload(const LabelVolume& grid, const VolumeHeader& header) {
  check_shape(grid, header);
  std::vector<std::uint8_t> out;
  append_payload(out, grid, header.datatype);
  return out;
}

std::string encode_raw_sidecar(const VolumeHeader& header) {
  nlohmann::ordered_json j;
  j["dims"] = {header.dims.x, header.dims.y, header.dims.z};
  j["datatype"] = voxel_type_name(header.datatype);
  j["order"] = "x-fastest";
  j["endianness"] = "little";
  j["spacing"] = {header.spacing[0], header.spacing[1], header.spacing[2]};
  return j.dump(2) + "\n";
}

fs::path raw_sidecar_path(const fs::path& raw_path) {
  fs::path p = raw_path;
  p.replace_extension(".json");
  return p;
}

std::string volume_extension(VolumeFormat format) { return format == VolumeFormat::Nifti ? ".nii" : ".raw"; }

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw IoError("cannot size " + path.string());
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (!bytes.empty() && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw IoError("cannot read " + path.string());
  }
  return bytes;
}

void write_file_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_volume(const LabelVolume& grid, const VolumeHeader& header, const fs::path& path) {
  const auto ext = path.extension();
  if (ext == ".nii") {
    write_file_bytes(path, encode_nifti(grid, header));
  } else if (ext == ".raw") {
    const auto payload = encode_raw_payload(grid, header);
    const std::string sidecar = encode_raw_sidecar(header);
    write_file_bytes(path, payload);
    write_file_bytes(raw_sidecar_path(path), std::vector<std::uint8_t>(sidecar.begin(), sidecar.end()));
  } else {
    throw std::invalid_argument("write_volume: unsupported extension '" + ext.string() + "' (use .nii or .raw)");
  }
}

namespace {

LoadedVolume read_raw(const fs::path& path) {
  const fs::path sidecar = raw_sidecar_path(path);
  const auto text = read_file_bytes(sidecar);
  VolumeHeader header;
  try {
    const auto j = nlohmann::json::parse(text.begin(), text.end());
    const auto& dims = j.at("dims");
    if (!dims.is_array() || dims.size() != 3) throw FormatError(sidecar.string() + ": dims must have 3 entries");
    header.dims = Dims{dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>()};
    const auto type = j.at("datatype").get<std::string>();
    if (type == "uint8") {
      header.datatype = VoxelType::UInt8;
    } else if (type == "uint16") {
      header.datatype = VoxelType::UInt16;
    } else {
      throw FormatError(sidecar.string() + ": unsupported datatype '" + type + "'");
    }
    if (j.at("order").get<std::string>() != "x-fastest") throw FormatError(sidecar.string() + ": unsupported order");
    if (j.at("endianness").get<std::string>() != "little") {
      throw FormatError(sidecar.string() + ": unsupported endianness");
    }
    const auto& sp = j.at("spacing");
    for (std::size_t i = 0; i < 3; ++i) header.spacing[i] = sp.at(i).get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(sidecar.string() + ": malformed sidecar: " + e.what());
  }
  if (header.dims.x < 1 || header.dims.y < 1 || header.dims.z < 1) {
    throw FormatError(sidecar.string() + ": non-positive dimension");
  }
  const auto payload = read_file_bytes(path);
  const std::size_t expected = header.dims.count() * static_cast<std::size_t>(voxel_type_bytes(header.datatype));
  if (payload.size() < expected) {
    throw FormatError(path.string() + ": truncated payload (" + std::to_string(payload.size()) + " bytes, expected " +
                      std::to_string(expected) + ")");
  }
  if (payload.size() > expected) throw FormatError(path.string() + ": payload longer than dims imply");
  LoadedVolume out{LabelVolume(header.dims), header};
  decode_payload(payload.data(), out.grid, header.datatype);
  return out;
}

}  // namespace

LoadedVolume read_volume(const fs::path& path) {
  const auto ext = path.extension();
  if (ext == ".nii") return decode_nifti(read_file_bytes(path), path.string());
  if (ext == ".raw") return read_raw(path);
  if (ext == ".gz") throw FormatError(path.string() + ": compressed NIfTI is not supported");
  throw FormatError(path.string() + ": unrecognized volume extension");
}

}  // namespace primsynth
