#pragma once

#include <stdexcept>
#include <string>

namespace primsynth {

/// Invalid generation settings, unknown config keys, unknown profiles.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failures: unreadable, unwritable or truncated files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file was read but its content is malformed or an unsupported variant.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

/// A voxel value does not fit the requested on-disk datatype.
class DatatypeOverflow : public std::range_error {
 public:
  using std::range_error::range_error;
};

}  // namespace primsynth
