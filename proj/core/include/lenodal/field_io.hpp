#ifndef LENODAL_FIELD_IO_HPP
#define LENODAL_FIELD_IO_HPP

#include <filesystem>
#include <stdexcept>

#include "lenodal/grid.hpp"

namespace lenodal {

struct FieldIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CorruptFieldFile : FieldIoError {
    using FieldIoError::FieldIoError;
};
struct FieldVersionMismatch : FieldIoError {
    using FieldIoError::FieldIoError;
};

inline constexpr std::uint32_t kFieldFormatVersion = 1;

/// Binary field dump ("LEFD") plus a JSON metadata sidecar at path + ".json".
void save_field(const Field& f, const std::filesystem::path& path);
Field load_field(const std::filesystem::path& path);

/// One row per node: coordinates then value.
void export_csv(const Field& f, const std::filesystem::path& path);

} // namespace lenodal

#endif
