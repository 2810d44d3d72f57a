#pragma once
// Binary index files: "CVPL", a u16 format version, then tagged sections.
// See docs/formats.md for the layout.

#include "curveloc/point_location.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace curveloc {

inline constexpr std::uint16_t kFormatVersion = 1;

/// Build time is a measurement, not index content, and is not stored;
/// everything else round-trips exactly.
std::string serialize(const AugmentedIndex& index);

/// Throws VersionMismatch for other format versions and CorruptData for
/// anything malformed.
AugmentedIndex deserialize(std::string_view bytes);

void save_index(const AugmentedIndex& index, const std::string& path);
AugmentedIndex load_index(const std::string& path);

}  // namespace curveloc
