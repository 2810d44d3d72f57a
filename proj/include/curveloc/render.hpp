#pragma once
// Deterministic SVG drawings of an index.

#include "curveloc/point_location.hpp"

#include <string>

namespace curveloc {

enum class Layer : std::uint8_t { Arrangement, Subdivision, Landmarks };

const char* to_string(Layer l);

/// The viewBox is the working box scaled to 800 units wide, y pointing up.
/// Coordinates are printed with four decimals so output is byte-stable.
///   arrangement: curves and the straight edges of A
///   subdivision: curves, cell edges, tangents, connectors and piece boxes
///   landmarks:   cell edges and landmark dots (needs index.landmarks)
std::string render_svg(const AugmentedIndex& index, Layer layer);

}  // namespace curveloc
