#pragma once

#include <string>

#include "detector.hpp"

namespace aniso {

inline constexpr int kModelFormatVersion = 1;

/// Persists a fitted detector as versioned JSON: config, fitted threshold,
/// training-data bounds, and every tree (splits, leaf depth/count/region,
/// per-tree bounding box). Doubles are rendered shortest-round-trip, so a
/// load gives back bitwise-identical scores.
void save_model(const std::string& path, const Detector& detector);

/// Rejects files whose format version does not match (version_mismatch) and
/// structurally broken files (corrupt_file).
Detector load_model(const std::string& path);

}  // namespace aniso
