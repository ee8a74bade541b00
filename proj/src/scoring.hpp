#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "forest.hpp"

namespace aniso {

/// Expected path length of an unsuccessful search in a binary search tree
/// over m points: c(1) = 0, c(2) = 1, c(m) = 2 H(m-1) - 2 (m-1)/m. The
/// harmonic number is summed exactly up to 10^6 terms and approximated by
/// ln(k) + 0.5772156649 beyond that.
double c_factor(std::uint64_t m);

enum class ScorerKind { depth, volume };

enum class BoundingPolicy { per_tree, global, user };

struct ScorerSpec {
  ScorerKind kind = ScorerKind::depth;
  /// Depth score uses (leaf.depth + c(leaf.count)) / c(psi) by default;
  /// strict drops the multi-point leaf correction and uses leaf.depth alone.
  bool strict_paper_depth = false;
  BoundingPolicy bounding = BoundingPolicy::per_tree;
  std::optional<HyperRectangle> user_box;
};

/// Fraction by which per-tree and global bounding boxes are grown before
/// volume scoring (total growth per dimension, split between both sides),
/// so subsample boundary points do not sit on a zero-volume face.
inline constexpr double kBoundingExpansion = 0.005;

HyperRectangle expand_box(const HyperRectangle& box, double fraction = kBoundingExpansion);

/// Normalized depth of x in one tree; smaller means easier to isolate.
/// Trees grown on a single point have no depth signal and score 0.
double depth_score(const IsolationTree& tree, std::span<const double> x, bool strict = false);

/// Density of the leaf holding x relative to the bounding box:
/// (leaf.count / psi) * V(bounding) / V(leaf clipped to bounding).
/// Volumes are accumulated in log space and extents are floored at
/// 1e-12 times the largest bounding extent, so scores stay positive and
/// finite in high dimension and on degenerate boxes.
double volume_score(const IsolationTree& tree, std::span<const double> x,
                    const HyperRectangle& bounding);

/// Resolves the bounding box each tree scores against under spec.bounding.
std::vector<HyperRectangle> scoring_bounds(const ForestModel& model, const ScorerSpec& spec);

/// Per-tree score vector for one point, in tree order.
std::vector<double> score_vector(const ForestModel& model, std::span<const double> x,
                                 const ScorerSpec& spec);

/// Same, against bounds precomputed once via scoring_bounds (hot path).
void score_vector_into(const ForestModel& model, std::span<const double> x,
                       const ScorerSpec& spec, std::span<const HyperRectangle> bounds,
                       std::span<double> out);

}  // namespace aniso
