#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "dataset.hpp"
#include "hyperrect.hpp"

namespace aniso {

struct SplitNode {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
};

struct LeafNode {
  std::uint32_t depth = 0;
  std::uint32_t count = 0;
  HyperRectangle rect;
};

using TreeNode = std::variant<SplitNode, LeafNode>;

/// Depth cap for a tree grown on psi points: ceil(log2 psi).
std::uint32_t max_depth_for(std::uint64_t psi);

/// One random isolation tree. Nodes live in a flat vector, root at index 0;
/// points go left on x[feature] < threshold, right otherwise, so sibling
/// regions tile the parent half-open.
class IsolationTree {
public:
  IsolationTree(std::vector<TreeNode> nodes, std::uint32_t subsample_size,
                HyperRectangle bounding_box);

  const LeafNode& locate_leaf(std::span<const double> x) const;

  std::uint32_t subsample_size() const noexcept { return subsample_size_; }
  std::size_t dim() const noexcept { return bounding_box_.dim(); }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

  /// Tight axis-aligned box of the subsample this tree was grown on
  /// (unexpanded; scoring policies decide how to pad it).
  const HyperRectangle& bounding_box() const noexcept { return bounding_box_; }

private:
  std::vector<TreeNode> nodes_;
  std::uint32_t subsample_size_ = 0;
  HyperRectangle bounding_box_;
};

/// Grows a tree on the given points (rows are the subsample). Splits pick a
/// feature uniformly among those with node-local min < max and a threshold
/// uniformly in the open interval (min, max); recursion stops at
/// max_depth_for(rows), single points, or nodes with no splittable feature.
IsolationTree fit_tree(const Matrix& points, std::mt19937_64& rng);

}  // namespace aniso
