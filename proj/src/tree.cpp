#include "tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace aniso {

std::uint32_t max_depth_for(std::uint64_t psi) {
  if (psi == 0) fail(ErrorCode::empty_input, "subsample size must be at least 1");
  if (psi == 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(psi - 1));
}

IsolationTree::IsolationTree(std::vector<TreeNode> nodes, std::uint32_t subsample_size,
                             HyperRectangle bounding_box)
    : nodes_(std::move(nodes)),
      subsample_size_(subsample_size),
      bounding_box_(std::move(bounding_box)) {
  if (nodes_.empty()) fail(ErrorCode::empty_input, "tree has no nodes");
}

const LeafNode& IsolationTree::locate_leaf(std::span<const double> x) const {
  if (x.size() != dim()) {
    fail(ErrorCode::dimension_mismatch,
         "point has " + std::to_string(x.size()) + " dimensions, tree expects " +
             std::to_string(dim()));
  }
  std::uint32_t idx = 0;
  for (;;) {
    const TreeNode& node = nodes_[idx];
    if (const auto* leaf = std::get_if<LeafNode>(&node)) return *leaf;
    const auto& split = std::get<SplitNode>(node);
    idx = x[split.feature] < split.threshold ? split.left : split.right;
  }
}

namespace {

class TreeBuilder {
public:
  TreeBuilder(const Matrix& pts, std::mt19937_64& rng)
      : pts_(pts),
        rng_(rng),
        max_depth_(max_depth_for(pts.rows())),
        rect_(HyperRectangle::whole(pts.cols())),
        index_(pts.rows()) {
    std::iota(index_.begin(), index_.end(), 0u);
    lo_.resize(pts.cols());
    hi_.resize(pts.cols());
  }

  std::vector<TreeNode> take_nodes() && { return std::move(nodes_); }

  std::uint32_t build(std::size_t begin, std::size_t end, std::uint32_t depth) {
    const std::size_t count = end - begin;
    std::vector<std::uint32_t> splittable;
    if (count > 1 && depth < max_depth_) {
      scan_bounds(begin, end);
      for (std::uint32_t f = 0; f < pts_.cols(); ++f) {
        if (lo_[f] < hi_[f]) splittable.push_back(f);
      }
    }
    if (splittable.empty()) {
      const auto idx = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back(LeafNode{depth, static_cast<std::uint32_t>(count), rect_});
      return idx;
    }

    std::uniform_int_distribution<std::size_t> pick(0, splittable.size() - 1);
    const std::uint32_t f = splittable[pick(rng_)];
    const double t = draw_threshold(lo_[f], hi_[f]);

    const auto mid_it = std::partition(
        index_.begin() + begin, index_.begin() + end,
        [&](std::uint32_t row) { return pts_.at(row, f) < t; });
    const auto mid = static_cast<std::size_t>(mid_it - index_.begin());

    const auto idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back(SplitNode{f, t, 0, 0});

    const double saved_upper = rect_.upper[f];
    rect_.upper[f] = t;
    const std::uint32_t left = build(begin, mid, depth + 1);
    rect_.upper[f] = saved_upper;

    const double saved_lower = rect_.lower[f];
    rect_.lower[f] = t;
    const std::uint32_t right = build(mid, end, depth + 1);
    rect_.lower[f] = saved_lower;

    auto& split = std::get<SplitNode>(nodes_[idx]);
    split.left = left;
    split.right = right;
    return idx;
  }

private:
  void scan_bounds(std::size_t begin, std::size_t end) {
    for (std::uint32_t f = 0; f < pts_.cols(); ++f) {
      lo_[f] = std::numeric_limits<double>::infinity();
      hi_[f] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = pts_.row(index_[i]);
      for (std::uint32_t f = 0; f < pts_.cols(); ++f) {
        lo_[f] = std::min(lo_[f], row[f]);
        hi_[f] = std::max(hi_[f], row[f]);
      }
    }
  }

  // Threshold in the open interval (lo, hi): both children stay nonempty
  // because some point sits at lo (goes left) and some at hi (goes right).
  // When rounding lands on an endpoint, nudge to the nearest interior double.
  double draw_threshold(double lo, double hi) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double t = lo + unit(rng_) * (hi - lo);
    if (t <= lo) t = std::nextafter(lo, std::numeric_limits<double>::infinity());
    if (t > hi) t = hi;
    return t;
  }

  const Matrix& pts_;
  std::mt19937_64& rng_;
  std::uint32_t max_depth_;
  HyperRectangle rect_;
  std::vector<std::uint32_t> index_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<TreeNode> nodes_;
};

HyperRectangle tight_bounds(const Matrix& pts) {
  HyperRectangle box(std::vector<double>(pts.cols(), std::numeric_limits<double>::infinity()),
                     std::vector<double>(pts.cols(), -std::numeric_limits<double>::infinity()));
  for (std::size_t r = 0; r < pts.rows(); ++r) {
    const auto row = pts.row(r);
    for (std::size_t f = 0; f < pts.cols(); ++f) {
      box.lower[f] = std::min(box.lower[f], row[f]);
      box.upper[f] = std::max(box.upper[f], row[f]);
    }
  }
  return box;
}

}  // namespace

IsolationTree fit_tree(const Matrix& points, std::mt19937_64& rng) {
  if (points.rows() == 0) fail(ErrorCode::empty_input, "cannot fit a tree on an empty subsample");
  if (points.cols() == 0) fail(ErrorCode::empty_input, "cannot fit a tree on zero features");

  TreeBuilder builder(points, rng);
  builder.build(0, points.rows(), 0);
  return IsolationTree(std::move(builder).take_nodes(),
                       static_cast<std::uint32_t>(points.rows()), tight_bounds(points));
}

}  // namespace aniso
