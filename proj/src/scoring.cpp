#include "scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aniso {

namespace {

constexpr double kEulerGamma = 0.5772156649;
constexpr std::uint64_t kExactHarmonicLimit = 1'000'000;

double harmonic(std::uint64_t k) {
  if (k <= kExactHarmonicLimit) {
    double sum = 0.0;
    for (std::uint64_t i = 1; i <= k; ++i) sum += 1.0 / static_cast<double>(i);
    return sum;
  }
  return std::log(static_cast<double>(k)) + kEulerGamma;
}

}  // namespace

double c_factor(std::uint64_t m) {
  if (m == 0) fail(ErrorCode::invalid_argument, "c_factor needs m >= 1");
  if (m == 1) return 0.0;
  if (m == 2) return 1.0;
  // Small m dominates (leaf counts), so cache the exact values once.
  constexpr std::uint64_t kTableSize = 4096;
  static const std::vector<double> table = [] {
    std::vector<double> t(kTableSize + 1);
    for (std::uint64_t m = 3; m <= kTableSize; ++m) {
      t[m] = 2.0 * harmonic(m - 1) - 2.0 * static_cast<double>(m - 1) / static_cast<double>(m);
    }
    return t;
  }();
  if (m <= kTableSize) return table[m];
  return 2.0 * harmonic(m - 1) - 2.0 * static_cast<double>(m - 1) / static_cast<double>(m);
}

HyperRectangle expand_box(const HyperRectangle& box, double fraction) {
  HyperRectangle out = box;
  for (std::size_t j = 0; j < out.dim(); ++j) {
    const double pad = fraction * (out.upper[j] - out.lower[j]) / 2.0;
    out.lower[j] -= pad;
    out.upper[j] += pad;
  }
  return out;
}

double depth_score(const IsolationTree& tree, std::span<const double> x, bool strict) {
  if (tree.subsample_size() == 1) return 0.0;
  const LeafNode& leaf = tree.locate_leaf(x);
  const double numerator =
      strict ? static_cast<double>(leaf.depth)
             : static_cast<double>(leaf.depth) + c_factor(leaf.count);
  return numerator / c_factor(tree.subsample_size());
}

double volume_score(const IsolationTree& tree, std::span<const double> x,
                    const HyperRectangle& bounding) {
  if (bounding.dim() != tree.dim()) {
    fail(ErrorCode::dimension_mismatch, "bounding box dimension does not match the tree");
  }
  const LeafNode& leaf = tree.locate_leaf(x);

  double max_extent = 0.0;
  for (std::size_t j = 0; j < bounding.dim(); ++j) {
    max_extent = std::max(max_extent, bounding.upper[j] - bounding.lower[j]);
  }
  const double eps = max_extent > 0.0 ? 1e-12 * max_extent : 1e-12;

  double log_bounding = 0.0;
  double log_clipped = 0.0;
  for (std::size_t j = 0; j < bounding.dim(); ++j) {
    double outer = bounding.upper[j] - bounding.lower[j];
    if (!(outer > 0.0)) outer = eps;
    double inner = std::min(leaf.rect.upper[j], bounding.upper[j]) -
                   std::max(leaf.rect.lower[j], bounding.lower[j]);
    if (!(inner > 0.0)) inner = eps;
    log_bounding += std::log(outer);
    log_clipped += std::log(inner);
  }

  const double occupancy =
      static_cast<double>(leaf.count) / static_cast<double>(tree.subsample_size());
  return occupancy * std::exp(log_bounding - log_clipped);
}

std::vector<HyperRectangle> scoring_bounds(const ForestModel& model, const ScorerSpec& spec) {
  std::vector<HyperRectangle> bounds;
  if (spec.kind != ScorerKind::volume) return bounds;
  bounds.reserve(model.trees().size());
  switch (spec.bounding) {
    case BoundingPolicy::per_tree:
      for (const auto& tree : model.trees()) bounds.push_back(expand_box(tree.bounding_box()));
      break;
    case BoundingPolicy::global: {
      const HyperRectangle box = expand_box(model.data_bounds());
      bounds.assign(model.trees().size(), box);
      break;
    }
    case BoundingPolicy::user: {
      if (!spec.user_box) {
        fail(ErrorCode::invalid_argument, "user bounding policy needs a box");
      }
      if (spec.user_box->dim() != model.dim()) {
        fail(ErrorCode::dimension_mismatch, "user bounding box dimension does not match");
      }
      for (std::size_t j = 0; j < spec.user_box->dim(); ++j) {
        const double lo = spec.user_box->lower[j];
        const double hi = spec.user_box->upper[j];
        if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
          fail(ErrorCode::invalid_argument,
               "user bounding box must be finite with lower <= upper in every dimension");
        }
      }
      bounds.assign(model.trees().size(), *spec.user_box);
      break;
    }
  }
  return bounds;
}

std::vector<double> score_vector(const ForestModel& model, std::span<const double> x,
                                 const ScorerSpec& spec) {
  const auto bounds = scoring_bounds(model, spec);
  std::vector<double> out(model.trees().size());
  score_vector_into(model, x, spec, bounds, out);
  return out;
}

void score_vector_into(const ForestModel& model, std::span<const double> x,
                       const ScorerSpec& spec, std::span<const HyperRectangle> bounds,
                       std::span<double> out) {
  const auto& trees = model.trees();
  for (std::size_t i = 0; i < trees.size(); ++i) {
    out[i] = spec.kind == ScorerKind::depth
                 ? depth_score(trees[i], x, spec.strict_paper_depth)
                 : volume_score(trees[i], x, bounds[i]);
  }
}

}  // namespace aniso
