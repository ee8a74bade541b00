#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"

namespace aniso {

/// Axis-aligned box, possibly unbounded: leaf regions of an isolation tree
/// start from the whole space and get one side pinched per split.
struct HyperRectangle {
  std::vector<double> lower;
  std::vector<double> upper;

  HyperRectangle() = default;
  HyperRectangle(std::vector<double> lo, std::vector<double> hi)
      : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size()) {
      fail(ErrorCode::dimension_mismatch, "rectangle bounds differ in dimension");
    }
  }

  static HyperRectangle whole(std::size_t dim) {
    const double inf = std::numeric_limits<double>::infinity();
    return HyperRectangle(std::vector<double>(dim, -inf), std::vector<double>(dim, inf));
  }

  std::size_t dim() const noexcept { return lower.size(); }

  bool contains(std::span<const double> x) const {
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (x[j] < lower[j] || x[j] >= upper[j]) return false;
    }
    return true;
  }

  /// Intersection, clamped so no dimension ends up with upper < lower.
  HyperRectangle clip_to(const HyperRectangle& box) const {
    HyperRectangle out = *this;
    for (std::size_t j = 0; j < out.dim(); ++j) {
      if (out.lower[j] < box.lower[j]) out.lower[j] = box.lower[j];
      if (out.upper[j] > box.upper[j]) out.upper[j] = box.upper[j];
      if (out.upper[j] < out.lower[j]) out.upper[j] = out.lower[j];
    }
    return out;
  }
};

}  // namespace aniso
