#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "errors.hpp"

namespace aniso {

/// Dense row-major matrix of doubles.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  const std::vector<double>& values() const noexcept { return values_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Training/scoring data: N x d features, optionally one binary label per
/// row (1 = anomaly). Construction validates shape, finiteness, and labels.
class Dataset {
public:
  Dataset(Matrix features, std::optional<std::vector<std::uint8_t>> labels = std::nullopt);

  std::size_t size() const noexcept { return features_.rows(); }
  std::size_t dim() const noexcept { return features_.cols(); }
  const Matrix& features() const noexcept { return features_; }
  std::span<const double> point(std::size_t i) const { return features_.row(i); }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<std::uint8_t>& labels() const;

private:
  Matrix features_;
  std::optional<std::vector<std::uint8_t>> labels_;
};

}  // namespace aniso
