#include "dataset.hpp"

#include <cmath>
#include <string>

namespace aniso {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    fail(ErrorCode::invalid_argument,
         "matrix storage has " + std::to_string(values_.size()) + " values, expected " +
             std::to_string(rows * cols));
  }
}

Dataset::Dataset(Matrix features, std::optional<std::vector<std::uint8_t>> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() == 0) {
    fail(ErrorCode::empty_input, "dataset needs at least one row");
  }
  if (features_.cols() == 0) {
    fail(ErrorCode::empty_input, "dataset needs at least one feature");
  }
  for (std::size_t r = 0; r < features_.rows(); ++r) {
    for (std::size_t c = 0; c < features_.cols(); ++c) {
      if (!std::isfinite(features_.at(r, c))) {
        fail(ErrorCode::non_finite_value,
             "non-finite value at row " + std::to_string(r) + ", column " + std::to_string(c));
      }
    }
  }
  if (labels_) {
    if (labels_->size() != features_.rows()) {
      fail(ErrorCode::invalid_argument,
           "label count " + std::to_string(labels_->size()) + " does not match row count " +
               std::to_string(features_.rows()));
    }
    for (std::size_t i = 0; i < labels_->size(); ++i) {
      if ((*labels_)[i] > 1) {
        fail(ErrorCode::label_not_binary, "label at row " + std::to_string(i) + " is not 0/1");
      }
    }
  }
}

const std::vector<std::uint8_t>& Dataset::labels() const {
  if (!labels_) {
    fail(ErrorCode::invalid_argument, "dataset has no labels");
  }
  return *labels_;
}

}  // namespace aniso
