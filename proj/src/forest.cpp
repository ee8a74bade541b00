#include "forest.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "parallel.hpp"
#include "rng.hpp"

namespace aniso {

std::vector<std::uint32_t> subsample_indices(std::size_t n_rows, std::size_t psi,
                                             std::mt19937_64& rng) {
  if (n_rows == 0) fail(ErrorCode::empty_input, "cannot subsample an empty dataset");
  if (psi == 0) fail(ErrorCode::invalid_argument, "subsample size must be at least 1");
  const std::size_t k = std::min(psi, n_rows);

  std::vector<std::uint32_t> pool(n_rows);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n_rows - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

ForestModel::ForestModel(std::vector<IsolationTree> trees, FitConfig config,
                         HyperRectangle data_bounds)
    : trees_(std::move(trees)), config_(config), data_bounds_(std::move(data_bounds)) {
  if (trees_.empty()) fail(ErrorCode::empty_input, "forest has no trees");
  for (const auto& tree : trees_) {
    if (tree.dim() != data_bounds_.dim()) {
      fail(ErrorCode::dimension_mismatch, "tree dimension does not match the forest");
    }
  }
}

bool ForestModel::degenerate() const noexcept {
  return !trees_.empty() && trees_.front().subsample_size() == 1;
}

namespace {

HyperRectangle dataset_bounds(const Dataset& data) {
  HyperRectangle box(std::vector<double>(data.dim(), std::numeric_limits<double>::infinity()),
                     std::vector<double>(data.dim(), -std::numeric_limits<double>::infinity()));
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.point(r);
    for (std::size_t f = 0; f < data.dim(); ++f) {
      box.lower[f] = std::min(box.lower[f], row[f]);
      box.upper[f] = std::max(box.upper[f], row[f]);
    }
  }
  return box;
}

}  // namespace

ForestModel fit_forest(const Dataset& data, const FitConfig& config) {
  if (config.n_estimators == 0) {
    fail(ErrorCode::invalid_argument, "n_estimators must be at least 1");
  }
  if (config.subsample_size == 0) {
    fail(ErrorCode::invalid_argument, "subsample_size must be at least 1");
  }

  const std::size_t n_trees = config.n_estimators;
  std::vector<std::optional<IsolationTree>> slots(n_trees);

  parallel_for(n_trees, [&](std::size_t i) {
    auto rng = make_stream(config.seed, i);
    const auto rows = subsample_indices(data.size(), config.subsample_size, rng);
    Matrix sub(rows.size(), data.dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto src = data.point(rows[r]);
      for (std::size_t f = 0; f < data.dim(); ++f) sub.at(r, f) = src[f];
    }
    slots[i] = fit_tree(sub, rng);
  });

  std::vector<IsolationTree> trees;
  trees.reserve(n_trees);
  for (auto& slot : slots) trees.push_back(std::move(*slot));
  return ForestModel(std::move(trees), config, dataset_bounds(data));
}

}  // namespace aniso
