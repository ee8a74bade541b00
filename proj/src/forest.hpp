#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dataset.hpp"
#include "tree.hpp"

namespace aniso {

struct FitConfig {
  std::uint32_t n_estimators = 100;
  std::uint32_t subsample_size = 256;
  std::uint64_t seed = 0;
};

/// Draws min(psi, n_rows) distinct row indices (partial Fisher-Yates).
std::vector<std::uint32_t> subsample_indices(std::size_t n_rows, std::size_t psi,
                                             std::mt19937_64& rng);

class ForestModel {
public:
  ForestModel(std::vector<IsolationTree> trees, FitConfig config, HyperRectangle data_bounds);

  const std::vector<IsolationTree>& trees() const noexcept { return trees_; }
  const FitConfig& config() const noexcept { return config_; }
  std::size_t dim() const noexcept { return data_bounds_.dim(); }

  /// Tight box of the full training data (for the global bounding policy).
  const HyperRectangle& data_bounds() const noexcept { return data_bounds_; }

  /// True when trees were grown on single-point subsamples, which makes
  /// every depth score 0 and the detector useless; callers surface this
  /// as a warning rather than an error.
  bool degenerate() const noexcept;

private:
  std::vector<IsolationTree> trees_;
  FitConfig config_;
  HyperRectangle data_bounds_;
};

/// Fits config.n_estimators trees on independent subsamples. Tree i uses an
/// RNG stream derived from (config.seed, i), so results are reproducible and
/// independent of how trees are scheduled across threads.
ForestModel fit_forest(const Dataset& data, const FitConfig& config);

}  // namespace aniso
