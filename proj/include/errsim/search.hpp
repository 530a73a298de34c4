#pragma once

#include "errsim/mlp.hpp"

namespace errsim {

struct SearchGrid {
  std::vector<int> batch_sizes;
  std::vector<double> learning_rates;
  std::vector<std::vector<int>> architectures;  // hidden layer sizes
  std::vector<Encoding> encodings;
  int epochs = 200;
  double val_fraction = 0.2;
};

struct SearchCellResult {
  std::size_t cell_index = 0;
  int batch_size = 0;
  double learning_rate = 0.0;
  std::vector<int> architecture;
  Encoding encoding = Encoding::OC;
  double best_val_mse = 0.0;
  int best_epoch = -1;
  std::vector<EpochLoss> history;
  bool failed = false;
  std::string error;
};

/// Trains every grid combination on datasets rebuilt per encoding and ranks
/// the cells by best validation MSE (failed cells last, ties by cell index).
/// Each cell trains with seed + cell_index, so the ranking is deterministic
/// regardless of the worker count.
std::vector<SearchCellResult> hyperparameter_search(std::span<const StepRecord> records,
                                                    NetRole role, const SearchGrid& grid,
                                                    const DhTable& nominal,
                                                    std::uint64_t seed, int workers = 1);

}  // namespace errsim
