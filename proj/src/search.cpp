#include "errsim/search.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <stdexcept>
#include <thread>

namespace errsim {

std::vector<SearchCellResult> hyperparameter_search(std::span<const StepRecord> records,
                                                    NetRole role, const SearchGrid& grid,
                                                    const DhTable& nominal,
                                                    std::uint64_t seed, int workers) {
  if (grid.batch_sizes.empty() || grid.learning_rates.empty() ||
      grid.architectures.empty() || grid.encodings.empty()) {
    throw std::invalid_argument("hyperparameter_search: empty grid");
  }

  std::map<Encoding, ErrorDataset> datasets;
  for (Encoding enc : grid.encodings) {
    if (!datasets.contains(enc)) {
      datasets.emplace(enc, build_dataset(records, role, enc, nominal));
    }
  }

  std::vector<SearchCellResult> cells;
  for (int batch : grid.batch_sizes) {
    for (double lr : grid.learning_rates) {
      for (const std::vector<int>& arch : grid.architectures) {
        for (Encoding enc : grid.encodings) {
          SearchCellResult c;
          c.cell_index = cells.size();
          c.batch_size = batch;
          c.learning_rate = lr;
          c.architecture = arch;
          c.encoding = enc;
          cells.push_back(std::move(c));
        }
      }
    }
  }

  const auto run_cell = [&](SearchCellResult& cell) {
    TrainConfig cfg;
    cfg.batch_size = cell.batch_size;
    cfg.learning_rate = cell.learning_rate;
    cfg.epochs = grid.epochs;
    cfg.val_fraction = grid.val_fraction;
    cfg.seed = seed + cell.cell_index;
    try {
      TrainResult r = mlp_train(datasets.at(cell.encoding), cell.architecture, cfg);
      cell.best_val_mse = r.best_val_mse;
      cell.best_epoch = r.best_epoch;
      cell.history = std::move(r.history);
    } catch (const std::exception& e) {
      cell.failed = true;
      cell.error = e.what();
    }
  };

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
  if (n_workers == 1) {
    for (SearchCellResult& cell : cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
          run_cell(cells[i]);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::sort(cells.begin(), cells.end(), [](const SearchCellResult& a, const SearchCellResult& b) {
    if (a.failed != b.failed) return !a.failed;
    if (a.best_val_mse != b.best_val_mse) return a.best_val_mse < b.best_val_mse;
    return a.cell_index < b.cell_index;
  });
  return cells;
}

}  // namespace errsim
