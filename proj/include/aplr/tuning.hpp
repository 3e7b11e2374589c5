#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aplr/boost.hpp"
#include "aplr/smote.hpp"

namespace aplr {

/// Hyperparameter grid. Axis order fixes the cell order (last axis fastest).
/// Supported axis names: max_interaction_level, min_observations_in_split,
/// boosting_steps, learning_rate.
struct TuneGrid {
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    int folds = 5;

    void validate() const;
    /// The two-axis grid used for classification runs by default.
    static TuneGrid default_grid();
};

struct CellResult {
    Hyperparams hp;
    double mean_loss = 0.0;
    double std_loss = 0.0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
};

struct TuneResult {
    Hyperparams best;
    double best_loss = 0.0;
    std::vector<CellResult> cells;  // grid order
};

/// Stratified k-fold grid search. Each cell trains every fold with fixed M
/// and learning rate; the fold's held-out rows drive the step-count choice
/// and score the cell by mean validation loss (binomial NLL for
/// classification, MSE for regression). When a SMOTE config is given, the
/// oversampling runs inside each training fold only. Fold assignment and all
/// derived seeds come from `seed`, so cells and folds can run in any order.
/// Ties go to fewer interactions, then larger min_observations_in_split.
TuneResult kfold_grid_search(const EncodedMatrix& x, const Labels& y, const TuneGrid& grid,
                             const Hyperparams& hp_base, std::uint64_t seed, Task task,
                             const std::optional<SmoteConfig>& smote = std::nullopt);

}  // namespace aplr
