#include "aplr/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>

#include "aplr/dataset.hpp"
#include "aplr/metrics.hpp"

namespace aplr {

void TuneGrid::validate() const {
    if (axes.empty()) throw config_error("tuning grid is empty");
    if (folds < 2) throw config_error("tuning needs at least 2 folds");
    static const std::vector<std::string> known = {
        "max_interaction_level", "min_observations_in_split", "boosting_steps", "learning_rate"};
    for (const auto& [name, values] : axes) {
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw config_error("unknown grid axis: '" + name + "'");
        if (values.empty()) throw config_error("grid axis '" + name + "' has no values");
    }
}

TuneGrid TuneGrid::default_grid() {
    return {{{"max_interaction_level", {0, 1, 2, 100}},
             {"min_observations_in_split", {20, 100, 500}}},
            5};
}

namespace {

Hyperparams apply_cell(const Hyperparams& base, const TuneGrid& grid,
                       const std::vector<std::size_t>& pick) {
    Hyperparams hp = base;
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
        const auto& [name, values] = grid.axes[a];
        double v = values[pick[a]];
        if (name == "max_interaction_level")
            hp.max_interaction_level = static_cast<int>(v);
        else if (name == "min_observations_in_split")
            hp.min_observations_in_split = static_cast<int>(v);
        else if (name == "boosting_steps")
            hp.boosting_steps = static_cast<int>(v);
        else if (name == "learning_rate")
            hp.learning_rate = v;
    }
    return hp;
}

struct FoldData {
    EncodedMatrix x_train;
    std::vector<double> y_train;
    EncodedMatrix x_val;
    std::vector<double> y_val;
};

struct FoldScore {
    double loss;
    double accuracy;
};

/// Train one cell on one prepared fold. The fold's validation rows select the
/// step count (argmin of the validation-loss trace); the cell is scored by
/// that loss, with the matching accuracy reported alongside.
FoldScore run_cell_fold(const FoldData& fold, const Hyperparams& hp, Task task) {
    BoostEngine eng(fold.x_train, fold.y_train, task, hp);
    eng.attach_validation(fold.x_val, fold.y_val);
    eng.run(hp.boosting_steps);

    const auto& trace = eng.validation_trace();
    std::size_t best_m = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < trace.size(); ++m)
        if (trace[m] < best) {
            best = trace[m];
            best_m = m;
        }
    return {best, eng.validation_accuracy_trace()[best_m]};
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

TuneResult kfold_grid_search(const EncodedMatrix& x, const Labels& y, const TuneGrid& grid,
                             const Hyperparams& hp_base, std::uint64_t seed, Task task,
                             const std::optional<SmoteConfig>& smote) {
    grid.validate();
    hp_base.validate();
    if (x.rows() != y.size()) throw data_error("matrix and labels disagree on row count");
    if (x.rows() < static_cast<std::size_t>(grid.folds))
        throw data_error("fewer rows than folds");

    const int k = grid.folds;
    std::vector<int> fold_of =
        task == Task::classification
            ? stratified_fold_assignment(y, k, derive_seed(seed, "folds"))
            : fold_assignment(y.size(), k, derive_seed(seed, "folds"));

    // Folds are prepared once and shared across cells; SMOTE runs on the
    // training side of each fold only.
    std::vector<FoldData> folds;
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> tr, va;
        for (std::size_t i = 0; i < y.size(); ++i)
            (fold_of[i] == f ? va : tr).push_back(i);

        FoldData fd;
        fd.x_val = x.take_rows(va);
        for (auto i : va) fd.y_val.push_back(y.y[i]);
        if (task == Task::classification) {
            bool has0 = false, has1 = false;
            for (double v : fd.y_val) (v == 0.0 ? has0 : has1) = true;
            if (!has0 || !has1)
                throw data_error("fold " + std::to_string(f) + " has a single class");
        }

        EncodedMatrix xtr = x.take_rows(tr);
        Labels ytr{{}, y.kind};
        for (auto i : tr) ytr.y.push_back(y.y[i]);
        if (smote) {
            SmoteConfig cfg = *smote;
            cfg.seed = derive_seed(seed, "smote-fold-" + std::to_string(f));
            auto balanced = oversample(xtr, ytr, cfg);
            fd.x_train = std::move(balanced.x);
            fd.y_train = std::move(balanced.y.y);
        } else {
            fd.x_train = std::move(xtr);
            fd.y_train = std::move(ytr.y);
        }
        folds.push_back(std::move(fd));
    }

    // Cells in grid order, last axis fastest.
    std::vector<std::vector<std::size_t>> cells;
    std::vector<std::size_t> pick(grid.axes.size(), 0);
    bool more = true;
    while (more) {
        cells.push_back(pick);
        more = false;
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            if (++pick[a] < grid.axes[a].second.size()) {
                more = true;
                break;
            }
            pick[a] = 0;
        }
    }

    // Every (cell, fold) task is independent; fan out across the worker pool
    // and reduce in fixed order.
    struct Job {
        std::size_t cell;
        int fold;
    };
    std::vector<Job> jobs;
    std::vector<Hyperparams> cell_hp;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        cell_hp.push_back(apply_cell(hp_base, grid, cells[c]));
        for (int f = 0; f < k; ++f) jobs.push_back({c, f});
    }
    std::vector<FoldScore> scores(jobs.size());
    unsigned workers = std::min<unsigned>(worker_threads(), static_cast<unsigned>(jobs.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            scores[i] = run_cell_fold(folds[static_cast<std::size_t>(jobs[i].fold)],
                                      cell_hp[jobs[i].cell], task);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::future<void>> futs;
        for (unsigned t = 0; t < workers; ++t)
            futs.push_back(std::async(std::launch::async, worker));
        for (auto& fut : futs) fut.get();
    }

    TuneResult out;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t best_cell = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::vector<double> losses, accs;
        for (std::size_t i = 0; i < jobs.size(); ++i)
            if (jobs[i].cell == c) {
                losses.push_back(scores[i].loss);
                accs.push_back(scores[i].accuracy);
            }
        CellResult cr;
        cr.hp = cell_hp[c];
        cr.mean_loss = mean_of(losses);
        cr.std_loss = std_of(losses);
        cr.mean_accuracy = mean_of(accs);
        cr.std_accuracy = std_of(accs);
        out.cells.push_back(cr);

        bool better = cr.mean_loss < best_loss;
        if (cr.mean_loss == best_loss) {
            const auto& cur = out.cells[best_cell].hp;
            if (cr.hp.max_interaction_level < cur.max_interaction_level)
                better = true;
            else if (cr.hp.max_interaction_level == cur.max_interaction_level &&
                     cr.hp.min_observations_in_split > cur.min_observations_in_split)
                better = true;
        }
        if (better) {
            best_loss = cr.mean_loss;
            best_cell = c;
        }
    }
    out.best = out.cells[best_cell].hp;
    out.best_loss = best_loss;
    return out;
}

}  // namespace aplr
